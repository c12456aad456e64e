#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjrec {

// Exact closed-form instances behind every tolerance in the test suite.
// Pure formulas, no discretization anywhere.
//
//   ramp-collapse   eikonal; a tent g0 that the forward flow flattens to 0,
//                   so the backward pass returns 0 instead of the tent
//   vee-spread      eikonal; g0 = |x| opens into max{0,|x|-t} and comes back
//   xeik-bilateral  |x||p|; exponential wedge, forward == backward everywhere
//   valpha          eikonal; the zero solution next to a one-parameter family
//                   of backward solutions all vanishing at t=0
//   horizon-limit   eikonal; reconstructible exactly up to horizon 1
struct OracleInstance {
  std::string name;
  std::string hamiltonian;
  double T = 1;
  bool reconstructible = false;
  std::function<double(double)> g0;
  std::function<double(double, double)> u;  // (t, x)
  std::function<double(double)> gT;
  std::function<double(double, double)> w;
  std::function<double(double, double)> v;
};

// the non-uniqueness family: backward solutions with v(0,.) identically zero
inline double valpha_eval(double alpha, double t, double x) {
  if (alpha < 0) throw std::invalid_argument("valpha_eval: alpha must be >= 0");
  return alpha * std::min(0.0, std::abs(x) - t);
}

inline const std::vector<std::string>& oracle_names() {
  static const std::vector<std::string> names{"ramp-collapse", "vee-spread", "xeik-bilateral",
                                              "valpha", "horizon-limit"};
  return names;
}

inline OracleInstance make_oracle(const std::string& name, double T) {
  if (!(T > 0)) throw std::invalid_argument("make_oracle: T must be positive");
  OracleInstance o;
  o.name = name;
  o.T = T;

  if (name == "ramp-collapse") {
    o.hamiltonian = "eikonal";
    o.reconstructible = false;  // for every horizon
    o.g0 = [T](double x) { return std::max(0.0, T - std::abs(x)); };
    o.u = [T](double t, double x) { return std::max(0.0, T - t - std::abs(x)); };
    o.gT = [](double) { return 0.0; };
    o.w = [](double, double) { return 0.0; };
    o.v = [](double, double) { return 0.0; };
    return o;
  }
  if (name == "vee-spread") {
    o.hamiltonian = "eikonal";
    o.reconstructible = true;
    o.g0 = [](double x) { return std::abs(x); };
    o.u = [](double t, double x) { return std::max(0.0, std::abs(x) - t); };
    o.gT = [T](double x) { return std::max(0.0, std::abs(x) - T); };
    o.w = o.u;
    o.v = o.u;  // forward and backward coincide here
    return o;
  }
  if (name == "xeik-bilateral") {
    o.hamiltonian = "xeikonal";
    o.reconstructible = true;
    // plateau height: the wedge's minimum at t=0 equals tanh(T), so u = g0 at t=0
    const double c = (std::exp(2 * T) - 1) / (std::exp(2 * T) + 1);
    auto wedge = [T](double t, double x) {
      return std::max(1 - std::abs(x) * std::exp(t - T), std::abs(x) * std::exp(T - t) - 1);
    };
    o.g0 = [wedge](double x) { return wedge(0, x); };
    o.u = [wedge, c](double t, double x) { return std::max(wedge(t, x), c); };
    o.gT = [wedge, T](double x) { return wedge(T, x); };
    o.w = o.u;
    o.v = wedge;  // the backward solution has no plateau
    return o;
  }
  if (name == "valpha") {
    o.hamiltonian = "eikonal";
    o.reconstructible = true;
    o.g0 = [](double) { return 0.0; };
    o.u = [](double, double) { return 0.0; };
    o.gT = [](double) { return 0.0; };
    o.w = [](double, double) { return 0.0; };
    o.v = [](double t, double x) { return valpha_eval(1.0, t, x); };
    return o;
  }
  if (name == "horizon-limit") {
    o.hamiltonian = "eikonal";
    o.reconstructible = T <= 1;
    o.g0 = [](double x) { return std::min(0.0, 1 - std::abs(x)); };
    o.u = [](double t, double x) { return std::min(0.0, 1 - std::abs(x) - t); };
    o.gT = [T](double x) { return std::min(0.0, 1 - std::abs(x) - T); };
    o.w = [T](double t, double x) { return std::min({0.0, 1 - T, 1 - std::abs(x) - t}); };
    o.v = o.w;
    return o;
  }
  throw std::invalid_argument("unknown oracle instance '" + name + "'");
}

enum class OracleField { g0, u, gT, w, v };

inline double oracle_eval(const std::string& instance, OracleField field, double t, double x,
                          double T) {
  OracleInstance o = make_oracle(instance, T);
  switch (field) {
    case OracleField::g0: return o.g0(x);
    case OracleField::u: return o.u(t, x);
    case OracleField::gT: return o.gT(x);
    case OracleField::w: return o.w(t, x);
    case OracleField::v: return o.v(t, x);
  }
  throw std::invalid_argument("oracle_eval: bad field");
}

inline bool oracle_verdict(const std::string& instance, double T) {
  return make_oracle(instance, T).reconstructible;
}

}  // namespace hjrec
