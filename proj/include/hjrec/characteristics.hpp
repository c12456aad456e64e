#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjrec/hamiltonian.hpp"
#include "hjrec/solver.hpp"

namespace hjrec {

// A single-valued choice of characteristic field (x', p') = (H_p, -H_x),
// defined only where the selection declares the hamiltonian smooth.
// Integration refuses the moment it is asked to evaluate anywhere else.
// smooth_at is the exact predicate; kink_distance, when supplied, measures
// how far the state is from the nearest declared kink so the integrator can
// spot a crossing that exact comparisons would step straight over.
struct SubgradientSelection {
  int dim = 1;
  std::string name;
  std::function<void(std::span<const double> x, std::span<const double> p, std::span<double> dx,
                     std::span<double> dp)>
      field;
  std::function<bool(std::span<const double> x, std::span<const double> p)> smooth_at;
  std::function<double(std::span<const double> x, std::span<const double> p)> kink_distance;
};

inline SubgradientSelection selection_for(const HamiltonianSpec& spec) {
  SubgradientSelection sel;
  sel.dim = spec.dim;
  sel.name = spec.name;
  if (!spec.gradient_p || !spec.gradient_x)
    throw std::invalid_argument("selection_for: hamiltonian '" + spec.name +
                                "' carries no gradient fields");
  sel.field = [spec](std::span<const double> x, std::span<const double> p, std::span<double> dx,
                     std::span<double> dp) {
    spec.gradient_p(x, p, dx);
    spec.gradient_x(x, p, dp);
    for (auto& c : dp) c = -c;
  };

  auto nonzero = [](std::span<const double> v) {
    double n = 0;
    for (double c : v) n += c * c;
    return n > 0;
  };
  auto norm = [](std::span<const double> v) {
    double n = 0;
    for (double c : v) n += c * c;
    return std::sqrt(n);
  };
  if (spec.name == "eikonal") {
    sel.smooth_at = [nonzero](std::span<const double>, std::span<const double> p) {
      return nonzero(p);
    };
    sel.kink_distance = [norm](std::span<const double>, std::span<const double> p) {
      return norm(p);
    };
  } else if (spec.name == "xeikonal") {
    sel.smooth_at = [nonzero](std::span<const double> x, std::span<const double> p) {
      return nonzero(x) && nonzero(p);
    };
    sel.kink_distance = [norm](std::span<const double> x, std::span<const double> p) {
      return std::min(norm(x), norm(p));
    };
  } else if (spec.name.rfind("drift", 0) == 0) {
    sel.smooth_at = [](std::span<const double>, std::span<const double>) { return true; };
  } else if (spec.name.rfind("shifted-eikonal", 0) == 0) {
    sel.smooth_at = [nonzero](std::span<const double> x, std::span<const double> p) {
      return nonzero(x) && nonzero(p);
    };
    sel.kink_distance = [norm](std::span<const double> x, std::span<const double> p) {
      return std::min(norm(x), norm(p));
    };
  } else {
    throw std::invalid_argument("selection_for: no smoothness rule for '" + spec.name + "'");
  }
  return sel;
}

struct ArcPoint {
  double t = 0;
  std::array<double, 2> x{0, 0};
  std::array<double, 2> p{0, 0};
};

struct CharacteristicArc {
  int dim = 1;
  double step = 0;
  std::vector<ArcPoint> points;
};

namespace detail {

struct RkState {
  std::array<double, 2> x{0, 0};
  std::array<double, 2> p{0, 0};
};

}  // namespace detail

// classic fourth-order Runge-Kutta with fixed step; a final partial step makes
// the arc cover [0, T] exactly. Smoothness is checked at every stage point.
inline CharacteristicArc integrate_characteristic(const SubgradientSelection& sel,
                                                  std::span<const double> x0,
                                                  std::span<const double> p0, double T,
                                                  double step) {
  const int d = sel.dim;
  if (static_cast<int>(x0.size()) != d || static_cast<int>(p0.size()) != d)
    throw std::invalid_argument("integrate_characteristic: state dimension mismatch");
  if (!(T > 0)) throw std::invalid_argument("integrate_characteristic: T must be positive");
  if (!(step > 0)) throw std::invalid_argument("integrate_characteristic: step must be positive");

  detail::RkState y;
  for (int i = 0; i < d; ++i) {
    y.x[i] = x0[i];
    y.p[i] = p0[i];
  }

  auto eval = [&](const detail::RkState& s, double t) {
    std::span<const double> xs(s.x.data(), d), ps(s.p.data(), d);
    if (!sel.smooth_at(xs, ps))
      throw refusal_error("integrate_characteristic: selection '" + sel.name +
                          "' hit a non-smooth point at t = " + std::to_string(t) +
                          "; no subgradient rule applies there");
    detail::RkState k;
    std::span<double> dx(k.x.data(), d), dp(k.p.data(), d);
    sel.field(xs, ps, dx, dp);
    return k;
  };
  auto advanced = [&](const detail::RkState& s, const detail::RkState& k, double dt) {
    detail::RkState r;
    for (int i = 0; i < d; ++i) {
      r.x[i] = s.x[i] + dt * k.x[i];
      r.p[i] = s.p[i] + dt * k.p[i];
    }
    return r;
  };

  CharacteristicArc arc;
  arc.dim = d;
  arc.step = step;
  double t = 0;
  arc.points.push_back({t, y.x, y.p});

  // certificate tracking: refuse when the distance to the declared kink set
  // shrinks below what one more step of the current motion could cover,
  // because exact zero tests would step straight across the kink
  double prev_cert = std::numeric_limits<double>::infinity();
  auto check_certificate = [&](double tc) {
    if (!sel.kink_distance) return;
    std::span<const double> xs(y.x.data(), d), ps(y.p.data(), d);
    double cert = sel.kink_distance(xs, ps);
    double motion = std::isfinite(prev_cert) ? std::abs(cert - prev_cert) : 0.0;
    if (cert <= 0 || cert < 1.5 * motion)
      throw refusal_error("integrate_characteristic: selection '" + sel.name +
                          "' approaches a non-smooth point at t = " + std::to_string(tc) +
                          "; no subgradient rule applies there");
    prev_cert = cert;
  };
  check_certificate(0.0);

  while (t < T - 1e-12 * T) {
    double dt = std::min(step, T - t);
    detail::RkState k1 = eval(y, t);
    detail::RkState k2 = eval(advanced(y, k1, dt / 2), t + dt / 2);
    detail::RkState k3 = eval(advanced(y, k2, dt / 2), t + dt / 2);
    detail::RkState k4 = eval(advanced(y, k3, dt), t + dt);
    for (int i = 0; i < d; ++i) {
      y.x[i] += dt / 6 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
      y.p[i] += dt / 6 * (k1.p[i] + 2 * k2.p[i] + 2 * k3.p[i] + k4.p[i]);
    }
    t += dt;
    check_certificate(t);
    arc.points.push_back({t, y.x, y.p});
  }
  arc.points.back().t = T;  // kill accumulated roundoff in the final stamp
  return arc;
}

// largest deviation of H along the arc from its launch value
inline double max_hamiltonian_drift(const CharacteristicArc& arc, const HamiltonianSpec& H) {
  if (arc.points.empty()) return 0;
  auto value = [&](const ArcPoint& pt) {
    return H.evaluate(std::span<const double>(pt.x.data(), arc.dim),
                      std::span<const double>(pt.p.data(), arc.dim));
  };
  double h0 = value(arc.points.front());
  double worst = 0;
  for (const ArcPoint& pt : arc.points) worst = std::max(worst, std::abs(value(pt) - h0));
  return worst;
}

struct BilateralArcResult {
  double max_gap = 0;
  bool ok = false;
};

// compares forward and backward values along the arc via space-time
// interpolation; refuses if the arc leaves the margin-trimmed interior
inline BilateralArcResult verify_bilateral_along(const CharacteristicArc& arc,
                                                 const SpaceTimeSolution& u,
                                                 const SpaceTimeSolution& w, double tolerance) {
  if (u.grid != w.grid)
    throw std::invalid_argument("verify_bilateral_along: solutions on different grids");
  if (arc.dim != u.grid.dim)
    throw std::invalid_argument("verify_bilateral_along: arc dimension mismatch");
  const double T = u.times.empty() ? 0 : u.times.back();
  std::vector<uint8_t> mask = interior_mask(u.grid, T, u.lipschitz_M);

  auto interior_at = [&](const ArcPoint& pt) {
    // nearest-node test against the precomputed mask
    std::array<int, 2> idx{0, 0};
    for (int a = 0; a < arc.dim; ++a) {
      const GridAxis& ax = u.grid.axis[a];
      if (pt.x[a] < ax.lo - 1e-12 || pt.x[a] > ax.hi + 1e-12) return false;
      idx[a] = static_cast<int>(std::lround((pt.x[a] - ax.lo) / ax.h));
      idx[a] = std::clamp(idx[a], 0, ax.nodes - 1);
    }
    size_t flat = arc.dim == 1 ? static_cast<size_t>(idx[0])
                               : static_cast<size_t>(idx[0]) * u.grid.axis[1].nodes + idx[1];
    return mask[flat] != 0;
  };

  BilateralArcResult res;
  for (const ArcPoint& pt : arc.points) {
    if (!interior_at(pt))
      throw refusal_error("verify_bilateral_along: arc exits the usable interior at t = " +
                          std::to_string(pt.t));
    std::span<const double> xs(pt.x.data(), arc.dim);
    double gap = std::abs(u.value_at(pt.t, xs) - w.value_at(pt.t, xs));
    res.max_gap = std::max(res.max_gap, gap);
  }
  res.ok = res.max_gap <= tolerance;
  return res;
}

// numeric subgradient sampler for one-dimensional convex piecewise-linear data:
// one slope at smooth points, k evenly spaced subgradients across a kink
inline std::vector<double> subgradients_1d(const std::function<double(double)>& g, double x,
                                           int k, double eps = 1e-6) {
  if (k < 1) throw std::invalid_argument("subgradients_1d: k must be >= 1");
  double left = (g(x) - g(x - eps)) / eps;
  double right = (g(x + eps) - g(x)) / eps;
  if (std::abs(right - left) <= 1e-6 * (1 + std::abs(left)) || k == 1)
    return {(left + right) / 2};
  std::vector<double> out;
  for (int i = 0; i < k; ++i) out.push_back(left + (right - left) * i / (k - 1));
  return out;
}

}  // namespace hjrec
