#pragma once

#include <charconv>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjrec/discrete_mayer.hpp"  // refusal_error
#include "hjrec/extended.hpp"

namespace hjrec {

// H(x,p) together with the structural facts the solvers rely on. Flags are
// declared by whoever builds the spec and spot-audited by the checks below,
// never inferred: sampling cannot prove convexity, it can only catch lies.
struct HamiltonianSpec {
  std::string name;
  int dim = 1;
  std::function<double(std::span<const double>, std::span<const double>)> evaluate;
  double lipschitz_M = 0.0;  // |H(x,p)-H(x,q)| <= M(1+|x|)|p-q|, |H(x,p)-H(y,p)| <= M(1+|p|)|x-y|
  bool convex_in_p = false;
  bool positively_homogeneous = false;  // in p
  bool concave_in_x = false;
  // optional gradients where H is differentiable; empty when not supplied
  std::function<void(std::span<const double>, std::span<const double>, std::span<double>)> gradient_p;
  std::function<void(std::span<const double>, std::span<const double>, std::span<double>)> gradient_x;

  double operator()(std::span<const double> x, std::span<const double> p) const {
    return evaluate(x, p);
  }
};

namespace detail {

inline double norm2(std::span<const double> v) {
  double s = 0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

inline double parse_number(std::string_view s, const std::string& what) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("cannot parse " + what + " from '" + std::string(s) + "'");
  return out;
}

}  // namespace detail

// Built-ins selectable by name: "eikonal" (|p|), "xeikonal" (|x||p|),
// "drift:c" (c*p), "shifted-eikonal:a,b" (a|p| - b|x|). The first two work in
// any dimension; the parameterized ones are one-dimensional.
inline HamiltonianSpec make_hamiltonian(std::string_view name, int dim = 1) {
  if (dim < 1 || dim > 2) throw std::invalid_argument("make_hamiltonian: dimension must be 1 or 2");
  HamiltonianSpec spec;
  spec.name = std::string(name);
  spec.dim = dim;

  if (name == "eikonal") {
    spec.evaluate = [](std::span<const double>, std::span<const double> p) {
      return detail::norm2(p);
    };
    spec.lipschitz_M = 1.0;
    spec.convex_in_p = true;
    spec.positively_homogeneous = true;
    spec.concave_in_x = true;  // constant in x
    spec.gradient_p = [](std::span<const double>, std::span<const double> p, std::span<double> out) {
      double n = detail::norm2(p);
      for (size_t i = 0; i < p.size(); ++i) out[i] = p[i] / n;
    };
    spec.gradient_x = [](std::span<const double>, std::span<const double>, std::span<double> out) {
      for (auto& c : out) c = 0;
    };
    return spec;
  }
  if (name == "xeikonal") {
    spec.evaluate = [](std::span<const double> x, std::span<const double> p) {
      return detail::norm2(x) * detail::norm2(p);
    };
    spec.lipschitz_M = 1.0;
    spec.convex_in_p = true;
    spec.positively_homogeneous = true;
    spec.concave_in_x = false;  // |x| bends the wrong way
    spec.gradient_p = [](std::span<const double> x, std::span<const double> p, std::span<double> out) {
      double nx = detail::norm2(x), np = detail::norm2(p);
      for (size_t i = 0; i < p.size(); ++i) out[i] = nx * p[i] / np;
    };
    spec.gradient_x = [](std::span<const double> x, std::span<const double> p, std::span<double> out) {
      double nx = detail::norm2(x), np = detail::norm2(p);
      for (size_t i = 0; i < x.size(); ++i) out[i] = np * x[i] / nx;
    };
    return spec;
  }
  if (name.starts_with("drift:")) {
    if (dim != 1) throw std::invalid_argument("drift: one-dimensional only");
    double c = detail::parse_number(name.substr(6), "drift speed");
    spec.evaluate = [c](std::span<const double>, std::span<const double> p) { return c * p[0]; };
    spec.lipschitz_M = std::abs(c);
    spec.convex_in_p = true;
    spec.positively_homogeneous = true;  // linear
    spec.concave_in_x = true;
    spec.gradient_p = [c](std::span<const double>, std::span<const double>, std::span<double> out) {
      out[0] = c;
    };
    spec.gradient_x = [](std::span<const double>, std::span<const double>, std::span<double> out) {
      out[0] = 0;
    };
    return spec;
  }
  if (name.starts_with("shifted-eikonal:")) {
    if (dim != 1) throw std::invalid_argument("shifted-eikonal: one-dimensional only");
    std::string_view rest = name.substr(16);
    auto comma = rest.find(',');
    if (comma == std::string_view::npos)
      throw std::invalid_argument("shifted-eikonal needs two parameters a,b");
    double a = detail::parse_number(rest.substr(0, comma), "shifted-eikonal a");
    double b = detail::parse_number(rest.substr(comma + 1), "shifted-eikonal b");
    if (a < 0 || b < 0) throw std::invalid_argument("shifted-eikonal needs a,b >= 0");
    spec.evaluate = [a, b](std::span<const double> x, std::span<const double> p) {
      return a * std::abs(p[0]) - b * std::abs(x[0]);
    };
    spec.lipschitz_M = std::max(a, b);
    spec.convex_in_p = true;
    spec.positively_homogeneous = (b == 0);
    spec.concave_in_x = true;
    spec.gradient_p = [a](std::span<const double>, std::span<const double> p, std::span<double> out) {
      out[0] = p[0] > 0 ? a : -a;
    };
    spec.gradient_x = [b](std::span<const double> x, std::span<const double>, std::span<double> out) {
      out[0] = x[0] > 0 ? -b : b;
    };
    return spec;
  }
  throw std::invalid_argument("unknown Hamiltonian '" + std::string(name) + "'");
}

struct LagrangianSample {
  std::vector<double> x;
  std::vector<double> v;
  xreal value;  // sup_p { <v,p> - H(x,p) }; +inf when the sup escapes to infinity
};

// Convex conjugate in p by coarse-to-fine grid search over the box |p_i| <=
// search_radius. Linear growth of H (the declared Lipschitz bound) means the
// sup is either attained in a ball or +inf; +inf is detected by the running
// maximum still growing on the outermost shell of the coarse grid. The
// declared bound is audited along the axes first, which rejects superlinear
// integrands like p^2/2 instead of silently conjugating them.
inline LagrangianSample legendre_transform(const HamiltonianSpec& H, std::span<const double> x,
                                           std::span<const double> v, double search_radius,
                                           int refinement_levels, bool audit_lipschitz = true) {
  if (!H.convex_in_p)
    throw refusal_error("legendre_transform: H not declared convex in p, conjugate unreliable");
  if (search_radius <= 0) throw std::invalid_argument("legendre_transform: search_radius <= 0");
  if (H.dim > 2) throw refusal_error("legendre_transform: grid search limited to n <= 2");
  const int n = H.dim;
  if ((int)x.size() != n || (int)v.size() != n)
    throw std::domain_error("legendre_transform: x/v dimension mismatch");

  if (audit_lipschitz) {
    const double bound = H.lipschitz_M * (1.0 + detail::norm2(x));
    std::vector<double> p(n, 0.0), q(n, 0.0);
    for (int axis = 0; axis < n; ++axis) {
      for (int sgn : {-1, 1}) {
        for (int k = 0; k < 8; ++k) {
          std::fill(p.begin(), p.end(), 0.0);
          std::fill(q.begin(), q.end(), 0.0);
          p[axis] = sgn * search_radius * (k + 1) / 8.0;
          q[axis] = sgn * search_radius * k / 8.0;
          double dH = std::abs(H(x, p) - H(x, q));
          double dp = std::abs(p[axis] - q[axis]);
          if (dH > bound * dp * (1.0 + 1e-6) + 1e-12)
            throw refusal_error(
                "legendre_transform: H grows faster than the declared Lipschitz bound "
                "M(1+|x|) on the search box; conjugate would be unreliable");
        }
      }
    }
  }

  const int K = 32;  // grid cells per axis per level
  auto objective = [&](const std::vector<double>& p) {
    double ip = 0;
    for (int i = 0; i < n; ++i) ip += v[i] * p[i];
    return ip - H(x, p);
  };

  // level 0: global scan, track best per "shell" (max |p_i| ring) to see
  // whether the objective still grows at the box edge
  std::vector<double> center(n, 0.0);
  double halfwidth = search_radius;
  std::vector<double> best_p(n, 0.0);
  double best = objective(best_p);
  double outer_shell = -std::numeric_limits<double>::infinity();
  double inner_shell = -std::numeric_limits<double>::infinity();

  std::vector<int> idx(n, 0);
  std::vector<double> p(n);
  for (;;) {
    int ring = 0;
    for (int i = 0; i < n; ++i) {
      p[i] = center[i] + (2.0 * idx[i] / K - 1.0) * halfwidth;
      ring = std::max(ring, std::abs(idx[i] - K / 2));
    }
    double val = objective(p);
    if (val > best) {
      best = val;
      best_p = p;
    }
    if (ring == K / 2) outer_shell = std::max(outer_shell, val);
    if (ring == K / 2 - 1) inner_shell = std::max(inner_shell, val);
    int i = n - 1;
    while (i >= 0 && idx[i] == K) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }

  if (outer_shell > inner_shell + 1e-9 * (1.0 + std::abs(inner_shell)))
    return {std::vector<double>(x.begin(), x.end()), std::vector<double>(v.begin(), v.end()),
            xreal::pos_inf()};

  // refine around the incumbent
  for (int level = 0; level < refinement_levels; ++level) {
    center = best_p;
    halfwidth *= 2.0 / K;
    for (auto& c : idx) c = 0;
    for (;;) {
      for (int i = 0; i < n; ++i) p[i] = center[i] + (2.0 * idx[i] / K - 1.0) * halfwidth;
      double val = objective(p);
      if (val > best) {
        best = val;
        best_p = p;
      }
      int i = n - 1;
      while (i >= 0 && idx[i] == K) idx[i--] = 0;
      if (i < 0) break;
      ++idx[i];
    }
  }

  return {std::vector<double>(x.begin(), x.end()), std::vector<double>(v.begin(), v.end()),
          xreal(best)};
}

// Velocity interval [ -H(x,-1), H(x,1) ] whose support function is p -> H(x,p)
// for positively homogeneous convex H in one dimension.
inline std::pair<double, double> support_set_1d(const HamiltonianSpec& H, double x) {
  if (H.dim != 1) throw refusal_error("support_set_1d: one-dimensional only");
  if (!H.positively_homogeneous || !H.convex_in_p)
    throw refusal_error("support_set_1d: needs positively homogeneous convex H");
  double xs[1] = {x}, pplus[1] = {1.0}, pminus[1] = {-1.0};
  double hi = H(xs, pplus);
  double lo = -H(xs, pminus);
  if (lo > hi + 1e-12)
    throw std::domain_error("support_set_1d: H(x,1)+H(x,-1) < 0, not sublinear in p");
  return {lo, hi};
}

struct AssumptionAReport {
  double worst_p_ratio = 0.0;  // sup |H(x,p)-H(x,q)| / (M(1+|x|)|p-q|)
  double worst_x_ratio = 0.0;  // sup |H(x,p)-H(y,p)| / (M(1+|p|)|x-y|)
  bool pass(double slack = 1e-9) const {
    return worst_p_ratio <= 1.0 + slack && worst_x_ratio <= 1.0 + slack;
  }
};

// Statistical audit of the declared Lipschitz structure; catches wrong M or
// superlinear growth on the sampled ball, proves nothing.
inline AssumptionAReport validate_assumption_A(const HamiltonianSpec& H, int sample_count,
                                               double domain_radius, std::uint64_t seed = 0) {
  if (sample_count < 1) throw std::invalid_argument("validate_assumption_A: need samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-domain_radius, domain_radius);
  const int n = H.dim;
  AssumptionAReport rep;
  std::vector<double> x(n), y(n), p(n), q(n);
  for (int s = 0; s < sample_count; ++s) {
    for (int i = 0; i < n; ++i) {
      x[i] = coord(rng);
      y[i] = coord(rng);
      p[i] = coord(rng);
      q[i] = coord(rng);
    }
    double dpq = 0, dxy = 0;
    for (int i = 0; i < n; ++i) {
      dpq += (p[i] - q[i]) * (p[i] - q[i]);
      dxy += (x[i] - y[i]) * (x[i] - y[i]);
    }
    dpq = std::sqrt(dpq);
    dxy = std::sqrt(dxy);
    if (dpq > 1e-12) {
      double denom = H.lipschitz_M * (1.0 + detail::norm2(x)) * dpq;
      if (denom > 1e-300)
        rep.worst_p_ratio = std::max(rep.worst_p_ratio, std::abs(H(x, p) - H(x, q)) / denom);
    }
    if (dxy > 1e-12) {
      double denom = H.lipschitz_M * (1.0 + detail::norm2(p)) * dxy;
      if (denom > 1e-300)
        rep.worst_x_ratio = std::max(rep.worst_x_ratio, std::abs(H(x, p) - H(y, p)) / denom);
    }
  }
  return rep;
}

// worst relative defect of H(x, a*p) = a*H(x,p) over a in {0.5, 2, 10}
inline double homogeneity_defect(const HamiltonianSpec& H, int sample_count, double radius,
                                 std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-radius, radius);
  const int n = H.dim;
  double worst = 0.0;
  std::vector<double> x(n), p(n), ap(n);
  for (int s = 0; s < sample_count; ++s) {
    for (int i = 0; i < n; ++i) {
      x[i] = coord(rng);
      p[i] = coord(rng);
    }
    for (double a : {0.5, 2.0, 10.0}) {
      for (int i = 0; i < n; ++i) ap[i] = a * p[i];
      double lhs = H(x, ap), rhs = a * H(x, p);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  return worst;
}

}  // namespace hjrec
