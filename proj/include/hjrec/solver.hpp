#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hjrec/grid.hpp"
#include "hjrec/hamiltonian.hpp"

namespace hjrec {

struct SolveParams {
  double cfl = 0.9;     // fraction of the stability bound
  double margin = 1.0;  // multiplier on the dissipation speed bound, >= 1

  enum class Boundary { extrapolate, clamp };
  Boundary boundary = Boundary::extrapolate;  // ghost nodes: continue the edge slope, or copy

  enum class Keep { all, endpoints, stride };
  Keep keep = Keep::all;
  int stride = 1;

  void validate() const {
    if (!(cfl > 0) || cfl > 1) throw std::invalid_argument("SolveParams: cfl must be in (0,1]");
    if (margin < 1) throw std::invalid_argument("SolveParams: margin must be >= 1");
    if (keep == Keep::stride && stride < 1)
      throw std::invalid_argument("SolveParams: stride must be >= 1");
  }
};

enum class TimeDirection { forward, backward };

struct SpaceTimeSolution {
  Grid grid;
  double dt = 0;
  int steps = 0;
  TimeDirection direction = TimeDirection::forward;
  std::vector<int> kept_steps;              // step indices of stored slices, ascending
  std::vector<double> times;                // stamps, always kept_steps[k] * dt
  std::vector<std::vector<double>> slices;  // parallel to times
  std::string warning;  // set when the whole domain is boundary-contaminated
  std::string hamiltonian;
  double lipschitz_M = 0;  // of the hamiltonian that produced this solution

  const std::vector<double>& initial() const { return slices.front(); }
  const std::vector<double>& final_slice() const { return slices.back(); }

  const std::vector<double>& slice_at(double t) const {
    for (size_t i = 0; i < times.size(); ++i)
      if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return slices[i];
    throw std::domain_error("SpaceTimeSolution: no stored slice at t=" + std::to_string(t));
  }

  // linear interpolation in time between stored slices, multilinear in space
  double value_at(double t, std::span<const double> xy) const {
    if (times.empty()) throw std::domain_error("SpaceTimeSolution: empty");
    t = std::clamp(t, times.front(), times.back());
    size_t hi = 1;
    while (hi < times.size() - 1 && times[hi] < t) ++hi;
    if (times.size() == 1) hi = 0;
    size_t lo = hi > 0 ? hi - 1 : 0;
    double tl = times[lo], th = times[hi];
    double wt = th > tl ? (t - tl) / (th - tl) : 0.0;
    return (1 - wt) * space_interp(slices[lo], xy) + wt * space_interp(slices[hi], xy);
  }

  double space_interp(const std::vector<double>& slice, std::span<const double> xy) const {
    auto axis_pos = [](const GridAxis& ax, double x, int& i0, double& frac) {
      if (x < ax.lo - 1e-9 || x > ax.hi + 1e-9)
        throw std::domain_error("SpaceTimeSolution: point outside the grid");
      double s = (x - ax.lo) / ax.h;
      i0 = std::min((int)s, ax.nodes - 2);
      i0 = std::max(i0, 0);
      frac = std::clamp(s - i0, 0.0, 1.0);
    };
    if (grid.dim == 1) {
      if (grid.axis[0].nodes == 1) return slice[0];
      int i0;
      double f;
      axis_pos(grid.axis[0], xy[0], i0, f);
      return (1 - f) * slice[i0] + f * slice[i0 + 1];
    }
    int i0, j0;
    double fx, fy;
    axis_pos(grid.axis[0], xy[0], i0, fx);
    axis_pos(grid.axis[1], xy[1], j0, fy);
    const int ny = grid.axis[1].nodes;
    double v00 = slice[i0 * ny + j0], v01 = slice[i0 * ny + j0 + 1];
    double v10 = slice[(i0 + 1) * ny + j0], v11 = slice[(i0 + 1) * ny + j0 + 1];
    return (1 - fx) * ((1 - fy) * v00 + fy * v01) + fx * ((1 - fy) * v10 + fy * v11);
  }
};

// Dissipation coefficient at a point: margin * M * (1 + |x|), the local bound
// on the characteristic speed. Shared by the scheme and the interior mask.
inline double dissipation_speed(const HamiltonianSpec& H, const SolveParams& params,
                                std::span<const double> xy) {
  return params.margin * H.lipschitz_M * (1.0 + detail::norm2(xy));
}

// Nodes far enough from the boundary that no information from it can arrive
// within time T: distance to the boundary >= T * M * (1 + |x|). Everything
// else sits in the truncation-contaminated band.
inline std::vector<std::uint8_t> interior_mask(const Grid& grid, double T, double lipschitz_M) {
  std::vector<std::uint8_t> mask(grid.node_count(), 0);
  std::array<double, 2> xy{};
  for (int i = 0; i < grid.node_count(); ++i) {
    grid.node_coords(i, xy);
    double dist = std::numeric_limits<double>::infinity();
    for (int a = 0; a < grid.dim; ++a)
      dist = std::min({dist, xy[a] - grid.axis[a].lo, grid.axis[a].hi - xy[a]});
    double reach = T * lipschitz_M * (1.0 + detail::norm2(std::span<const double>(xy.data(), grid.dim)));
    mask[i] = dist >= reach - 1e-12 ? 1 : 0;
  }
  return mask;
}

// Monotone numerical Hamiltonian: central evaluation plus one-sided
// dissipation, exact on matched slopes.
inline double lf_numerical_hamiltonian(const HamiltonianSpec& H, std::span<const double> x,
                                       std::span<const double> p_minus,
                                       std::span<const double> p_plus,
                                       std::span<const double> alpha) {
  std::array<double, 2> pa{};
  double diss = 0;
  for (size_t i = 0; i < p_minus.size(); ++i) {
    pa[i] = 0.5 * (p_minus[i] + p_plus[i]);
    diss += alpha[i] * (p_plus[i] - p_minus[i]) * 0.5;
  }
  return H(x, std::span<const double>(pa.data(), p_minus.size())) - diss;
}

namespace detail {

struct StepPlan {
  int steps;
  double dt;
};

inline StepPlan plan_time_steps(const Grid& grid, double T, const SolveParams& params,
                                double max_alpha) {
  double hmin = grid.axis[0].h;
  if (grid.dim == 2) hmin = std::min(hmin, grid.axis[1].h);
  // uniform steps landing exactly on T; one step suffices when H has no p
  // dependence worth resolving (max_alpha == 0 means H is constant in p)
  double dt_max = max_alpha > 0 ? params.cfl * hmin / (grid.dim * max_alpha) : T;
  double steps_real = std::ceil(T / dt_max - 1e-12);
  if (steps_real > 5e7)
    throw refusal_error("solve: CFL bound needs " + std::to_string((long long)steps_real) +
                        " steps; dissipation speed too large for this grid");
  int steps = std::max(1, (int)steps_real);
  return {steps, T / steps};
}

// one explicit step on a 1D slice
inline void lf_step_1d(const HamiltonianSpec& H, const Grid& grid, const SolveParams& params,
                       const std::vector<double>& alpha, double dt, const std::vector<double>& u,
                       std::vector<double>& out) {
  const int N = grid.axis[0].nodes;
  const double h = grid.axis[0].h;
  const bool extrap = params.boundary == SolveParams::Boundary::extrapolate;
  const double ghost_lo = N >= 2 ? (extrap ? 2 * u[0] - u[1] : u[0]) : u[0];
  const double ghost_hi = N >= 2 ? (extrap ? 2 * u[N - 1] - u[N - 2] : u[N - 1]) : u[0];
  for (int i = 0; i < N; ++i) {
    const double um = i > 0 ? u[i - 1] : ghost_lo;
    const double up = i < N - 1 ? u[i + 1] : ghost_hi;
    const double pm = (u[i] - um) / h;
    const double pp = (up - u[i]) / h;
    const double x[1] = {grid.axis[0].coord(i)};
    const double pmn[1] = {pm}, ppl[1] = {pp}, al[1] = {alpha[i]};
    out[i] = u[i] - dt * lf_numerical_hamiltonian(H, x, pmn, ppl, al);
  }
}

// one explicit step on a 2D slice, axis-wise differences and dissipation
inline void lf_step_2d(const HamiltonianSpec& H, const Grid& grid, const SolveParams& params,
                       const std::vector<double>& alpha, double dt, const std::vector<double>& u,
                       std::vector<double>& out) {
  const int nx = grid.axis[0].nodes, ny = grid.axis[1].nodes;
  const double hx = grid.axis[0].h, hy = grid.axis[1].h;
  const bool extrap = params.boundary == SolveParams::Boundary::extrapolate;
  auto at = [&](int ix, int iy) { return u[ix * ny + iy]; };
  auto ghost = [&](double edge, double inner) { return extrap ? 2 * edge - inner : edge; };
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      const double c = at(ix, iy);
      const double xl = ix > 0 ? at(ix - 1, iy) : ghost(c, at(std::min(ix + 1, nx - 1), iy));
      const double xr = ix < nx - 1 ? at(ix + 1, iy) : ghost(c, at(std::max(ix - 1, 0), iy));
      const double yl = iy > 0 ? at(ix, iy - 1) : ghost(c, at(ix, std::min(iy + 1, ny - 1)));
      const double yr = iy < ny - 1 ? at(ix, iy + 1) : ghost(c, at(ix, std::max(iy - 1, 0)));
      const double pmn[2] = {(c - xl) / hx, (c - yl) / hy};
      const double ppl[2] = {(xr - c) / hx, (yr - c) / hy};
      const double x[2] = {grid.axis[0].coord(ix), grid.axis[1].coord(iy)};
      const double a = alpha[ix * ny + iy];
      const double al[2] = {a, a};
      out[ix * ny + iy] = c - dt * lf_numerical_hamiltonian(H, x, pmn, ppl, al);
    }
}

}  // namespace detail

inline SpaceTimeSolution solve_forward(const HamiltonianSpec& H, const GridFunction& g0, double T,
                                       const SolveParams& params = {}) {
  params.validate();
  if (!(T > 0)) throw std::domain_error("solve_forward: T must be positive");
  if (H.dim != g0.grid.dim) throw std::domain_error("solve_forward: H and grid dimension differ");
  const Grid& grid = g0.grid;

  std::vector<double> alpha(grid.node_count());
  double max_alpha = 0;
  std::array<double, 2> xy{};
  for (int i = 0; i < grid.node_count(); ++i) {
    grid.node_coords(i, xy);
    alpha[i] = dissipation_speed(H, params, std::span<const double>(xy.data(), grid.dim));
    max_alpha = std::max(max_alpha, alpha[i]);
  }
  auto [steps, dt] = detail::plan_time_steps(grid, T, params, max_alpha);

  SpaceTimeSolution sol;
  sol.grid = grid;
  sol.dt = dt;
  sol.steps = steps;
  sol.direction = TimeDirection::forward;
  sol.hamiltonian = H.name;
  sol.lipschitz_M = H.lipschitz_M;
  auto mask = interior_mask(grid, T, H.lipschitz_M);
  if (std::find(mask.begin(), mask.end(), 1) == mask.end())
    sol.warning =
        "domain too small: the boundary-contaminated band covers every node at horizon T";

  auto keep_this = [&](int m) {
    if (m == 0 || m == steps) return true;
    switch (params.keep) {
      case SolveParams::Keep::all: return true;
      case SolveParams::Keep::endpoints: return false;
      case SolveParams::Keep::stride: return m % params.stride == 0;
    }
    return true;
  };

  std::vector<double> u = g0.values;  // slice 0 stored bit-exact below
  std::vector<double> next(u.size());
  sol.kept_steps.push_back(0);
  sol.times.push_back(0.0);
  sol.slices.push_back(u);
  for (int m = 0; m < steps; ++m) {
    if (grid.dim == 1)
      detail::lf_step_1d(H, grid, params, alpha, dt, u, next);
    else
      detail::lf_step_2d(H, grid, params, alpha, dt, u, next);
    u.swap(next);
    if (keep_this(m + 1)) {
      sol.kept_steps.push_back(m + 1);
      sol.times.push_back((m + 1) * dt);
      sol.slices.push_back(u);
    }
  }
  return sol;
}

// Backward solves run the single forward kernel on the reversed problem:
// solve u~ forward for H~(x,p) = H(x,-p) from -gT, then w(t,x) = -u~(T-t,x).
// Never stepped with negative time; the kernel is audited once.
inline SpaceTimeSolution solve_backward(const HamiltonianSpec& H, const GridFunction& gT, double T,
                                        const SolveParams& params = {}) {
  HamiltonianSpec rev = H;
  rev.name = H.name + " (time-reversed)";
  auto base = H.evaluate;
  rev.evaluate = [base](std::span<const double> x, std::span<const double> p) {
    std::array<double, 2> mp{};
    for (size_t i = 0; i < p.size(); ++i) mp[i] = -p[i];
    return base(x, std::span<const double>(mp.data(), p.size()));
  };
  rev.gradient_p = nullptr;  // reversed gradients are never needed here
  rev.gradient_x = nullptr;

  GridFunction neg(gT.grid, [&] {
    std::vector<double> v = gT.values;
    for (double& c : v) c = -c;
    return v;
  }());

  SpaceTimeSolution fwd = solve_forward(rev, neg, T, params);

  SpaceTimeSolution sol;
  sol.grid = fwd.grid;
  sol.dt = fwd.dt;
  sol.steps = fwd.steps;
  sol.direction = TimeDirection::backward;
  sol.hamiltonian = H.name;
  sol.lipschitz_M = H.lipschitz_M;
  sol.warning = fwd.warning;
  const size_t S = fwd.slices.size();
  sol.kept_steps.resize(S);
  sol.times.resize(S);
  sol.slices.resize(S);
  for (size_t k = 0; k < S; ++k) {
    // the slice stored at reversed step m lands at backward step steps - m;
    // stamps are rebuilt as (step index) * dt, the same expression forward
    // solves use, so both directions carry bit-identical time points
    size_t rk = S - 1 - k;
    sol.kept_steps[k] = fwd.steps - fwd.kept_steps[rk];
    sol.times[k] = sol.kept_steps[k] * fwd.dt;
    sol.slices[k] = fwd.slices[rk];
    for (double& c : sol.slices[k]) c = -c;
  }
  return sol;
}

struct ComparisonResult {
  double worst_gap = -std::numeric_limits<double>::infinity();  // max of lower - upper
  double at_time = 0;
  int at_node = -1;
  bool ok = false;
};

// worst violation of lower <= upper over all stored slices
inline ComparisonResult comparison_check(const SpaceTimeSolution& lower,
                                         const SpaceTimeSolution& upper, double tolerance) {
  if (!(lower.grid == upper.grid)) throw std::domain_error("comparison_check: grids differ");
  if (lower.direction != upper.direction)
    throw std::domain_error("comparison_check: directions differ");
  if (lower.times.size() != upper.times.size())
    throw std::domain_error("comparison_check: stored slice counts differ");
  ComparisonResult res;
  for (size_t k = 0; k < lower.times.size(); ++k) {
    if (std::abs(lower.times[k] - upper.times[k]) > 1e-9 * std::max(1.0, lower.times.back()))
      throw std::domain_error("comparison_check: stored time stamps differ");
    for (size_t i = 0; i < lower.slices[k].size(); ++i) {
      double gap = lower.slices[k][i] - upper.slices[k][i];
      if (gap > res.worst_gap) {
        res.worst_gap = gap;
        res.at_time = lower.times[k];
        res.at_node = (int)i;
      }
    }
  }
  res.ok = res.worst_gap <= tolerance;
  return res;
}

}  // namespace hjrec
