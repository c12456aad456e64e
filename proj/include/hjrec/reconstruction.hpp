#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjrec/solver.hpp"

namespace hjrec {

struct ProbeSlice {
  double t = 0;        // time actually probed (nearest stored slice)
  double max_gap = 0;  // max |u - w| over interior nodes at that time
};

// Everything a reconstructibility decision rests on.
//   sup_gap     max |w0 - g0| over interior nodes; the verdict compares
//               this against the caller's tolerance
//   signed_gap  max (g0 - w0) over interior nodes; the backward pass can
//               only lose information, so w0 <= g0 up to scheme error and
//               this is the side that actually fails
//   overshoot   max (w0 - g0); stays within scheme_tolerance of zero
//   scheme_tolerance  a-priori smearing estimate sqrt(alpha_max * h/2 * T),
//               reported for context, never used in the verdict
struct ReconstructionReport {
  GridFunction g0;
  GridFunction gT;
  GridFunction w0;
  double sup_gap = 0;
  double signed_gap = 0;
  double overshoot = 0;
  bool verdict = false;
  double tolerance = 0;
  double scheme_tolerance = 0;
  double boundary_margin = 0;  // widest excluded band next to the boundary
  std::vector<ProbeSlice> probe_slices;
};

namespace detail {

inline double widest_excluded_band(const Grid& grid, const std::vector<uint8_t>& mask) {
  // scan inward from each face until the first interior node
  double widest = 0;
  const int nx = grid.axis[0].nodes;
  const int ny = grid.dim == 2 ? grid.axis[1].nodes : 1;
  auto interior_somewhere = [&](int axis, int line) {
    for (int other = 0; other < (axis == 0 ? ny : nx); ++other) {
      size_t flat = axis == 0 ? static_cast<size_t>(line) * ny + other
                              : static_cast<size_t>(other) * ny + line;
      if (grid.dim == 1) flat = static_cast<size_t>(line);
      if (mask[flat]) return true;
    }
    return false;
  };
  for (int axis = 0; axis < grid.dim; ++axis) {
    const GridAxis& ax = grid.axis[axis];
    int lo = 0;
    while (lo < ax.nodes && !interior_somewhere(axis, lo)) ++lo;
    int hi = ax.nodes - 1;
    while (hi >= 0 && !interior_somewhere(axis, hi)) --hi;
    if (lo >= ax.nodes) return ax.hi - ax.lo;  // nothing interior at all
    widest = std::max(widest, ax.coord(lo) - ax.lo);
    widest = std::max(widest, ax.hi - ax.coord(hi));
  }
  return widest;
}

inline size_t nearest_time_index(const SpaceTimeSolution& sol, double t) {
  size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < sol.times.size(); ++k) {
    double d = std::abs(sol.times[k] - t);
    if (d < best_dist) {
      best_dist = d;
      best = k;
    }
  }
  return best;
}

}  // namespace detail

inline std::vector<double> default_probe_times(double T) { return {T / 4, T / 2, 3 * T / 4}; }

// g0 = v(0,.) where v solves backward from g; by construction g0 is
// reconstructible (running the pipeline on it reproduces it up to scheme error)
struct ReconstructibleResult {
  GridFunction g0;
  SpaceTimeSolution v;
};

inline ReconstructibleResult make_reconstructible(const HamiltonianSpec& H, const GridFunction& g,
                                                  double T, const SolveParams& params = {}) {
  SpaceTimeSolution v = solve_backward(H, g, T, params);
  GridFunction g0(g.grid, v.initial());
  return {std::move(g0), std::move(v)};
}

inline ReconstructionReport reconstruct(const HamiltonianSpec& H, const GridFunction& g0, double T,
                                        const SolveParams& params, double tolerance,
                                        const std::vector<double>& probe_times = {}) {
  if (!(tolerance >= 0)) throw std::invalid_argument("reconstruct: tolerance must be >= 0");
  SpaceTimeSolution u = solve_forward(H, g0, T, params);
  GridFunction gT(g0.grid, u.final_slice());
  SpaceTimeSolution w = solve_backward(H, gT, T, params);

  std::vector<uint8_t> mask = interior_mask(g0.grid, T, H.lipschitz_M);
  size_t interior = 0;
  for (uint8_t m : mask) interior += m;
  if (interior == 0)
    throw refusal_error(
        "reconstruct: no interior nodes survive the boundary margin; widen the domain or shorten "
        "the horizon");

  ReconstructionReport rep;
  rep.g0 = g0;
  rep.gT = gT;
  rep.w0 = GridFunction(g0.grid, w.initial());
  rep.tolerance = tolerance;

  double max_alpha = 0;
  std::array<double, 2> xy{0, 0};
  for (int i = 0; i < g0.grid.node_count(); ++i) {
    g0.grid.node_coords(i, xy);
    max_alpha = std::max(
        max_alpha, dissipation_speed(H, params, std::span<const double>(xy.data(), g0.grid.dim)));
  }
  double hmin = g0.grid.axis[0].h;
  if (g0.grid.dim == 2) hmin = std::min(hmin, g0.grid.axis[1].h);
  rep.scheme_tolerance = std::sqrt(max_alpha * hmin / 2 * T);
  rep.boundary_margin = detail::widest_excluded_band(g0.grid, mask);

  rep.sup_gap = 0;
  rep.signed_gap = -std::numeric_limits<double>::infinity();
  rep.overshoot = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    double diff = rep.g0.values[i] - rep.w0.values[i];
    rep.sup_gap = std::max(rep.sup_gap, std::abs(diff));
    rep.signed_gap = std::max(rep.signed_gap, diff);
    rep.overshoot = std::max(rep.overshoot, -diff);
  }
  rep.verdict = rep.sup_gap <= tolerance;

  for (double t : probe_times) {
    size_t ku = detail::nearest_time_index(u, t);
    size_t kw = detail::nearest_time_index(w, t);
    ProbeSlice ps;
    ps.t = u.times[ku];
    ps.max_gap = 0;
    for (size_t i = 0; i < mask.size(); ++i)
      if (mask[i])
        ps.max_gap = std::max(ps.max_gap, std::abs(u.slices[ku][i] - w.slices[kw][i]));
    rep.probe_slices.push_back(ps);
  }
  return rep;
}

// worst violations of w <= u and v <= w over the usable interior of every
// stored slice; boundary-contaminated nodes carry no information and the
// extrapolating ghosts are not monotone there
struct SandwichResult {
  double worst_wu = 0;  // max (w - u), positive means the middle layer poked above
  double worst_vw = 0;  // max (v - w)
  bool ok = false;
};

inline SandwichResult sandwich_check(const HamiltonianSpec& H, const GridFunction& g, double T,
                                     const SolveParams& params, double tolerance) {
  std::vector<uint8_t> mask = interior_mask(g.grid, T, H.lipschitz_M);
  if (std::find(mask.begin(), mask.end(), 1) == mask.end())
    throw refusal_error(
        "sandwich_check: no interior nodes survive the boundary margin; widen the domain or "
        "shorten the horizon");

  ReconstructibleResult mr = make_reconstructible(H, g, T, params);
  SpaceTimeSolution u = solve_forward(H, mr.g0, T, params);
  GridFunction gT(g.grid, u.final_slice());
  SpaceTimeSolution w = solve_backward(H, gT, T, params);

  if (u.times.size() != w.times.size() || u.times.size() != mr.v.times.size())
    throw std::logic_error("sandwich_check: slice counts diverged");

  SandwichResult res;
  res.worst_wu = -std::numeric_limits<double>::infinity();
  res.worst_vw = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < u.times.size(); ++k) {
    for (size_t i = 0; i < u.slices[k].size(); ++i) {
      if (!mask[i]) continue;
      res.worst_wu = std::max(res.worst_wu, w.slices[k][i] - u.slices[k][i]);
      res.worst_vw = std::max(res.worst_vw, mr.v.slices[k][i] - w.slices[k][i]);
    }
  }
  res.ok = res.worst_wu <= tolerance && res.worst_vw <= tolerance;
  return res;
}

// one-dimensional, positively homogeneous, verdict-true instances only;
// reports the worst forward/backward gap over the probe slices
inline double bilateral_probe_1d(const HamiltonianSpec& H, const GridFunction& g0, double T,
                                 const SolveParams& params, double tolerance,
                                 std::vector<double> probe_times = {}) {
  if (g0.grid.dim != 1)
    throw refusal_error("bilateral_probe_1d: needs a one-dimensional grid");
  if (!H.positively_homogeneous)
    throw refusal_error("bilateral_probe_1d: needs a positively homogeneous hamiltonian");
  if (probe_times.empty()) probe_times = default_probe_times(T);
  ReconstructionReport rep = reconstruct(H, g0, T, params, tolerance, probe_times);
  if (!rep.verdict)
    throw refusal_error("bilateral_probe_1d: instance is not reconstructible at tolerance " +
                        std::to_string(tolerance) + " (sup gap " + std::to_string(rep.sup_gap) +
                        ")");
  double worst = 0;
  for (const ProbeSlice& ps : rep.probe_slices) worst = std::max(worst, ps.max_gap);
  return worst;
}

}  // namespace hjrec
