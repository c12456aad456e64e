#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hjrec/oracles.hpp"
#include "hjrec/reconstruction.hpp"

using namespace hjrec;

namespace {

GridFunction sample1d(const Grid& grid, const std::function<double(double)>& f) {
  return GridFunction::sample(grid, [&](std::span<const double> x) { return f(x[0]); });
}

const double kFineH = 0.01;

}  // namespace

TEST(Reconstruct, SpreadingVeeComesBackWithinTheFrozenGap) {
  Grid grid = Grid::make_1d(-3, 3, kFineH);
  GridFunction g0 = sample1d(grid, [](double x) { return std::abs(x); });
  ReconstructionReport rep =
      reconstruct(make_hamiltonian("eikonal"), g0, 1.0, {}, 0.14, default_probe_times(1.0));
  EXPECT_TRUE(rep.verdict);
  EXPECT_NEAR(rep.sup_gap, 0.06622, 5e-4);
  // both passes pad the convex kink upward, so the overshoot side carries
  // the whole gap and nothing is reported as lost
  EXPECT_NEAR(rep.overshoot, rep.sup_gap, 1e-12);
  EXPECT_LE(std::abs(rep.signed_gap), 1e-6);
  EXPECT_LE(rep.overshoot, rep.scheme_tolerance);
  ASSERT_EQ(rep.probe_slices.size(), 3u);
  EXPECT_NEAR(rep.probe_slices[0].t, 0.25, 2 * rep.scheme_tolerance);
  EXPECT_NEAR(rep.probe_slices[0].max_gap, 0.04203, 5e-4);
  EXPECT_NEAR(rep.boundary_margin, 2.0, 0.011);
}

TEST(Reconstruct, CollapsedTentIsUnrecoverable) {
  Grid grid = Grid::make_1d(-3, 3, kFineH);
  GridFunction g0 = sample1d(grid, [](double x) { return std::max(0.0, 1 - std::abs(x)); });
  ReconstructionReport rep = reconstruct(make_hamiltonian("eikonal"), g0, 1.0, {}, 0.14);
  EXPECT_FALSE(rep.verdict);
  EXPECT_NEAR(rep.sup_gap, 0.95737, 1e-3);
  EXPECT_NEAR(rep.signed_gap, rep.sup_gap, 1e-12);
  // everything the forward flow erased is reported as lost, nothing invented
  EXPECT_LE(rep.overshoot, rep.scheme_tolerance);
}

TEST(Reconstruct, HorizonDecidesTheTruncatedWellVerdict) {
  auto well = [](double x) { return std::min(0.0, 1 - std::abs(x)); };

  Grid near = Grid::make_1d(-3, 3, kFineH);
  ReconstructionReport ok =
      reconstruct(make_hamiltonian("eikonal"), sample1d(near, well), 0.8, {}, 0.12);
  EXPECT_TRUE(ok.verdict);
  EXPECT_NEAR(ok.sup_gap, 0.05916, 5e-4);

  Grid wide = Grid::make_1d(-4.5, 4.5, kFineH);
  ReconstructionReport lost =
      reconstruct(make_hamiltonian("eikonal"), sample1d(wide, well), 2.0, {}, 0.12);
  EXPECT_FALSE(lost.verdict);
  EXPECT_NEAR(lost.sup_gap, 1.00503, 2e-3);  // the well floor sits 1 - T below zero
}

TEST(Reconstruct, BilateralWedgeRoundTripsUnderXeikonal) {
  Grid grid = Grid::make_1d(-3, 3, kFineH);
  OracleInstance o = make_oracle("xeik-bilateral", 1.0);
  GridFunction g0 = sample1d(grid, o.g0);
  ReconstructionReport rep = reconstruct(make_hamiltonian("xeikonal"), g0, 1.0, {}, 0.27);
  EXPECT_TRUE(rep.verdict);
  EXPECT_NEAR(rep.sup_gap, 0.13236, 1e-3);
}

TEST(Reconstruct, ZeroDataRoundTripsExactly) {
  Grid grid = Grid::make_1d(-3, 3, 0.05);
  GridFunction g0 = sample1d(grid, [](double) { return 0.0; });
  ReconstructionReport rep = reconstruct(make_hamiltonian("eikonal"), g0, 1.0, {}, 0.0);
  EXPECT_TRUE(rep.verdict);
  EXPECT_EQ(rep.sup_gap, 0.0);
}

TEST(Reconstruct, RefusesWhenTheMarginSwallowsTheDomain) {
  // on [-0.9, 0.9] with T = 1 even the center node sits closer to the
  // boundary (0.9) than the information radius (1), so nothing survives
  Grid grid = Grid::make_1d(-0.9, 0.9, 0.05);
  GridFunction g0 = sample1d(grid, [](double x) { return std::abs(x); });
  EXPECT_THROW(reconstruct(make_hamiltonian("eikonal"), g0, 1.0, {}, 0.1), refusal_error);
  EXPECT_THROW(reconstruct(make_hamiltonian("eikonal"), g0, 0.5, {}, -0.1),
               std::invalid_argument);
}

TEST(MakeReconstructible, ZeroDriftReturnsTheInputBitForBit) {
  Grid grid = Grid::make_1d(-2, 2, 0.1);
  GridFunction g = sample1d(grid, [](double x) { return std::sin(2 * x); });
  ReconstructibleResult mr = make_reconstructible(make_hamiltonian("drift:0"), g, 1.0, {});
  EXPECT_EQ(mr.g0.values, g.values);
  EXPECT_EQ(mr.v.initial(), mr.g0.values);
}

TEST(MakeReconstructible, TentBackwardsGrowsThePlateauTent) {
  // max over reachable points turns the unit tent into min(1, max(0, 2-|x|))
  Grid grid = Grid::make_1d(-3, 3, kFineH);
  GridFunction tent = sample1d(grid, [](double x) { return std::max(0.0, 1 - std::abs(x)); });
  ReconstructibleResult mr = make_reconstructible(make_hamiltonian("eikonal"), tent, 1.0, {});
  auto mask = interior_mask(grid, 1.0, 1.0);
  std::array<double, 2> xy{};
  double err = 0;
  for (int i = 0; i < grid.node_count(); ++i) {
    if (!mask[i]) continue;
    grid.node_coords(i, xy);
    err = std::max(err,
                   std::abs(mr.g0.values[i] - std::min(1.0, std::max(0.0, 2 - std::abs(xy[0])))));
  }
  EXPECT_NEAR(err, 0.04757, 5e-4);
}

TEST(MakeReconstructible, OutputPassesItsOwnReconstruction) {
  Grid grid = Grid::make_1d(-3, 3, kFineH);
  GridFunction tent = sample1d(grid, [](double x) { return std::max(0.0, 1 - std::abs(x)); });
  HamiltonianSpec H = make_hamiltonian("eikonal");
  ReconstructibleResult mr = make_reconstructible(H, tent, 1.0, {});
  ReconstructionReport rep = reconstruct(H, mr.g0, 1.0, {}, 0.14);
  EXPECT_TRUE(rep.verdict);
  EXPECT_NEAR(rep.sup_gap, 0.06377, 5e-4);
}

TEST(Reconstruct, RespectsTheDataOrderUnderClampedBoundaries) {
  Grid grid = Grid::make_1d(-3, 3, 0.02);
  SolveParams params;
  params.boundary = SolveParams::Boundary::clamp;
  HamiltonianSpec H = make_hamiltonian("eikonal");
  GridFunction lo = sample1d(grid, [](double x) { return std::abs(x); });
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> bump(0.0, 0.5);
  GridFunction hi = lo;
  for (double& v : hi.values) v += bump(rng);
  ReconstructionReport rlo = reconstruct(H, lo, 1.0, params, 0.14);
  ReconstructionReport rhi = reconstruct(H, hi, 1.0, params, 0.14);
  for (int i = 0; i < grid.node_count(); ++i)
    EXPECT_LE(rlo.w0.values[i], rhi.w0.values[i] + 1e-12);
}

TEST(Sandwich, VeeDataKeepsTheThreeLayersOrdered) {
  Grid grid = Grid::make_1d(-3, 3, kFineH);
  GridFunction g = sample1d(grid, [](double x) { return std::abs(x); });
  SandwichResult s = sandwich_check(make_hamiltonian("eikonal"), g, 1.0, {}, 0.25);
  EXPECT_TRUE(s.ok);
  EXPECT_NEAR(s.worst_wu, 0.06622, 5e-4);
  EXPECT_LE(s.worst_vw, 1e-12);
}

TEST(Sandwich, WedgeDataUnderXeikonalStaysWithinTheFrozenBounds) {
  Grid grid = Grid::make_1d(-3, 3, kFineH);
  OracleInstance o = make_oracle("xeik-bilateral", 1.0);
  GridFunction g = sample1d(grid, o.gT);
  SandwichResult s = sandwich_check(make_hamiltonian("xeikonal"), g, 1.0, {}, 0.25);
  EXPECT_TRUE(s.ok);
  EXPECT_NEAR(s.worst_wu, 0.10503, 1e-3);
  EXPECT_NEAR(s.worst_vw, 0.07562, 1e-3);
}

TEST(Sandwich, NumericalBackwardDominatesTheVanishingFamily) {
  // w from the pipeline solves the same terminal problem every family member
  // solves; it must sit on top of each of them, strictly above somewhere
  Grid grid = Grid::make_1d(-3, 3, 0.02);
  HamiltonianSpec H = make_hamiltonian("eikonal");
  GridFunction zero = sample1d(grid, [](double) { return 0.0; });
  SpaceTimeSolution u = solve_forward(H, zero, 1.0, {});
  SpaceTimeSolution w = solve_backward(H, GridFunction(grid, u.final_slice()), 1.0, {});
  std::array<double, 2> xy{};
  for (double alpha : {0.3, 1.0, 2.0}) {
    double strict = 0;
    for (size_t k = 0; k < w.times.size(); ++k) {
      for (int i = 0; i < grid.node_count(); ++i) {
        grid.node_coords(i, xy);
        double va = valpha_eval(alpha, w.times[k], xy[0]);
        EXPECT_GE(w.slices[k][i] - va, -1e-12);
        strict = std::max(strict, w.slices[k][i] - va);
      }
    }
    EXPECT_GT(strict, 0.5 * alpha);  // at (T, 0) the family dips to -alpha
  }
}

TEST(BilateralProbe, RefusesOutsideItsContract) {
  Grid grid2 = Grid::make_2d(-3, 3, -3, 3, 0.25);
  GridFunction g2 = GridFunction::sample(
      grid2, [](std::span<const double> x) { return std::hypot(x[0], x[1]); });
  EXPECT_THROW(bilateral_probe_1d(make_hamiltonian("eikonal", 2), g2, 1.0, {}, 0.14),
               refusal_error);

  Grid grid = Grid::make_1d(-3, 3, 0.02);
  GridFunction vee = GridFunction::sample(
      grid, [](std::span<const double> x) { return std::abs(x[0]); });
  EXPECT_THROW(bilateral_probe_1d(make_hamiltonian("shifted-eikonal:1,1"), vee, 1.0, {}, 0.14),
               refusal_error);

  GridFunction tent = GridFunction::sample(grid, [](std::span<const double> x) {
    return std::max(0.0, 1 - std::abs(x[0]));
  });
  EXPECT_THROW(bilateral_probe_1d(make_hamiltonian("eikonal"), tent, 1.0, {}, 0.14),
               refusal_error);
}

TEST(BilateralProbe, AgreementLevelsMatchTheFrozenStudy) {
  Grid grid = Grid::make_1d(-3, 3, kFineH);
  GridFunction vee = GridFunction::sample(
      grid, [](std::span<const double> x) { return std::abs(x[0]); });
  double gap = bilateral_probe_1d(make_hamiltonian("eikonal"), vee, 1.0, {}, 0.14);
  EXPECT_NEAR(gap, 0.04203, 5e-4);
  EXPECT_LE(gap, 0.09);

  GridFunction zero =
      GridFunction::sample(grid, [](std::span<const double>) { return 0.0; });
  EXPECT_EQ(bilateral_probe_1d(make_hamiltonian("drift:0"), zero, 1.0, {}, 0.01), 0.0);
}
