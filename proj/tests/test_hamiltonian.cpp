#include <gtest/gtest.h>

#include <cmath>

#include "hjrec/hamiltonian.hpp"

using namespace hjrec;

namespace {

double eval1(const HamiltonianSpec& H, double x, double p) {
  return H(std::span<const double>(&x, 1), std::span<const double>(&p, 1));
}

LagrangianSample lt1(const HamiltonianSpec& H, double x, double v, double radius = 4.0,
                     int levels = 3) {
  return legendre_transform(H, std::span<const double>(&x, 1), std::span<const double>(&v, 1),
                            radius, levels);
}

}  // namespace

TEST(Builtins, EikonalIsTheEuclideanNormOfP) {
  HamiltonianSpec H = make_hamiltonian("eikonal");
  EXPECT_DOUBLE_EQ(eval1(H, 0.7, 3.0), 3.0);
  EXPECT_DOUBLE_EQ(eval1(H, -5.0, -2.0), 2.0);
  EXPECT_EQ(H.lipschitz_M, 1.0);
  EXPECT_TRUE(H.convex_in_p);
  EXPECT_TRUE(H.positively_homogeneous);
  EXPECT_TRUE(H.concave_in_x);

  HamiltonianSpec H2 = make_hamiltonian("eikonal", 2);
  double x[2] = {0, 0}, p[2] = {3, 4};
  EXPECT_DOUBLE_EQ(H2(x, p), 5.0);
  double grad[2];
  H2.gradient_p(x, p, grad);
  EXPECT_DOUBLE_EQ(grad[0], 0.6);
  EXPECT_DOUBLE_EQ(grad[1], 0.8);
}

TEST(Builtins, XeikonalScalesWithTheBasePoint) {
  HamiltonianSpec H = make_hamiltonian("xeikonal");
  EXPECT_DOUBLE_EQ(eval1(H, 2.0, 3.0), 6.0);
  EXPECT_DOUBLE_EQ(eval1(H, -2.0, -3.0), 6.0);
  EXPECT_DOUBLE_EQ(eval1(H, 0.0, 7.0), 0.0);
  EXPECT_TRUE(H.convex_in_p);
  EXPECT_TRUE(H.positively_homogeneous);
  EXPECT_FALSE(H.concave_in_x);
}

TEST(Builtins, DriftAndShiftedEikonalParseTheirParameters) {
  HamiltonianSpec D = make_hamiltonian("drift:2.5");
  EXPECT_DOUBLE_EQ(eval1(D, 9.0, 2.0), 5.0);
  EXPECT_DOUBLE_EQ(eval1(D, 9.0, -2.0), -5.0);
  EXPECT_EQ(D.lipschitz_M, 2.5);
  EXPECT_TRUE(D.positively_homogeneous);

  HamiltonianSpec S = make_hamiltonian("shifted-eikonal:2,1");
  EXPECT_DOUBLE_EQ(eval1(S, 3.0, -2.0), 1.0);  // 2*2 - 1*3
  EXPECT_EQ(S.lipschitz_M, 2.0);
  EXPECT_FALSE(S.positively_homogeneous);
  HamiltonianSpec S0 = make_hamiltonian("shifted-eikonal:1,0");
  EXPECT_TRUE(S0.positively_homogeneous);

  EXPECT_THROW(make_hamiltonian("drift:abc"), std::invalid_argument);
  EXPECT_THROW(make_hamiltonian("drift:1", 2), std::invalid_argument);
  EXPECT_THROW(make_hamiltonian("shifted-eikonal:2"), std::invalid_argument);
  EXPECT_THROW(make_hamiltonian("shifted-eikonal:-1,0"), std::invalid_argument);
  EXPECT_THROW(make_hamiltonian("burgers"), std::invalid_argument);
  EXPECT_THROW(make_hamiltonian("eikonal", 3), std::invalid_argument);
}

TEST(LegendreTransform, EikonalConjugatesToTheUnitBallIndicator) {
  HamiltonianSpec H = make_hamiltonian("eikonal");
  LagrangianSample inside = lt1(H, 0.0, 0.5);
  ASSERT_TRUE(inside.value.finite());
  EXPECT_NEAR(inside.value.value(), 0.0, 1e-6);

  LagrangianSample outside = lt1(H, 0.0, 1.5);
  EXPECT_FALSE(outside.value.finite());
  EXPECT_TRUE(xreal::pos_inf() == outside.value);

  HamiltonianSpec H2 = make_hamiltonian("eikonal", 2);
  double x2[2] = {0, 0}, vin[2] = {0.48, 0.64}, vout[2] = {1.2, 0.0};
  LagrangianSample in2 = legendre_transform(H2, x2, vin, 4.0, 3);
  ASSERT_TRUE(in2.value.finite());
  EXPECT_NEAR(in2.value.value(), 0.0, 1e-6);
  EXPECT_FALSE(legendre_transform(H2, x2, vout, 4.0, 3).value.finite());
}

TEST(LegendreTransform, XeikonalBallRadiusFollowsX) {
  HamiltonianSpec H = make_hamiltonian("xeikonal");
  LagrangianSample inside = lt1(H, 2.0, 1.0);
  ASSERT_TRUE(inside.value.finite());
  EXPECT_NEAR(inside.value.value(), 0.0, 1e-6);
  EXPECT_FALSE(lt1(H, 2.0, 3.0).value.finite());

  // at x = 0 the hamiltonian vanishes, so only v = 0 stays finite
  LagrangianSample origin = lt1(H, 0.0, 0.0);
  ASSERT_TRUE(origin.value.finite());
  EXPECT_NEAR(origin.value.value(), 0.0, 1e-9);
  EXPECT_FALSE(lt1(H, 0.0, 0.5).value.finite());
}

TEST(LegendreTransform, DriftConjugateIsASinglePoint) {
  HamiltonianSpec D = make_hamiltonian("drift:1.5");
  LagrangianSample at = lt1(D, 0.0, 1.5);
  ASSERT_TRUE(at.value.finite());
  EXPECT_NEAR(at.value.value(), 0.0, 1e-9);
  EXPECT_FALSE(lt1(D, 0.0, 2.0).value.finite());
  EXPECT_FALSE(lt1(D, 0.0, 1.0).value.finite());
}

TEST(LegendreTransform, RefusesUndeclaredConvexity) {
  HamiltonianSpec H = make_hamiltonian("eikonal");
  H.convex_in_p = false;
  EXPECT_THROW(lt1(H, 0.0, 0.5), refusal_error);
}

TEST(LegendreTransform, LipschitzAuditRejectsSuperlinearGrowth) {
  HamiltonianSpec quad;
  quad.name = "quadratic";
  quad.dim = 1;
  quad.evaluate = [](std::span<const double>, std::span<const double> p) {
    return 0.5 * p[0] * p[0];
  };
  quad.lipschitz_M = 1.0;
  quad.convex_in_p = true;
  EXPECT_THROW(lt1(quad, 0.0, 1.0), refusal_error);
}

TEST(LegendreTransform, FenchelYoungHoldsOnSampledPairs) {
  HamiltonianSpec H = make_hamiltonian("eikonal");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-0.95, 0.95);
  std::uniform_real_distribution<double> mom(-3.0, 3.0);
  for (int s = 0; s < 50; ++s) {
    double v = unit(rng), p = mom(rng), x = 0.0;
    LagrangianSample L = lt1(H, x, v);
    ASSERT_TRUE(L.value.finite());
    EXPECT_GE(L.value.value() + eval1(H, x, p) + 1e-6, v * p);
  }
}

TEST(SupportSet1d, IntervalEndpointsComeFromUnitMomenta) {
  HamiltonianSpec E = make_hamiltonian("eikonal");
  auto [lo, hi] = support_set_1d(E, 13.0);
  EXPECT_DOUBLE_EQ(lo, -1.0);
  EXPECT_DOUBLE_EQ(hi, 1.0);

  HamiltonianSpec X = make_hamiltonian("xeikonal");
  auto [xlo, xhi] = support_set_1d(X, -3.0);
  EXPECT_DOUBLE_EQ(xlo, -3.0);
  EXPECT_DOUBLE_EQ(xhi, 3.0);

  HamiltonianSpec D = make_hamiltonian("drift:1.5");
  auto [dlo, dhi] = support_set_1d(D, 0.0);
  EXPECT_DOUBLE_EQ(dlo, 1.5);
  EXPECT_DOUBLE_EQ(dhi, 1.5);
}

TEST(SupportSet1d, RefusesWrongShapeAndCatchesSublinearityViolation) {
  EXPECT_THROW(support_set_1d(make_hamiltonian("eikonal", 2), 0.0), refusal_error);
  EXPECT_THROW(support_set_1d(make_hamiltonian("shifted-eikonal:1,1"), 0.0), refusal_error);

  HamiltonianSpec bad;
  bad.name = "negative-norm";
  bad.dim = 1;
  bad.evaluate = [](std::span<const double>, std::span<const double> p) {
    return -std::abs(p[0]);
  };
  bad.lipschitz_M = 1.0;
  bad.convex_in_p = true;  // a lie the endpoint check catches
  bad.positively_homogeneous = true;
  EXPECT_THROW(support_set_1d(bad, 0.0), std::domain_error);
}

TEST(AssumptionA, BuiltinsStayWithinTheirDeclaredBounds) {
  EXPECT_TRUE(validate_assumption_A(make_hamiltonian("eikonal"), 4000, 3.0, 1).pass());
  EXPECT_TRUE(validate_assumption_A(make_hamiltonian("xeikonal"), 4000, 3.0, 2).pass());
  EXPECT_TRUE(validate_assumption_A(make_hamiltonian("drift:-2"), 4000, 3.0, 3).pass());
  EXPECT_TRUE(validate_assumption_A(make_hamiltonian("eikonal", 2), 4000, 3.0, 4).pass());
}

TEST(AssumptionA, CatchesAnUndeclaredSuperlinearXDependence) {
  HamiltonianSpec bad;
  bad.name = "x-squared-drift";
  bad.dim = 1;
  bad.evaluate = [](std::span<const double> x, std::span<const double> p) {
    return x[0] * x[0] * p[0];
  };
  bad.lipschitz_M = 1.0;
  AssumptionAReport rep = validate_assumption_A(bad, 4000, 2.0, 5);
  EXPECT_FALSE(rep.pass());
  EXPECT_GT(rep.worst_x_ratio, 1.0);
}

TEST(Homogeneity, ExactForConesBrokenByTheShiftTerm) {
  EXPECT_LE(homogeneity_defect(make_hamiltonian("eikonal"), 500, 3.0, 11), 1e-12);
  EXPECT_LE(homogeneity_defect(make_hamiltonian("xeikonal"), 500, 3.0, 12), 1e-12);
  EXPECT_LE(homogeneity_defect(make_hamiltonian("drift:0.75"), 500, 3.0, 13), 1e-12);
  EXPECT_GT(homogeneity_defect(make_hamiltonian("shifted-eikonal:1,1"), 500, 3.0, 14), 0.01);
}
