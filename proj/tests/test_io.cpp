#include <gtest/gtest.h>

#include <sstream>

#include "hjrec/io.hpp"
#include "hjrec/oracles.hpp"

using namespace hjrec;

namespace {

TransitionMap worked_map() {
  return TransitionMap(3, {{0, 1, 0}, {1, 0, 1}, {1, 0, 0}});
}

}  // namespace

TEST(FormatDouble, ShortestRoundTripForms) {
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.5), "-2.5");
  EXPECT_EQ(format_double(0.1 + 0.2), "0.30000000000000004");
  EXPECT_EQ(parse_double(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_THROW(parse_double("12x"), std::invalid_argument);
  EXPECT_THROW(parse_double(""), std::invalid_argument);
}

TEST(GridFunctionCsv, RoundTripsBitExactIn1d) {
  Grid grid = Grid::make_1d(-3, 3, 0.01);
  GridFunction gf = GridFunction::sample(
      grid, [](std::span<const double> x) { return std::sin(5 * x[0]) / 3; });
  std::ostringstream os;
  write_grid_function_csv(os, gf);
  std::istringstream is(os.str());
  GridFunction back = read_grid_function_csv(is);
  EXPECT_TRUE(back.grid == grid);
  EXPECT_EQ(back.values, gf.values);

  // a second write of the parsed function reproduces the bytes
  std::ostringstream os2;
  write_grid_function_csv(os2, back);
  EXPECT_EQ(os2.str(), os.str());
}

TEST(GridFunctionCsv, RoundTripsBitExactIn2d) {
  Grid grid = Grid::make_2d(-1, 1, 0, 2, 0.25);
  GridFunction gf = GridFunction::sample(
      grid, [](std::span<const double> x) { return x[0] * x[0] - 0.7 * x[1]; });
  std::ostringstream os;
  write_grid_function_csv(os, gf);
  EXPECT_EQ(os.str().substr(0, 10), "x,y,value\n");
  std::istringstream is(os.str());
  GridFunction back = read_grid_function_csv(is);
  EXPECT_TRUE(back.grid == grid);
  EXPECT_EQ(back.values, gf.values);
}

TEST(GridFunctionCsv, RowOrderDoesNotMatterOnRead) {
  std::string csv = "x,value\n1,10\n-1,30\n0,20\n";
  std::istringstream is(csv);
  GridFunction gf = read_grid_function_csv(is);
  ASSERT_EQ(gf.values.size(), 3u);
  EXPECT_EQ(gf.values[0], 30);
  EXPECT_EQ(gf.values[1], 20);
  EXPECT_EQ(gf.values[2], 10);
}

TEST(GridFunctionCsv, MalformedInputsAreRejected) {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return read_grid_function_csv(is);
  };
  EXPECT_THROW(parse(""), std::invalid_argument);
  EXPECT_THROW(parse("a,b\n0,1\n"), std::invalid_argument);
  EXPECT_THROW(parse("x,value\n"), std::invalid_argument);
  EXPECT_THROW(parse("x,value\n0,1\n"), std::invalid_argument);           // single node
  EXPECT_THROW(parse("x,value\n0,1\n0.5,2\n2,3\n"), std::invalid_argument);  // uneven
  EXPECT_THROW(parse("x,value\n0,1\n0,2\n1,0\n"), std::invalid_argument);  // duplicate
  EXPECT_THROW(parse("x,value\n0,one\n1,2\n"), std::invalid_argument);
  EXPECT_THROW(parse("x,value\n0\n1\n"), std::invalid_argument);
}

TEST(SolutionCsv, TimeMajorLexicographicLayout) {
  Grid grid = Grid::make_1d(0, 1, 0.5);
  GridFunction g0(grid, {1.0, 2.0, 3.0});
  SpaceTimeSolution u = solve_forward(make_hamiltonian("drift:0"), g0, 1.0, {});
  std::ostringstream os;
  write_solution_csv(os, u);
  EXPECT_EQ(os.str(),
            "t,x,value\n"
            "0,0,1\n0,0.5,2\n0,1,3\n"
            "1,0,1\n1,0.5,2\n1,1,3\n");
}

TEST(DiscreteInstanceFile, AcceptsCompactAndSpacedRows) {
  const char* compact = "3 3\n010\n101\n100\n1 2 3\n";
  const char* spaced = "3 3\n0 1 0\n1 0 1\n1 0 0\n1 2 3\n";
  for (const char* text : {compact, spaced}) {
    std::istringstream is(text);
    int T = 0;
    auto [phi, g] = read_discrete_instance(is, &T);
    EXPECT_EQ(T, 3);
    EXPECT_EQ(phi.n, 3);
    EXPECT_EQ(phi.adj, worked_map().adj);
    EXPECT_EQ(g, (ValueVector{1, 2, 3}));
  }
}

TEST(DiscreteInstanceFile, WriteReadRoundTrip) {
  std::ostringstream os;
  write_discrete_instance(os, worked_map(), {1, 2, 3}, 3);
  EXPECT_EQ(os.str(), "3 3\n010\n101\n100\n1 2 3\n");
  std::istringstream is(os.str());
  int T = 0;
  auto [phi, g] = read_discrete_instance(is, &T);
  EXPECT_EQ(phi.adj, worked_map().adj);
  EXPECT_EQ(g, (ValueVector{1, 2, 3}));
  EXPECT_EQ(T, 3);
}

TEST(DiscreteInstanceFile, MalformedInputsAreRejected) {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return read_discrete_instance(is, nullptr);
  };
  EXPECT_THROW(parse(""), std::invalid_argument);
  EXPECT_THROW(parse("x 3\n010\n101\n100\n1 2 3\n"), std::invalid_argument);
  EXPECT_THROW(parse("3 3\n01\n101\n100\n1 2 3\n"), std::invalid_argument);
  EXPECT_THROW(parse("3 3\n012\n101\n100\n1 2 3\n"), std::invalid_argument);
  EXPECT_THROW(parse("3 3\n010\n101\n100\n1 2\n"), std::invalid_argument);
  EXPECT_THROW(parse("3 3\n010\n101\n1 2 3\n"), std::invalid_argument);
  // structurally valid text, but state 2 has no successor
  EXPECT_THROW(parse("2 1\n10\n00\n1 2\n"), std::invalid_argument);
}

TEST(TablesCsv, EmitsTheWorkedInstanceInCanonicalOrder) {
  TransitionMap phi = worked_map();
  ValueVector g{1, 2, 3};
  ValueTable V = backward_table(phi, g, 3);
  DiscreteReconstruction rec = reconstruct_discrete(phi, g, 3);
  std::ostringstream os;
  write_tables_csv(os, V, rec.U, rec.W);
  std::string text = os.str();
  EXPECT_EQ(text.substr(0, 20), "k,state,value,table\n");
  // V block first, k ascending, then U, then W
  EXPECT_NE(text.find("0,1,2,V\n0,2,3,V\n0,3,3,V\n"), std::string::npos);
  EXPECT_NE(text.find("3,1,1,V\n3,2,2,V\n3,3,3,V\n"), std::string::npos);
  EXPECT_NE(text.find("1,3,3,U\n"), std::string::npos);
  EXPECT_NE(text.find("1,3,2,W\n"), std::string::npos);  // the gap cell
  size_t v_pos = text.find(",V\n"), u_pos = text.find(",U\n"), w_pos = text.find(",W\n");
  EXPECT_LT(v_pos, u_pos);
  EXPECT_LT(u_pos, w_pos);
}

TEST(ArcCsv, CarriesTheHamiltonianValueColumn) {
  HamiltonianSpec H = make_hamiltonian("eikonal");
  SubgradientSelection sel = selection_for(H);
  double x0 = 2.0, p0 = 1.0;
  CharacteristicArc arc = integrate_characteristic(
      sel, std::span<const double>(&x0, 1), std::span<const double>(&p0, 1), 0.2, 0.1);
  std::ostringstream os;
  write_arc_csv(os, arc, H);
  // momentum is conserved bit-for-bit on this ray, so p and H print as "1";
  // the position column carries whatever the integrator produced
  std::string expected = "t,x,p,H\n";
  for (const ArcPoint& pt : arc.points)
    expected += format_double(pt.t) + "," + format_double(pt.x[0]) + ",1,1\n";
  EXPECT_EQ(os.str(), expected);
  ASSERT_EQ(arc.points.size(), 3u);
  EXPECT_NEAR(arc.points.back().x[0], 2.2, 1e-12);
}

TEST(ReportText, CarriesVerdictGapsAndProbes) {
  Grid grid = Grid::make_1d(-3, 3, 0.05);
  GridFunction g0 = GridFunction::sample(
      grid, [](std::span<const double> x) { return std::abs(x[0]); });
  ReconstructionReport rep =
      reconstruct(make_hamiltonian("eikonal"), g0, 1.0, {}, 0.2, default_probe_times(1.0));
  std::ostringstream os;
  write_report(os, rep);
  std::string text = os.str();
  EXPECT_NE(text.find("verdict: true"), std::string::npos);
  EXPECT_NE(text.find("sup_gap: "), std::string::npos);
  EXPECT_NE(text.find("scheme_tolerance: "), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'),
            7 + (long)rep.probe_slices.size());
}
