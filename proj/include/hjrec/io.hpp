#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjrec/discrete_mayer.hpp"
#include "hjrec/characteristics.hpp"
#include "hjrec/reconstruction.hpp"
#include "hjrec/solver.hpp"

namespace hjrec {

// shortest round-trip decimal form; identical bytes on every run
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  return v;
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    size_t next = line.find(sep, pos);
    std::string field = line.substr(pos, next == std::string::npos ? next : next - pos);
    // trim spaces and a stray carriage return
    size_t b = field.find_first_not_of(" \t\r");
    size_t e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace detail

// layout: "x,value" in one dimension, "x,y,value" in two,
// rows in lexicographic node order
inline void write_grid_function_csv(std::ostream& os, const GridFunction& gf) {
  os << (gf.grid.dim == 1 ? "x,value\n" : "x,y,value\n");
  std::array<double, 2> xy{0, 0};
  for (int i = 0; i < gf.grid.node_count(); ++i) {
    gf.grid.node_coords(i, xy);
    os << format_double(xy[0]);
    if (gf.grid.dim == 2) os << ',' << format_double(xy[1]);
    os << ',' << format_double(gf.values[i]) << '\n';
  }
}

inline GridFunction read_grid_function_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("grid csv: empty input");
  auto header = detail::split(line, ',');
  int dim;
  if (header.size() == 2 && header[0] == "x" && header[1] == "value")
    dim = 1;
  else if (header.size() == 3 && header[0] == "x" && header[1] == "y" && header[2] == "value")
    dim = 2;
  else
    throw std::invalid_argument("grid csv: header must be 'x,value' or 'x,y,value'");

  std::vector<std::array<double, 2>> coords;
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    auto f = detail::split(line, ',');
    if (static_cast<int>(f.size()) != dim + 1)
      throw std::invalid_argument("grid csv: bad row '" + line + "'");
    std::array<double, 2> xy{parse_double(f[0]), dim == 2 ? parse_double(f[1]) : 0.0};
    coords.push_back(xy);
    vals.push_back(parse_double(f[dim]));
  }
  if (coords.empty()) throw std::invalid_argument("grid csv: no data rows");

  // the mean spacing drifts from the generating step by rounding noise, so
  // snap it to the shortest decimal that stays within relative 1e-9; a file
  // written from h = 0.01 reads back with h exactly 0.01 again
  auto snap_decimal = [](double v) {
    if (v == 0) return v;
    for (int digits = 0; digits <= 17; ++digits) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.*e", digits, v);
      double r = parse_double(std::string_view(buf));
      if (std::abs(r - v) <= 1e-9 * std::abs(v)) return r;
    }
    return v;
  };
  auto axis_from = [&](int a) {
    std::vector<double> cs;
    for (auto& c : coords) cs.push_back(c[a]);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end(),
                         [](double p, double q) { return std::abs(p - q) < 1e-12; }),
             cs.end());
    if (cs.size() < 2) throw std::invalid_argument("grid csv: axis needs at least two nodes");
    double h = snap_decimal((cs.back() - cs.front()) / static_cast<double>(cs.size() - 1));
    for (size_t i = 1; i < cs.size(); ++i)
      if (std::abs(cs[i] - cs[i - 1] - h) > 1e-9 * (1 + std::abs(h)))
        throw std::invalid_argument("grid csv: axis spacing is not uniform");
    return Grid::make_axis(cs.front(), cs.back(), h);
  };

  Grid grid;
  if (dim == 1) {
    grid = Grid::make_1d(0, 1, 1);  // placeholder, replaced below
    grid.axis[0] = axis_from(0);
    grid.dim = 1;
  } else {
    grid.dim = 2;
    grid.axis[0] = axis_from(0);
    grid.axis[1] = axis_from(1);
  }
  if ((int)coords.size() != grid.node_count())
    throw std::invalid_argument("grid csv: rows do not fill the grid");

  std::vector<double> ordered(grid.node_count());
  std::vector<uint8_t> seen(grid.node_count(), 0);
  for (size_t r = 0; r < coords.size(); ++r) {
    long ix = std::lround((coords[r][0] - grid.axis[0].lo) / grid.axis[0].h);
    long iy = dim == 2 ? std::lround((coords[r][1] - grid.axis[1].lo) / grid.axis[1].h) : 0;
    if (ix < 0 || ix >= grid.axis[0].nodes || iy < 0 || (dim == 2 && iy >= grid.axis[1].nodes))
      throw std::invalid_argument("grid csv: coordinate off the inferred grid");
    size_t flat = dim == 1 ? static_cast<size_t>(ix)
                           : static_cast<size_t>(ix) * grid.axis[1].nodes + iy;
    if (seen[flat]) throw std::invalid_argument("grid csv: duplicate node row");
    seen[flat] = 1;
    ordered[flat] = vals[r];
  }
  return GridFunction(grid, std::move(ordered));
}

// layout: "t,x[,y],value", time-major, nodes in lexicographic order inside a slice
inline void write_solution_csv(std::ostream& os, const SpaceTimeSolution& sol) {
  os << (sol.grid.dim == 1 ? "t,x,value\n" : "t,x,y,value\n");
  std::array<double, 2> xy{0, 0};
  for (size_t k = 0; k < sol.times.size(); ++k) {
    for (int i = 0; i < sol.grid.node_count(); ++i) {
      sol.grid.node_coords(i, xy);
      os << format_double(sol.times[k]) << ',' << format_double(xy[0]);
      if (sol.grid.dim == 2) os << ',' << format_double(xy[1]);
      os << ',' << format_double(sol.slices[k][i]) << '\n';
    }
  }
}

// instance file: first line "n T", then n adjacency rows (compact 010 or
// space-separated 0 1 0), then one line with the n terminal values
inline std::pair<TransitionMap, ValueVector> read_discrete_instance(std::istream& is, int* T_out) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(b, e - b + 1));
  }
  if (lines.size() < 3) throw std::invalid_argument("instance file: too few lines");
  std::istringstream head(lines[0]);
  int n = 0, T = -1;
  if (!(head >> n >> T) || n < 1 || T < 0)
    throw std::invalid_argument("instance file: first line must be 'n T'");
  if (lines.size() != static_cast<size_t>(n) + 2)
    throw std::invalid_argument("instance file: expected " + std::to_string(n) +
                                " adjacency rows plus one value line");

  std::vector<std::vector<uint8_t>> adj(n);
  for (int i = 0; i < n; ++i) {
    const std::string& row = lines[1 + i];
    std::vector<uint8_t> bits;
    if (row.find_first_of(" \t") == std::string::npos) {
      for (char c : row) {
        if (c != '0' && c != '1')
          throw std::invalid_argument("instance file: adjacency rows are 0/1 only");
        bits.push_back(c == '1');
      }
    } else {
      std::istringstream rs(row);
      int b;
      while (rs >> b) {
        if (b != 0 && b != 1)
          throw std::invalid_argument("instance file: adjacency rows are 0/1 only");
        bits.push_back(static_cast<uint8_t>(b));
      }
    }
    if (static_cast<int>(bits.size()) != n)
      throw std::invalid_argument("instance file: adjacency row has wrong length");
    adj[i] = std::move(bits);
  }

  ValueVector g;
  std::istringstream vs(lines.back());
  long long v;
  while (vs >> v) g.push_back(v);
  if (static_cast<int>(g.size()) != n)
    throw std::invalid_argument("instance file: value line has wrong length");
  if (T_out) *T_out = T;
  return {TransitionMap(n, std::move(adj)), std::move(g)};
}

inline void write_discrete_instance(std::ostream& os, const TransitionMap& phi,
                                    const ValueVector& g, int T) {
  os << phi.n << ' ' << T << '\n';
  for (int i = 0; i < phi.n; ++i) {
    for (int j = 0; j < phi.n; ++j) os << (phi.adj[i][j] ? '1' : '0');
    os << '\n';
  }
  for (int i = 0; i < phi.n; ++i) os << g[static_cast<size_t>(i)] << (i + 1 < phi.n ? ' ' : '\n');
}

// layout: "k,state,value,table"; tables in the order V, U, W, each k ascending
inline void write_tables_csv(std::ostream& os, const ValueTable& V, const ValueTable& U,
                             const ValueTable& W) {
  os << "k,state,value,table\n";
  auto dump = [&](const ValueTable& tab, const char* tag) {
    for (int k = 0; k < static_cast<int>(tab.rows.size()); ++k)
      for (size_t s = 0; s < tab.rows[static_cast<size_t>(k)].size(); ++s)
        os << k << ',' << (s + 1) << ',' << tab.rows[static_cast<size_t>(k)][s] << ',' << tag
           << '\n';
  };
  dump(V, "V");
  dump(U, "U");
  dump(W, "W");
}

// layout: "t,x[,x2],p[,p2],H" with H evaluated on the supplied hamiltonian
inline void write_arc_csv(std::ostream& os, const CharacteristicArc& arc,
                          const HamiltonianSpec& H) {
  if (arc.dim == 1)
    os << "t,x,p,H\n";
  else
    os << "t,x1,x2,p1,p2,H\n";
  for (const ArcPoint& pt : arc.points) {
    std::span<const double> xs(pt.x.data(), arc.dim), ps(pt.p.data(), arc.dim);
    os << format_double(pt.t);
    for (int a = 0; a < arc.dim; ++a) os << ',' << format_double(pt.x[a]);
    for (int a = 0; a < arc.dim; ++a) os << ',' << format_double(pt.p[a]);
    os << ',' << format_double(H.evaluate(xs, ps)) << '\n';
  }
}

inline void write_report(std::ostream& os, const ReconstructionReport& rep) {
  os << "verdict: " << (rep.verdict ? "true" : "false") << '\n';
  os << "sup_gap: " << format_double(rep.sup_gap) << '\n';
  os << "signed_gap: " << format_double(rep.signed_gap) << '\n';
  os << "overshoot: " << format_double(rep.overshoot) << '\n';
  os << "tolerance: " << format_double(rep.tolerance) << '\n';
  os << "scheme_tolerance: " << format_double(rep.scheme_tolerance) << '\n';
  os << "boundary_margin: " << format_double(rep.boundary_margin) << '\n';
  for (const ProbeSlice& ps : rep.probe_slices)
    os << "probe t=" << format_double(ps.t) << ": max|u-w| = " << format_double(ps.max_gap)
       << '\n';
}

template <typename WriteFn>
void write_file(const std::string& path, WriteFn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  fn(os);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace hjrec
