#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hjrec {

struct GridAxis {
  double lo = 0, hi = 0, h = 0;
  int nodes = 0;
  double coord(int i) const { return lo + i * h; }  // by index, never accumulated
};

// Uniform node-centered grid, 1 or 2 dimensional. Node order is x-major:
// flat index = ix*ny + iy in 2D, which is lexicographic (x,y).
struct Grid {
  int dim = 1;
  std::array<GridAxis, 2> axis{};

  static GridAxis make_axis(double lo, double hi, double h) {
    if (!(h > 0)) throw std::invalid_argument("Grid: cell width must be positive");
    if (!(hi > lo)) throw std::invalid_argument("Grid: empty axis range");
    double cells_real = (hi - lo) / h;
    int cells = (int)std::llround(cells_real);
    if (cells < 1 || std::abs(cells_real - cells) > 1e-12 * std::max(1.0, cells_real))
      throw std::invalid_argument("Grid: (hi - lo) is not an integer multiple of h");
    return GridAxis{lo, hi, h, cells + 1};
  }

  static Grid make_1d(double lo, double hi, double h) {
    Grid g;
    g.dim = 1;
    g.axis[0] = make_axis(lo, hi, h);
    return g;
  }

  static Grid make_2d(double xlo, double xhi, double ylo, double yhi, double h) {
    Grid g;
    g.dim = 2;
    g.axis[0] = make_axis(xlo, xhi, h);
    g.axis[1] = make_axis(ylo, yhi, h);
    return g;
  }

  int node_count() const { return dim == 1 ? axis[0].nodes : axis[0].nodes * axis[1].nodes; }

  // coordinates of the flat node index, written into xy
  void node_coords(int flat, std::span<double> xy) const {
    if (dim == 1) {
      xy[0] = axis[0].coord(flat);
    } else {
      xy[0] = axis[0].coord(flat / axis[1].nodes);
      xy[1] = axis[1].coord(flat % axis[1].nodes);
    }
  }

  bool operator==(const Grid& o) const {
    if (dim != o.dim) return false;
    for (int a = 0; a < dim; ++a)
      if (axis[a].lo != o.axis[a].lo || axis[a].hi != o.axis[a].hi || axis[a].h != o.axis[a].h)
        return false;
    return true;
  }
};

struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if ((int)values.size() != grid.node_count())
      throw std::domain_error("GridFunction: value count != node count");
    for (double x : values)
      if (!std::isfinite(x)) throw std::invalid_argument("GridFunction: values must be finite");
  }

  static GridFunction sample(const Grid& g,
                             const std::function<double(std::span<const double>)>& f) {
    std::vector<double> vals(g.node_count());
    std::array<double, 2> xy{};
    for (int i = 0; i < g.node_count(); ++i) {
      g.node_coords(i, xy);
      vals[i] = f(std::span<const double>(xy.data(), g.dim));
    }
    return GridFunction(g, std::move(vals));
  }
};

}  // namespace hjrec
