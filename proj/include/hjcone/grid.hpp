#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hjcone/cone.hpp"

namespace hjcone {

// Discretization of the chain cone. Two charts are supported:
//   Simplex1D (D = 1, K <= 3): integer nodes 0 <= i_1 <= ... <= i_K <= M
//     with spacing h, coordinates x_k = i_k h.
//   PsdChart2D (D = 2, K = 1): chart (a, b, c) -> [[a, b], [b, c]] over
//     a, c in [0, x_max], |b| <= x_max, restricted to b^2 <= a c.
struct GridSpec {
  enum class Chart { Simplex1D, PsdChart2D };

  Chart chart = Chart::Simplex1D;
  int D = 1;
  int K = 1;
  double h = 1.0 / 16.0;
  double dt = 0.0;  // filled by the solver from the CFL bound when 0
  double x_max = 2.0;

  static GridSpec simplex1d(int K, double h, double x_max, double dt = 0.0);
  static GridSpec psd_chart2d(double h, double x_max, double dt = 0.0);

  int ndims() const { return chart == Chart::Simplex1D ? K : 3; }
  int side() const { return static_cast<int>(x_max / h + 0.5); }

  // node table ------------------------------------------------------------
  std::size_t num_nodes() const { return coords_.size(); }
  const std::vector<std::array<int, 3>>& coords() const { return coords_; }
  // neighbor node index in +/- direction along dim, or -1 when outside
  int neighbor(std::size_t node, int dim, int dir) const {
    return nbr_[node * static_cast<std::size_t>(2 * ndims()) +
                static_cast<std::size_t>(2 * dim + (dir > 0 ? 0 : 1))];
  }
  ConePoint node_point(std::size_t node) const;
  // multilinear interpolation weights for a point given by grid coordinates
  // (units of h); corners outside the chart are substituted by their
  // projection onto it.
  std::vector<std::pair<std::size_t, double>> interp_stencil(const std::vector<double>& y) const;

  void build();

 private:
  std::vector<std::array<int, 3>> coords_;
  std::vector<int> nbr_;
  std::unordered_map<std::int64_t, int> index_;
  std::int64_t key(const std::array<int, 3>& c) const;
  bool valid(const std::array<int, 3>& c) const;
  int find(const std::array<int, 3>& c) const;
};

// Gridded values of f(t, .) with snapshot times.
struct SolutionField {
  GridSpec grid;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[t][node]

  double at(std::size_t t_index, std::size_t node) const { return values[t_index][node]; }
  // value at time index, interpolated at a cone point (chart coordinates)
  double interpolate(std::size_t t_index, const ConePoint& x) const;
  std::size_t time_index(double t) const;
};

}  // namespace hjcone
