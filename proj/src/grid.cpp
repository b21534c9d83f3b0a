#include "hjcone/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace hjcone {

GridSpec GridSpec::simplex1d(int K, double h, double x_max, double dt) {
  if (K < 1 || K > 3) throw std::invalid_argument("simplex1d: K must be in 1..3");
  if (h <= 0.0 || x_max <= h) throw std::invalid_argument("simplex1d: bad spacing");
  GridSpec g;
  g.chart = Chart::Simplex1D;
  g.D = 1;
  g.K = K;
  g.h = h;
  g.x_max = x_max;
  g.dt = dt;
  g.build();
  return g;
}

GridSpec GridSpec::psd_chart2d(double h, double x_max, double dt) {
  if (h <= 0.0 || x_max <= h) throw std::invalid_argument("psd_chart2d: bad spacing");
  GridSpec g;
  g.chart = Chart::PsdChart2D;
  g.D = 2;
  g.K = 1;
  g.h = h;
  g.x_max = x_max;
  g.dt = dt;
  g.build();
  return g;
}

std::int64_t GridSpec::key(const std::array<int, 3>& c) const {
  const std::int64_t base = 2 * static_cast<std::int64_t>(side()) + 3;
  std::int64_t k = 0;
  for (int j = 0; j < ndims(); ++j) k = k * base + (c[j] + side() + 1);
  return k;
}

bool GridSpec::valid(const std::array<int, 3>& c) const {
  const int M = side();
  if (chart == Chart::Simplex1D) {
    int prev = 0;
    for (int j = 0; j < K; ++j) {
      if (c[j] < prev || c[j] > M) return false;
      prev = c[j];
    }
    return true;
  }
  // (ia, ib, ic): a = ia h, b = ib h (signed), c = ic h; PSD iff b^2 <= a c.
  const int ia = c[0], ib = c[1], ic = c[2];
  if (ia < 0 || ia > M || ic < 0 || ic > M || ib < -M || ib > M) return false;
  return static_cast<std::int64_t>(ib) * ib <= static_cast<std::int64_t>(ia) * ic;
}

int GridSpec::find(const std::array<int, 3>& c) const {
  const auto it = index_.find(key(c));
  return it == index_.end() ? -1 : it->second;
}

void GridSpec::build() {
  coords_.clear();
  index_.clear();
  const int M = side();
  if (chart == Chart::Simplex1D) {
    std::array<int, 3> c{0, 0, 0};
    if (K == 1) {
      for (int i = 0; i <= M; ++i) coords_.push_back({i, 0, 0});
    } else if (K == 2) {
      for (int i = 0; i <= M; ++i)
        for (int j = i; j <= M; ++j) coords_.push_back({i, j, 0});
    } else {
      for (int i = 0; i <= M; ++i)
        for (int j = i; j <= M; ++j)
          for (int k = j; k <= M; ++k) coords_.push_back({i, j, k});
    }
    (void)c;
  } else {
    for (int ia = 0; ia <= M; ++ia)
      for (int ib = -M; ib <= M; ++ib)
        for (int ic = 0; ic <= M; ++ic) {
          const std::array<int, 3> c{ia, ib, ic};
          if (valid(c)) coords_.push_back(c);
        }
  }
  index_.reserve(coords_.size() * 2);
  for (std::size_t i = 0; i < coords_.size(); ++i) index_[key(coords_[i])] = static_cast<int>(i);

  const int nd = ndims();
  nbr_.assign(coords_.size() * static_cast<std::size_t>(2 * nd), -1);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    for (int d = 0; d < nd; ++d) {
      std::array<int, 3> cp = coords_[i];
      cp[d] += 1;
      nbr_[i * static_cast<std::size_t>(2 * nd) + static_cast<std::size_t>(2 * d)] =
          valid(cp) ? find(cp) : -1;
      cp[d] -= 2;
      nbr_[i * static_cast<std::size_t>(2 * nd) + static_cast<std::size_t>(2 * d + 1)] =
          valid(cp) ? find(cp) : -1;
    }
  }
}

ConePoint GridSpec::node_point(std::size_t node) const {
  const auto& c = coords_[node];
  if (chart == Chart::Simplex1D) {
    std::vector<double> x(K);
    for (int k = 0; k < K; ++k) x[k] = c[k] * h;
    return ConePoint::from_scalars(x);
  }
  Eigen::MatrixXd m(2, 2);
  m << c[0] * h, c[1] * h, c[1] * h, c[2] * h;
  return ConePoint({SymMatrix::from_dense(m)});
}

std::vector<std::pair<std::size_t, double>> GridSpec::interp_stencil(
    const std::vector<double>& y) const {
  const int nd = ndims();
  if (static_cast<int>(y.size()) != nd) throw std::invalid_argument("interp_stencil: bad point");
  std::array<int, 3> lo{0, 0, 0};
  std::array<double, 3> fr{0.0, 0.0, 0.0};
  const int M = side();
  for (int d = 0; d < nd; ++d) {
    double v = std::min(std::max(y[d], chart == Chart::PsdChart2D && d == 1 ? -double(M) : 0.0),
                        double(M));
    int f = static_cast<int>(std::floor(v));
    if (f >= M) f = M - 1;
    lo[d] = f;
    fr[d] = v - f;
  }
  std::vector<std::pair<std::size_t, double>> out;
  double wsum = 0.0;
  for (int mask = 0; mask < (1 << nd); ++mask) {
    std::array<int, 3> c = lo;
    double w = 1.0;
    for (int d = 0; d < nd; ++d) {
      if (mask & (1 << d)) {
        c[d] += 1;
        w *= fr[d];
      } else {
        w *= 1.0 - fr[d];
      }
    }
    if (w <= 0.0) continue;
    int idx = find(c);
    if (idx < 0) {
      // corner outside the chart: substitute the nearest valid node obtained
      // by restoring the ordering (simplex) or shrinking b (psd chart)
      std::array<int, 3> cc = c;
      if (chart == Chart::Simplex1D) {
        for (int d = 1; d < nd; ++d) cc[d] = std::max(cc[d], cc[d - 1]);
        for (int d = 0; d < nd; ++d) cc[d] = std::min(cc[d], M);
        idx = find(cc);
      } else {
        while (idx < 0 && cc[1] != 0) {
          cc[1] += cc[1] > 0 ? -1 : 1;
          idx = find(cc);
        }
        if (idx < 0) idx = find({std::min(cc[0], M), 0, std::min(cc[2], M)});
      }
      if (idx < 0) throw std::runtime_error("interp_stencil: no valid substitute node");
    }
    out.emplace_back(static_cast<std::size_t>(idx), w);
    wsum += w;
  }
  for (auto& [i, w] : out) w /= wsum;
  return out;
}

double SolutionField::interpolate(std::size_t t_index, const ConePoint& x) const {
  std::vector<double> y;
  if (grid.chart == GridSpec::Chart::Simplex1D) {
    for (int k = 0; k < grid.K; ++k) y.push_back(x.parts[k](0, 0) / grid.h);
  } else {
    y = {x.parts[0](0, 0) / grid.h, x.parts[0](0, 1) / grid.h, x.parts[0](1, 1) / grid.h};
  }
  const auto st = grid.interp_stencil(y);
  double v = 0.0;
  for (const auto& [i, w] : st) v += w * values[t_index][i];
  return v;
}

std::size_t SolutionField::time_index(double t) const {
  std::size_t best = 0;
  double bd = std::abs(times[0] - t);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double d = std::abs(times[i] - t);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

}  // namespace hjcone
