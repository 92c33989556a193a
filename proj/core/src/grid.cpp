#include "mnls/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mnls/error.hpp"

namespace mnls {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridSpec::GridSpec(std::vector<int> points, std::vector<double> lengths)
    : points_(std::move(points)), lengths_(std::move(lengths)) {
  const int n_axes = dim();
  size_ = 1;
  cell_volume_ = 1.0;
  for (int a = 0; a < n_axes; ++a) {
    size_ *= static_cast<std::size_t>(points_[a]);
    cell_volume_ *= spacing(a);
  }

  strides_.assign(n_axes, 1);
  for (int a = n_axes - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * points_[a + 1];

  coords_.resize(n_axes);
  freqs_.resize(n_axes);
  for (int a = 0; a < n_axes; ++a) {
    const int n = points_[a];
    const double h = spacing(a);
    coords_[a].resize(n);
    freqs_[a].resize(n);
    for (int j = 0; j < n; ++j) {
      coords_[a][j] = -0.5 * lengths_[a] + j * h;
      const int m = j < n / 2 ? j : j - n;
      freqs_[a][j] = 2.0 * std::numbers::pi * m / lengths_[a];
    }
  }

  k2_.assign(size_, 0.0);
  x2_.assign(size_, 0.0);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::size_t rest = idx;
    for (int a = 0; a < n_axes; ++a) {
      const std::size_t j = rest / strides_[a];
      rest %= strides_[a];
      k2_[idx] += freqs_[a][j] * freqs_[a][j];
      x2_[idx] += coords_[a][j] * coords_[a][j];
    }
  }
}

GridPtr GridSpec::make(std::vector<int> points, std::vector<double> lengths) {
  if (points.empty() || points.size() > 3) {
    throw ConfigError("grid dimension must be 1, 2 or 3");
  }
  if (points.size() != lengths.size()) {
    throw ConfigError("grid needs one length per axis");
  }
  for (std::size_t a = 0; a < points.size(); ++a) {
    if (!is_power_of_two(points[a]) || points[a] < 4) {
      throw ConfigError("axis " + std::to_string(a) + ": point count " +
                        std::to_string(points[a]) + " is not a power of two >= 4");
    }
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw ConfigError("axis " + std::to_string(a) + ": box length must be positive");
    }
  }
  return GridPtr(new GridSpec(std::move(points), std::move(lengths)));
}

GridPtr GridSpec::cube(int dim, int points, double length) {
  if (dim < 1 || dim > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  return make(std::vector<int>(dim, points), std::vector<double>(dim, length));
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace mnls
