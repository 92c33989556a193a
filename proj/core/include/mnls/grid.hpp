#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace mnls {

using Complex = std::complex<double>;

class GridSpec;
using GridPtr = std::shared_ptr<const GridSpec>;

/// Periodic box [-L/2, L/2)^N sampled on a uniform tensor grid.
///
/// Storage is row-major with axis 0 varying slowest, matching FFTW's
/// multi-dimensional layout. The grid precomputes per-axis coordinates and
/// wavenumbers together with |k|^2 at every node so spectral operators never
/// recompute them.
class GridSpec {
 public:
  /// Builds a grid; every axis must have a power-of-two point count and a
  /// positive length. Throws ConfigError otherwise.
  static GridPtr make(std::vector<int> points, std::vector<double> lengths);
  /// Same count and length on every axis.
  static GridPtr cube(int dim, int points, double length);

  int dim() const { return static_cast<int>(points_.size()); }
  const std::vector<int>& points() const { return points_; }
  const std::vector<double>& lengths() const { return lengths_; }
  int points(int axis) const { return points_[axis]; }
  double length(int axis) const { return lengths_[axis]; }
  double spacing(int axis) const { return lengths_[axis] / points_[axis]; }
  std::size_t size() const { return size_; }
  /// Quadrature weight h^N.
  double cell_volume() const { return cell_volume_; }

  /// Node coordinates along one axis: -L/2 + j h.
  std::span<const double> coordinates(int axis) const { return coords_[axis]; }
  /// Discrete frequencies 2 pi m / L, m in [-n/2, n/2), in FFT order.
  std::span<const double> wavenumbers(int axis) const { return freqs_[axis]; }
  /// |k|^2 at every node of the spectral grid (FFT order).
  std::span<const double> k_squared() const { return k2_; }
  /// |x|^2 at every physical node.
  std::span<const double> x_squared() const { return x2_; }
  /// Number of nodes in one slab orthogonal to `axis` (product of trailing counts).
  std::size_t stride(int axis) const { return strides_[axis]; }

  /// Index of the frequency -n/2 along an axis, which interpolation treats as a cosine.
  int nyquist_index(int axis) const { return points_[axis] / 2; }

  bool operator==(const GridSpec& other) const {
    return points_ == other.points_ && lengths_ == other.lengths_;
  }

 private:
  GridSpec(std::vector<int> points, std::vector<double> lengths);

  std::vector<int> points_;
  std::vector<double> lengths_;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
  std::vector<std::vector<double>> coords_;
  std::vector<std::vector<double>> freqs_;
  std::vector<double> k2_;
  std::vector<double> x2_;
  std::vector<std::size_t> strides_;
};

bool same_grid(const GridPtr& a, const GridPtr& b);

}  // namespace mnls
