#include "mnls/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "mnls/error.hpp"

namespace mnls {

namespace {

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::size_t size = 0;

  explicit PlanPair(const std::vector<int>& points) {
    size = 1;
    for (int n : points) size *= static_cast<std::size_t>(n);
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(size);
    const int rank = static_cast<int>(points.size());
    forward = fftw_plan_dft(rank, points.data(), buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft(rank, points.data(), buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }
};

PlanPair& plans_for(const GridSpec& grid) {
  thread_local std::map<std::vector<int>, std::unique_ptr<PlanPair>> cache;
  auto& slot = cache[grid.points()];
  if (!slot) slot = std::make_unique<PlanPair>(grid.points());
  return *slot;
}

void execute(const GridSpec& grid, std::span<Complex> data, bool forward) {
  auto& plans = plans_for(grid);
  if (data.size() != plans.size) throw ConfigError("transform buffer size mismatch");
  std::memcpy(plans.buffer, data.data(), plans.size * sizeof(Complex));
  fftw_execute(forward ? plans.forward : plans.backward);
  std::memcpy(static_cast<void*>(data.data()), plans.buffer, plans.size * sizeof(Complex));
}

// Applies `matrix` (rows = output nodes, cols = input modes, both n) along one axis.
void apply_along_axis(const GridSpec& grid, int axis, const std::vector<Complex>& matrix,
                      std::vector<Complex>& data) {
  const std::size_t n = grid.points(axis);
  const std::size_t inner = grid.stride(axis);
  const std::size_t outer = grid.size() / (n * inner);
  std::vector<Complex> line(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      for (std::size_t m = 0; m < n; ++m) line[m] = data[base + m * inner];
      for (std::size_t j = 0; j < n; ++j) {
        const Complex* row = matrix.data() + j * n;
        Complex acc{};
        for (std::size_t m = 0; m < n; ++m) acc += row[m] * line[m];
        data[base + j * inner] = acc;
      }
    }
  }
}

}  // namespace

void fft_forward_inplace(const GridSpec& grid, std::span<Complex> data) {
  execute(grid, data, true);
}

void fft_inverse_inplace(const GridSpec& grid, std::span<Complex> data) {
  execute(grid, data, false);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& v : data) v *= scale;
}

std::vector<Complex> forward_transform(const ComponentField& u) {
  std::vector<Complex> spectrum(u.values().begin(), u.values().end());
  fft_forward_inplace(*u.grid(), spectrum);
  return spectrum;
}

ComponentField inverse_transform(const GridPtr& grid, std::vector<Complex> spectrum) {
  fft_inverse_inplace(*grid, spectrum);
  return ComponentField(grid, std::move(spectrum));
}

ComponentField laplacian(const ComponentField& u) {
  auto spectrum = forward_transform(u);
  const auto k2 = u.grid()->k_squared();
  for (std::size_t j = 0; j < spectrum.size(); ++j) spectrum[j] *= -k2[j];
  return inverse_transform(u.grid(), std::move(spectrum));
}

FieldVec laplacian(const FieldVec& u) {
  std::vector<ComponentField> out;
  out.reserve(u.components());
  for (const auto& c : u) out.push_back(laplacian(c));
  return FieldVec(std::move(out));
}

double kinetic(const ComponentField& u) {
  const auto spectrum = forward_transform(u);
  const auto k2 = u.grid()->k_squared();
  double acc = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) acc += k2[j] * std::norm(spectrum[j]);
  return acc * u.grid()->cell_volume() / static_cast<double>(u.grid()->size());
}

ComponentField translate(const ComponentField& u, std::span<const double> shift) {
  const auto& grid = *u.grid();
  if (static_cast<int>(shift.size()) != grid.dim()) throw ConfigError("shift has wrong dimension");
  auto spectrum = forward_transform(u);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    std::size_t rest = idx;
    Complex factor = 1.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const std::size_t j = rest / grid.stride(a);
      rest %= grid.stride(a);
      const double arg = grid.wavenumbers(a)[j] * shift[a];
      // The Nyquist mode is split symmetrically so real fields stay real.
      factor *= static_cast<int>(j) == grid.nyquist_index(a) ? Complex(std::cos(arg), 0.0)
                                                             : std::polar(1.0, arg);
    }
    spectrum[idx] *= factor;
  }
  return inverse_transform(u.grid(), std::move(spectrum));
}

FieldVec translate(const FieldVec& u, std::span<const double> shift) {
  std::vector<ComponentField> out;
  out.reserve(u.components());
  for (const auto& c : u) out.push_back(translate(c, shift));
  return FieldVec(std::move(out));
}

FieldVec resample_scaled(const FieldVec& u, double lambda, double exponent,
                         const ResampleOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("dilation factor must be positive and finite");
  }
  if (lambda == 1.0) {
    FieldVec out = u;
    return out;
  }
  const GridPtr& gp = u.grid();
  const auto& grid = *gp;

  // Mass of U that the dilation pushes outside the box (only when compressing).
  double dropped = 0.0;
  double total_in = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    std::size_t rest = idx;
    bool outside = false;
    for (int a = 0; a < grid.dim(); ++a) {
      const double x = grid.coordinates(a)[rest / grid.stride(a)];
      rest %= grid.stride(a);
      if (lambda > 1.0 && std::abs(x) >= 0.5 * grid.length(a) / lambda) outside = true;
    }
    double density = 0.0;
    for (const auto& c : u) density += std::norm(c[idx]);
    total_in += density;
    if (outside) dropped += density;
  }

  std::vector<std::vector<Complex>> matrices(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) {
    const std::size_t n = grid.points(a);
    const double half = 0.5 * grid.length(a);
    const auto xs = grid.coordinates(a);
    const auto ks = grid.wavenumbers(a);
    auto& mat = matrices[a];
    mat.assign(n * n, Complex{});
    for (std::size_t j = 0; j < n; ++j) {
      const double y = lambda * xs[j];
      if (y < -half || y >= half) continue;
      const double offset = y + half;  // distance from node 0
      for (std::size_t m = 0; m < n; ++m) {
        const double arg = ks[m] * offset;
        mat[j * n + m] = (static_cast<int>(m) == grid.nyquist_index(a)
                              ? Complex(std::cos(arg), 0.0)
                              : std::polar(1.0, arg)) /
                         static_cast<double>(n);
      }
    }
  }

  const double amplitude = std::pow(lambda, exponent);
  std::vector<ComponentField> out;
  out.reserve(u.components());
  for (const auto& c : u) {
    auto data = forward_transform(c);
    for (int a = 0; a < grid.dim(); ++a) apply_along_axis(grid, a, matrices[a], data);
    for (auto& v : data) v *= amplitude;
    out.emplace_back(gp, std::move(data));
  }
  FieldVec result(std::move(out));

  const double tail = std::max(total_in > 0.0 ? dropped / total_in : 0.0,
                               tail_mass_fraction(result, options.shell));
  if (tail > options.tail_tolerance) throw TailMassError(tail, options.tail_tolerance);
  return result;
}

}  // namespace mnls
