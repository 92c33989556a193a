#include "mnls/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mnls/dynamics.hpp"
#include "mnls/error.hpp"
#include "mnls/spectral.hpp"

namespace mnls {

namespace {

// Small dense solve A x = b (n <= 3) by Gaussian elimination with pivoting.
bool solve_small(std::vector<double> a, std::vector<double> b, std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (std::abs(a[piv * n + c]) < 1e-300) return false;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      std::swap(b[c], b[piv]);
    }
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return true;
}

// Trigonometric correlation polynomials c_i(y) = sum_k g_ik exp(-i k.y).
class Correlation {
 public:
  Correlation(const GridSpec& grid, std::vector<std::vector<Complex>> coeffs)
      : grid_(grid), coeffs_(std::move(coeffs)) {
    // The Nyquist planes are not part of a symmetric trigonometric interpolant.
    for (auto& g : coeffs_) {
      for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
        std::size_t rest = idx;
        for (int a = 0; a < grid_.dim(); ++a) {
          const std::size_t j = rest / grid_.stride(a);
          rest %= grid_.stride(a);
          if (static_cast<int>(j) == grid_.nyquist_index(a)) g[idx] = 0.0;
        }
      }
    }
  }

  struct Eval {
    std::vector<Complex> values;
    double objective = 0.0;
    std::vector<double> gradient;
    std::vector<double> hessian;
  };

  Eval evaluate(const std::vector<double>& y, bool derivatives) const {
    const int d = grid_.dim();
    std::vector<std::vector<Complex>> phase(d);
    for (int a = 0; a < d; ++a) {
      const auto ks = grid_.wavenumbers(a);
      phase[a].resize(ks.size());
      for (std::size_t j = 0; j < ks.size(); ++j) phase[a][j] = std::polar(1.0, -ks[j] * y[a]);
    }
    Eval out;
    out.values.assign(coeffs_.size(), Complex{});
    out.gradient.assign(d, 0.0);
    out.hessian.assign(d * d, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      Complex c{};
      std::array<Complex, 3> dc{};
      std::array<Complex, 9> ddc{};
      std::array<double, 3> k{};
      for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
        std::size_t rest = idx;
        Complex e = 1.0;
        for (int a = 0; a < d; ++a) {
          const std::size_t j = rest / grid_.stride(a);
          rest %= grid_.stride(a);
          e *= phase[a][j];
          k[a] = grid_.wavenumbers(a)[j];
        }
        const Complex term = coeffs_[i][idx] * e;
        c += term;
        if (derivatives) {
          for (int a = 0; a < d; ++a) {
            dc[a] += Complex(0.0, -k[a]) * term;
            for (int b = 0; b < d; ++b) ddc[a * d + b] -= k[a] * k[b] * term;
          }
        }
      }
      out.values[i] = c;
      const double mag = std::abs(c);
      out.objective += mag;
      if (!derivatives || mag == 0.0) continue;
      std::array<double, 3> gm{};
      for (int a = 0; a < d; ++a) gm[a] = std::real(std::conj(c) * dc[a]) / mag;
      for (int a = 0; a < d; ++a) {
        out.gradient[a] += gm[a];
        for (int b = 0; b < d; ++b) {
          out.hessian[a * d + b] += (std::real(std::conj(dc[a]) * dc[b]) +
                                     std::real(std::conj(c) * ddc[a * d + b])) / mag -
                                    gm[a] * gm[b] / mag;
        }
      }
    }
    return out;
  }

 private:
  const GridSpec& grid_;
  std::vector<std::vector<Complex>> coeffs_;
};

}  // namespace

double variance(const FieldVec& v) {
  const auto x2 = v.grid()->x_squared();
  double acc = 0.0;
  for (const auto& c : v) {
    const auto vals = c.values();
    for (std::size_t j = 0; j < vals.size(); ++j) acc += x2[j] * std::norm(vals[j]);
  }
  return acc * v.grid()->cell_volume();
}

double h1_norm_squared(const FieldVec& w) {
  double acc = 0.0;
  for (const auto& c : w) acc += norm_squared(c) + kinetic(c);
  return acc;
}

double h1_norm(const FieldVec& w) { return std::sqrt(h1_norm_squared(w)); }

std::vector<double> second_differences(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() != v.size()) throw ConfigError("second_differences: size mismatch");
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double h0 = t[i] - t[i - 1];
    const double h1 = t[i + 1] - t[i];
    out.push_back(2.0 * (h0 * v[i + 1] - (h0 + h1) * v[i] + h1 * v[i - 1]) / (h0 * h1 * (h0 + h1)));
  }
  return out;
}

double virial_residual(const EvolutionTrace& trace) {
  const auto& t = trace.times;
  if (t.size() < 3) throw ConfigError("virial residual needs at least three recorded times");
  const double stride = t[1] - t[0];
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - stride) > 1e-9 * stride) {
      throw ConfigError("virial residual needs a uniform recording stride");
    }
  }
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double d2 =
        (trace.variance[i + 1] - 2.0 * trace.variance[i] + trace.variance[i - 1]) / (stride * stride);
    const double rhs = 8.0 * trace.pohozaev[i];
    worst = std::max(worst, std::abs(d2 - rhs) / (1.0 + std::abs(rhs)));
  }
  return worst;
}

TranslationFit best_translation(const FieldVec& u, const FieldVec& reference, bool h1_weight) {
  if (!same_grid(u.grid(), reference.grid())) throw GridMismatchError();
  if (u.components() != reference.components()) throw ConfigError("component count mismatch");
  const auto& grid = *u.grid();
  const int d = grid.dim();
  const double scale = grid.cell_volume() / static_cast<double>(grid.size());
  const auto k2 = grid.k_squared();

  std::vector<std::vector<Complex>> coeffs;
  std::vector<double> objective(grid.size(), 0.0);
  for (int i = 0; i < u.components(); ++i) {
    const auto uh = forward_transform(u[i]);
    const auto qh = forward_transform(reference[i]);
    std::vector<Complex> g(grid.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      g[k] = (h1_weight ? 1.0 + k2[k] : 1.0) * scale * std::conj(qh[k]) * uh[k];
    }
    auto on_grid = g;
    fft_forward_inplace(grid, on_grid);
    for (std::size_t m = 0; m < on_grid.size(); ++m) objective[m] += std::abs(on_grid[m]);
    coeffs.push_back(std::move(g));
  }

  const std::size_t best = static_cast<std::size_t>(
      std::max_element(objective.begin(), objective.end()) - objective.begin());
  std::vector<double> y(d);
  {
    std::size_t rest = best;
    for (int a = 0; a < d; ++a) {
      const int n = grid.points(a);
      const int m = static_cast<int>(rest / grid.stride(a));
      rest %= grid.stride(a);
      y[a] = (m < n / 2 ? m : m - n) * grid.spacing(a);
    }
  }

  const Correlation corr(grid, std::move(coeffs));
  auto current = corr.evaluate(y, true);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> neg_grad(d), step;
    for (int a = 0; a < d; ++a) neg_grad[a] = -current.gradient[a];
    bool ascent = solve_small(current.hessian, neg_grad, step);
    double dot = 0.0;
    if (ascent) {
      for (int a = 0; a < d; ++a) dot += step[a] * current.gradient[a];
      ascent = dot > 0.0;
    }
    if (!ascent) {
      // Fall back to a short gradient step.
      step.assign(d, 0.0);
      double gnorm = 0.0;
      for (double g : current.gradient) gnorm += g * g;
      gnorm = std::sqrt(gnorm);
      if (gnorm == 0.0) break;
      for (int a = 0; a < d; ++a) step[a] = 0.25 * grid.spacing(a) * current.gradient[a] / gnorm;
    }
    for (int a = 0; a < d; ++a) {
      step[a] = std::clamp(step[a], -grid.spacing(a), grid.spacing(a));
    }
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving) {
      std::vector<double> trial(d);
      for (int a = 0; a < d; ++a) trial[a] = y[a] + step[a];
      auto next = corr.evaluate(trial, true);
      if (next.objective >= current.objective * (1.0 - 1e-15)) {
        y = trial;
        current = std::move(next);
        accepted = true;
        break;
      }
      for (auto& s : step) s *= 0.5;
    }
    double largest = 0.0;
    for (int a = 0; a < d; ++a) largest = std::max(largest, std::abs(step[a]) / grid.length(a));
    if (!accepted || largest < 1e-14) break;
  }

  TranslationFit fit;
  fit.shift = y;
  fit.overlaps = current.values;
  return fit;
}

FieldVec apply_alignment(const FieldVec& reference, const OrbitalAlignment& alignment) {
  FieldVec out = translate(reference, alignment.translation);
  for (int i = 0; i < out.components(); ++i) out[i] *= std::polar(1.0, alignment.phases[i]);
  return out;
}

OrbitalAlignment orbital_distance(const FieldVec& v, const FieldVec& reference) {
  if (!(h1_norm_squared(reference) > 0.0)) throw ConfigError("orbital distance needs a nonzero reference");
  const auto fit = best_translation(v, reference, true);
  OrbitalAlignment out;
  out.translation = fit.shift;
  out.phases.resize(v.components());
  for (int i = 0; i < v.components(); ++i) {
    out.phases[i] = std::abs(fit.overlaps[i]) > 0.0 ? std::arg(fit.overlaps[i]) : 0.0;
  }
  out.distance = h1_norm(v - apply_alignment(reference, out));
  return out;
}

FamilyDistance distance_to_family(const FieldVec& v, const FamilyGenerator& family, double lo,
                                  double hi, int samples) {
  if (samples < 2) throw ConfigError("family distance needs at least two samples");
  auto eval = [&](double s) { return orbital_distance(v, family(s)); };
  FamilyDistance best;
  best.alignment.distance = std::numeric_limits<double>::infinity();
  int best_index = 0;
  const double spacing = (hi - lo) / (samples - 1);
  for (int s = 0; s < samples; ++s) {
    const double param = lo + spacing * s;
    auto a = eval(param);
    if (a.distance < best.alignment.distance) {
      best = {param, std::move(a)};
      best_index = s;
    }
  }

  double a = lo + spacing * std::max(best_index - 1, 0);
  double b = lo + spacing * std::min(best_index + 1, samples - 1);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  auto fc = eval(c), fd = eval(d);
  while (b - a > 1e-5 * (hi - lo)) {
    if (fc.distance < fd.distance) {
      b = d; d = c; fd = std::move(fc);
      c = b - ratio * (b - a); fc = eval(c);
    } else {
      a = c; c = d; fc = std::move(fd);
      d = a + ratio * (b - a); fd = eval(d);
    }
  }
  if (fc.distance < best.alignment.distance) best = {c, std::move(fc)};
  if (fd.distance < best.alignment.distance) best = {d, std::move(fd)};
  return best;
}

}  // namespace mnls
