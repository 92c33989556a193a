#pragma once

// Reference values computed without the library's spectral machinery:
// closed forms, Simpson quadrature on analytic profiles, brute-force DFTs
// and finite differences.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// Scalar ground state of u'' - u + |u|^{2p} u = 0 in 1D: ((p+1) sech^2(p x))^{1/(2p)}.
inline double soliton(double x, double p) {
  const double s = 1.0 / std::cosh(p * x);
  return std::pow((p + 1.0) * s * s, 0.5 / p);
}

/// d/dx of `soliton`, differentiated by hand: -tanh(p x) Q(x).
inline double soliton_derivative(double x, double p) { return -std::tanh(p * x) * soliton(x, p); }

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

struct ScalarIntegrals {
  double mass, kinetic, potential;  // int Q^2, int Q'^2, int Q^{2p+2}
};

/// Integrals of the 1D soliton over the real line (the tails beyond |x| = 60 / p are below 1e-25).
inline ScalarIntegrals soliton_integrals(double p) {
  const double a = 60.0 / p;
  return {simpson([p](double x) { return std::pow(soliton(x, p), 2.0); }, -a, a),
          simpson([p](double x) { return std::pow(soliton_derivative(x, p), 2.0); }, -a, a),
          simpson([p](double x) { return std::pow(soliton(x, p), 2.0 * p + 2.0); }, -a, a)};
}

/// Closed forms at p = 1 for Q = sqrt(2) sech: int 2 sech^2 = 4, int 2 sech^2 tanh^2 = 4/3, int 4 sech^4 = 16/3.
constexpr double kMassP1 = 4.0;
constexpr double kKineticP1 = 4.0 / 3.0;
constexpr double kPotentialP1 = 16.0 / 3.0;
/// int x^2 2 sech^2 x dx = pi^2 / 3.
inline const double kVarianceP1 = std::numbers::pi * std::numbers::pi / 3.0;

/// O(n^2) DFT with the e^{-2 pi i jk/n} convention.
inline std::vector<Complex> dft(const std::vector<Complex>& v) {
  const std::size_t n = v.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += v[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(j * k % n) / n);
    out[k] = s;
  }
  return out;
}

/// Spectral second derivative on a periodic 1D grid of length L computed with the brute-force DFT.
inline std::vector<Complex> dft_second_derivative(const std::vector<Complex>& v, double L) {
  const std::size_t n = v.size();
  auto c = dft(v);
  for (std::size_t k = 0; k < n; ++k) {
    const double m = k < n / 2 ? double(k) : double(k) - double(n);
    const double kk = 2.0 * std::numbers::pi * m / L;
    c[k] *= -kk * kk;
  }
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += c[k] * std::polar(1.0, 2.0 * std::numbers::pi * double(j * k % n) / n);
    out[j] = s / double(n);
  }
  return out;
}

/// Centered finite difference of a scalar function.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Free evolution i v_t + v_xx = 0 of a real datum keeps T fixed and has zero initial variance
/// velocity, so the variance is V(0) + 4 T t^2 exactly.
inline double free_variance(double v0, double kinetic, double t) { return v0 + 4.0 * kinetic * t * t; }

}  // namespace oracle
