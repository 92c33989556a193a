#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mnls/error.hpp"
#include "mnls/field.hpp"
#include "mnls/functionals.hpp"
#include "mnls/random_fields.hpp"
#include "mnls/spectral.hpp"
#include "oracles.hpp"

using namespace mnls;

namespace {

GridPtr line(int n = 1024, double L = 40.0) { return GridSpec::cube(1, n, L); }

ComponentField soliton_field(const GridPtr& g, double p = 1.0) {
  return sample(g, [p](std::span<const double> x) { return Complex(oracle::soliton(x[0], p)); });
}

double max_abs_diff(const ComponentField& a, const ComponentField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST(Grid, SpacingTimesCountIsLength) {
  for (int n : {4, 64, 1024}) {
    auto g = GridSpec::make({n, 8}, {40.0, 7.5});
    EXPECT_EQ(g->spacing(0) * n, 40.0);
    EXPECT_EQ(g->spacing(1) * 8, 7.5);
    EXPECT_EQ(g->size(), static_cast<std::size_t>(n) * 8);
  }
}

TEST(Grid, CoordinatesAreCentered) {
  auto g = line(16, 8.0);
  auto x = g->coordinates(0);
  EXPECT_DOUBLE_EQ(x.front(), -4.0);
  EXPECT_DOUBLE_EQ(x.back(), 4.0 - 0.5);
}

TEST(Grid, WavenumbersInFftOrder) {
  auto g = line(8, 2.0 * std::numbers::pi);
  auto k = g->wavenumbers(0);
  const double expected[] = {0, 1, 2, 3, -4, -3, -2, -1};
  for (int j = 0; j < 8; ++j) EXPECT_DOUBLE_EQ(k[j], expected[j]);
}

TEST(Grid, PointCountIsPowerPerDimension) {
  EXPECT_EQ(GridSpec::cube(3, 16, 10.0)->size(), 16u * 16u * 16u);
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(GridSpec::make({100}, {10.0}), ConfigError);
  EXPECT_THROW(GridSpec::make({64}, {-1.0}), ConfigError);
  EXPECT_THROW(GridSpec::cube(4, 8, 1.0), ConfigError);
}

TEST(Sample, ZeroFunctionGivesZeroField) {
  auto u = sample(line(), [](std::span<const double>) { return Complex(0.0); });
  for (auto v : u.values()) EXPECT_EQ(v, Complex(0.0));
}

TEST(Sample, SolitonPeaksAtOrigin) {
  auto g = line();
  auto u = soliton_field(g);
  const std::size_t mid = 512;  // x = 0
  EXPECT_DOUBLE_EQ(g->coordinates(0)[mid], 0.0);
  EXPECT_NEAR(u[mid].real(), std::sqrt(2.0), 1e-15);
  for (auto v : u.values()) EXPECT_LE(std::abs(v), std::sqrt(2.0) + 1e-15);
  // The profile itself satisfies the soliton ODE: check with a finite difference.
  const double h = 1e-4;
  for (double x : {-3.0, -0.5, 0.7, 2.0}) {
    const double q = oracle::soliton(x, 1.0);
    const double q2 = (oracle::soliton(x + h, 1.0) - 2 * q + oracle::soliton(x - h, 1.0)) / (h * h);
    EXPECT_LT(std::abs(q2 - q + q * q * q), 1e-6);
  }
}

TEST(Sample, PlaneWaveHasUnitModulus) {
  auto g = line();
  auto u = sample(g, [](std::span<const double> x) { return std::polar(1.0, 2.0 * std::numbers::pi * x[0] / 40.0); });
  for (auto v : u.values()) EXPECT_NEAR(std::abs(v), 1.0, 1e-15);
}

TEST(Sample, NonFiniteValueNamesNode) {
  auto g = line(16, 8.0);
  try {
    sample(g, [](std::span<const double> x) { return Complex(x[0] == -2.0 ? NAN : 1.0); });
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_EQ(e.node(), 4u);
  }
}

TEST(Inner, Examples) {
  auto g = line();
  auto q = soliton_field(g);
  ComponentField zero(g);
  EXPECT_EQ(inner(zero, q), Complex(0.0));
  EXPECT_NEAR(inner(q, q).real(), oracle::kMassP1, 1e-12);
  const double theta = 0.37;
  const Complex lhs = inner(std::polar(1.0, theta) * q, q);
  const Complex rhs = std::polar(1.0, -theta) * inner(q, q);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-13);
}

TEST(Inner, GridMismatchThrows) {
  EXPECT_THROW(inner(ComponentField(line(64)), ComponentField(line(128))), GridMismatchError);
}

TEST(Laplacian, ZeroStaysZero) {
  auto u = laplacian(ComponentField(line()));
  for (auto v : u.values()) EXPECT_EQ(v, Complex(0.0));
}

TEST(Laplacian, PlaneWaveIsEigenfunction) {
  auto g = line();
  for (int m : {1, 3, 17}) {
    const double k = 2.0 * std::numbers::pi * m / 40.0;
    auto u = sample(g, [k](std::span<const double> x) { return std::polar(1.0, k * x[0]); });
    auto lu = laplacian(u);
    // FFT roundoff is O(eps log2 n), amplified by the largest resolved k^2.
    const double kmax = std::numbers::pi / g->spacing(0);
    const double bound = std::numeric_limits<double>::epsilon() * std::log2(double(u.size())) * kmax * kmax;
    for (std::size_t j = 0; j < u.size(); ++j) EXPECT_NEAR(std::abs(lu[j] + k * k * u[j]), 0.0, bound);
  }
}

TEST(Laplacian, SolitonMatchesOdeResidual) {
  // Wide box so the periodic wrap of the sech tail stays below the tolerance.
  auto g = line(2048, 60.0);
  auto q = soliton_field(g);
  auto lq = laplacian(q);
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double v = q[j].real();
    EXPECT_NEAR(lq[j].real(), v - v * v * v, 1e-8);
  }
}

TEST(Laplacian, MatchesBruteForceDft) {
  auto g = line(64, 12.0);
  std::mt19937_64 rng(3);
  auto u = smooth_random_field(g, 1, rng)[0];
  std::vector<Complex> v(u.values().begin(), u.values().end());
  auto ref = oracle::dft_second_derivative(v, 12.0);
  auto lu = laplacian(u);
  for (std::size_t j = 0; j < v.size(); ++j) EXPECT_NEAR(std::abs(lu[j] - ref[j]), 0.0, 1e-10);
}

TEST(Spectral, RoundTrip) {
  auto g = GridSpec::make({32, 16}, {10.0, 6.0});
  std::mt19937_64 rng(1);
  auto u = smooth_random_field(g, 1, rng)[0];
  auto back = inverse_transform(g, forward_transform(u));
  EXPECT_LT(std::sqrt(norm_squared(back - u) / norm_squared(u)), 1e-12);
}

TEST(Spectral, Parseval) {
  auto g = line(256, 20.0);
  std::mt19937_64 rng(2);
  auto u = smooth_random_field(g, 1, rng)[0];
  const auto hat = forward_transform(u);
  double s = 0.0;
  for (auto c : hat) s += std::norm(c);
  s *= g->cell_volume() / g->size();
  EXPECT_NEAR(s / norm_squared(u), 1.0, 1e-12);
}

TEST(Spectral, LaplacianSelfAdjoint) {
  auto g = GridSpec::make({64, 32}, {12.0, 10.0});
  std::mt19937_64 rng(4);
  auto a = smooth_random_field(g, 1, rng)[0];
  auto b = smooth_random_field(g, 1, rng)[0];
  const Complex d = inner(laplacian(a), b) - inner(a, laplacian(b));
  EXPECT_LE(std::abs(d), 1e-10 * std::sqrt(norm_squared(a) * norm_squared(b)));
}

TEST(Spectral, KineticOfSolitonMatchesClosedForm) {
  EXPECT_NEAR(kinetic(soliton_field(line())), oracle::kKineticP1, 1e-12);
}

TEST(Spectral, TranslateIsExactForGridShifts) {
  auto g = line();
  auto q = soliton_field(g);
  const double y[] = {5 * g->spacing(0)};
  auto t = translate(q, y);
  // translate(u, y)(x) = u(x + y)
  for (std::size_t j = 0; j + 5 < q.size(); ++j) EXPECT_NEAR(std::abs(t[j] - q[j + 5]), 0.0, 1e-12);
}

TEST(Resample, UnitFactorIsIdentity) {
  auto g = line();
  std::mt19937_64 rng(5);
  auto u = smooth_random_field(g, 2, rng);
  for (double e : {0.5, 1.0, 3.0}) {
    auto r = resample_scaled(u, 1.0, e);
    for (int i = 0; i < 2; ++i) EXPECT_EQ(max_abs_diff(r[i], u[i]), 0.0);
  }
}

TEST(Resample, MassPreservingDilation) {
  auto g = line();
  FieldVec q({soliton_field(g)});
  for (double lam : {0.5, 0.8, 1.25, 2.0}) {
    auto r = resample_scaled(q, lam, 0.5);
    EXPECT_NEAR(norm_squared(r) / norm_squared(q), 1.0, 1e-8) << lam;
    // Pointwise against the analytic dilation, where the preimage lies inside the box.
    for (std::size_t j = 0; j < r[0].size(); j += 7) {
      const double x = g->coordinates(0)[j];
      if (std::abs(lam * x) >= 20.0) continue;
      EXPECT_NEAR(r[0][j].real(), std::sqrt(lam) * oracle::soliton(lam * x, 1.0), 1e-10);
    }
  }
}

TEST(Resample, PohozaevScalingExponent) {
  auto g = line();
  for (double p : {1.0, 3.0}) {
    ModelParams params(p, 1, Coupling::identity(1));
    // Localized complex datum; amplitude 2 keeps H away from zero.
    FieldVec u({sample(g, [](std::span<const double> x) {
      return 2.0 * std::exp(-x[0] * x[0] / 2.0) * std::polar(1.0, 0.3 * x[0]) * (1.0 + 0.5 * std::tanh(x[0]));
    })});
    const double h0 = report(u, params).pohozaev;
    for (double s : {0.5, 2.0}) {
      const double h = report(resample_scaled(u, s, 1.0 / p), params).pohozaev;
      EXPECT_NEAR(h / (std::pow(s, 2.0 - 1.0 + 2.0 / p) * h0), 1.0, 1e-6) << p << " " << s;
    }
  }
}

TEST(Resample, RefusesWhenTailLeavesTheBox) {
  auto g = line(256, 20.0);
  FieldVec q({soliton_field(g)});
  try {
    resample_scaled(q, 0.1, 0.5);
    FAIL() << "expected TailMassError";
  } catch (const TailMassError& e) {
    EXPECT_GT(e.tail_fraction(), 1e-6);
  }
}

TEST(Field, TailFractionOfLocalizedAndSpreadFields) {
  auto g = line();
  FieldVec q({soliton_field(g)});
  EXPECT_LT(tail_mass_fraction(q), 1e-12);
  FieldVec flat({sample(g, [](std::span<const double>) { return Complex(1.0); })});
  EXPECT_NEAR(tail_mass_fraction(flat), 0.1, 2e-3);
  EXPECT_EQ(tail_mass_fraction(FieldVec(g, 2)), 0.0);
}

TEST(Field, ComponentsMustShareGrid) {
  std::vector<ComponentField> c{ComponentField(line(64)), ComponentField(line(128))};
  EXPECT_THROW(FieldVec{std::move(c)}, GridMismatchError);
}
