#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mnls/dynamics.hpp"
#include "mnls/error.hpp"
#include "mnls/functionals.hpp"
#include "mnls/random_fields.hpp"
#include "mnls/spectral.hpp"
#include "oracles.hpp"

using namespace mnls;

namespace {

GridPtr line(int n = 512, double L = 40.0) { return GridSpec::cube(1, n, L); }

ModelParams cubic(Coupling k) { return ModelParams(1.0, 1, std::move(k)); }

FieldVec soliton(const GridPtr& g) {
  return FieldVec({sample(g, [](std::span<const double> x) { return Complex(oracle::soliton(x[0], 1.0)); })});
}

FieldVec run(FieldVec v, const ModelParams& params, double dt, int steps) {
  for (int s = 0; s < steps; ++s) v = strang_step(v, params, dt);
  return v;
}

double l2(const FieldVec& a, const FieldVec& b) { return std::sqrt(norm_squared(a - b)); }

}  // namespace

TEST(PhaseStep, ConstantFieldRotatesByCoupledRate) {
  auto g = line(16, 4.0);
  ModelParams params(1.0, 1, Coupling(2, {1.0, 0.5, 0.5, 2.0}));
  const Complex a(0.6, 0.2), b(-0.3, 0.9);
  FieldVec v({sample(g, [a](std::span<const double>) { return a; }),
              sample(g, [b](std::span<const double>) { return b; })});
  const double dt = 0.3;
  const auto w = nonlinear_phase_step(v, params, dt);
  const double ra = 1.0 * std::norm(a) + 0.5 * std::norm(b);
  const double rb = 0.5 * std::norm(a) + 2.0 * std::norm(b);
  for (std::size_t j = 0; j < w[0].size(); ++j) {
    EXPECT_NEAR(std::abs(w[0][j] - a * std::polar(1.0, dt * ra)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(w[1][j] - b * std::polar(1.0, dt * rb)), 0.0, 1e-15);
  }
}

TEST(PhaseStep, PreservesModulus) {
  std::mt19937_64 rng(31);
  ModelParams params(2.0, 1, Coupling::uniform(2, -1.5));
  const auto v = smooth_random_field(line(), 2, rng);
  const auto w = nonlinear_phase_step(v, params, 0.7);
  for (int i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < v[i].size(); ++j) EXPECT_NEAR(std::abs(w[i][j]), std::abs(v[i][j]), 1e-14);
}

TEST(KineticStep, PlaneWaveIsExact) {
  auto g = line(64, 2.0 * std::numbers::pi);
  const double k = 3.0, t = 0.8;
  FieldVec v({sample(g, [k](std::span<const double> x) { return std::polar(1.0, k * x[0]); })});
  const auto w = kinetic_step(v, t);
  for (std::size_t j = 0; j < v[0].size(); ++j) {
    EXPECT_NEAR(std::abs(w[0][j] - v[0][j] * std::polar(1.0, -k * k * t)), 0.0, 1e-13);
  }
}

TEST(Strang, FreeGaussianMatchesClosedForm) {
  auto g = line(1024, 80.0);
  const ModelParams free(1.0, 1, Coupling(1, {0.0}));
  FieldVec v({sample(g, [](std::span<const double> x) { return Complex(std::exp(-0.5 * x[0] * x[0])); })});
  const double t = 1.5;
  const auto w = run(v, free, 0.1, 15);
  const Complex s = 1.0 + Complex(0.0, 2.0 * t);
  double err = 0.0;
  for (std::size_t j = 0; j < v[0].size(); ++j) {
    const double x = g->coordinates(0)[j];
    err = std::max(err, std::abs(w[0][j] - std::exp(-x * x / (2.0 * s)) / std::sqrt(s)));
  }
  EXPECT_LT(err, 1e-12);
}

TEST(Strang, SolitonAdvancesPhase) {
  auto g = line();
  const auto q = soliton(g);
  const int steps = 1000;
  const auto v = run(q, cubic(Coupling::identity(1)), 1e-3, steps);
  FieldVec expected = q;
  expected *= std::polar(1.0, 1.0);
  EXPECT_LT(l2(v, expected), 1e-5);
}

TEST(Strang, SecondOrderConvergence) {
  std::mt19937_64 rng(32);
  auto g = line();
  const auto params = cubic(Coupling(2, {1.0, 0.5, 0.5, 1.0}));
  const auto v0 = smooth_random_field(g, 2, rng);
  const double t = 0.5;
  const auto ref = run(v0, params, t / 1600, 1600);
  const double e1 = l2(run(v0, params, t / 50, 50), ref);
  const double e2 = l2(run(v0, params, t / 100, 100), ref);
  EXPECT_NEAR(e1 / e2, 4.0, 0.8);
}

TEST(Strang, GaugeCovariance) {
  std::mt19937_64 rng(33);
  const auto params = cubic(Coupling(2, {1.0, 2.0, 2.0, -1.0}));
  const auto v = smooth_random_field(line(), 2, rng);
  FieldVec rotated = v;
  rotated[0] *= std::polar(1.0, 0.9);
  rotated[1] *= std::polar(1.0, -0.4);
  auto a = strang_step(rotated, params, 0.01);
  auto b = strang_step(v, params, 0.01);
  b[0] *= std::polar(1.0, 0.9);
  b[1] *= std::polar(1.0, -0.4);
  EXPECT_LT(l2(a, b), 1e-13);
}

TEST(Strang, TimeReversalUnderConjugation) {
  std::mt19937_64 rng(34);
  const auto params = cubic(Coupling(2, {1.0, 0.3, 0.3, 1.0}));
  const auto v = smooth_random_field(line(), 2, rng);
  auto conj = [](FieldVec u) {
    for (auto& c : u)
      for (auto& z : c.values()) z = std::conj(z);
    return u;
  };
  const auto back = conj(run(conj(run(v, params, 0.01, 20)), params, 0.01, 20));
  EXPECT_LT(l2(back, v), 1e-12);
}

TEST(Evolve, SolitonConservesInvariants) {
  StepperConfig cfg;
  cfg.t_end = 2.0;
  const auto tr = evolve(soliton(line()), cubic(Coupling::identity(1)), cfg);
  ASSERT_GT(tr.size(), 2u);
  EXPECT_FALSE(tr.blowup_detected);
  EXPECT_FALSE(tr.tail_violation);
  EXPECT_NEAR(tr.times.back(), 2.0, 1e-12);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    EXPECT_NEAR(tr.component_mass[k][0], 4.0, 1e-10);
    EXPECT_NEAR(tr.energy[k], -2.0 / 3.0, 1e-8);
  }
}

TEST(Evolve, ZeroDatumStaysZero) {
  StepperConfig cfg;
  cfg.t_end = 0.1;
  const auto tr = evolve(FieldVec(line(), 2), cubic(Coupling::uniform(2, 1.0)), cfg);
  EXPECT_EQ(norm_squared(tr.final_state), 0.0);
  EXPECT_FALSE(tr.blowup_detected);
}

TEST(Evolve, RejectsBadConfig) {
  StepperConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(evolve(soliton(line()), cubic(Coupling::identity(1)), cfg), ConfigError);
  EXPECT_THROW(evolve(soliton(line()), cubic(Coupling::identity(2)), StepperConfig{}), ConfigError);
}

TEST(Evolve, TraceCsvHasOneRowPerRecord) {
  StepperConfig cfg;
  cfg.t_end = 0.05;
  const auto tr = evolve(soliton(line()), cubic(Coupling::identity(1)), cfg);
  std::ostringstream out;
  write_trace_csv(out, tr);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("t,dt,", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), tr.size() + 1);
}
