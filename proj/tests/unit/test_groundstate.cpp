#include <gtest/gtest.h>

#include <cmath>

#include "mnls/diagnostics.hpp"
#include "mnls/error.hpp"
#include "mnls/groundstate.hpp"
#include "mnls/spectral.hpp"
#include "oracles.hpp"

using namespace mnls;

namespace {

GridPtr line() { return GridSpec::cube(1, 512, 40.0); }

ComponentField soliton(const GridPtr& g, double shift = 0.0) {
  return sample(g, [shift](std::span<const double> x) { return Complex(oracle::soliton(x[0] - shift, 1.0)); });
}

ModelParams cubic(int, Coupling k) { return ModelParams(1.0, 1, std::move(k)); }

// At p = 1, N = 1 the scalar bound state with multiplier w has mass 4 sqrt(w) and energy -(2/3) w^{3/2}.
double soliton_energy_at_mass(double c) { return -2.0 / 3.0 * std::pow(c / 4.0, 3.0); }

}  // namespace

TEST(Constraint, Validation) {
  EXPECT_THROW(ConstraintSpec::total_mass(-1.0).validate(1), ConfigError);
  EXPECT_THROW(ConstraintSpec::per_component_mass({1.0}).validate(2), ConfigError);
  EXPECT_THROW(ConstraintSpec::per_component_mass({1.0, 0.0}).validate(2), ConfigError);
  EXPECT_NO_THROW(ConstraintSpec::nehari().validate(3));
}

TEST(Minimize, ScalarTotalMassGivesSoliton) {
  auto g = line();
  const auto params = cubic(1, Coupling::identity(1));
  const auto r = minimize(g, ConstraintSpec::total_mass(4.0), params);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.report.mass, 4.0, 1e-12);
  EXPECT_NEAR(r.report.energy, -2.0 / 3.0, 1e-8);
  EXPECT_NEAR(r.multipliers[0], 1.0, 1e-6);
  EXPECT_LT(orbital_distance(r.profile, FieldVec({soliton(g)})).distance, 1e-5);
}

TEST(Minimize, ScalarEnergyFollowsMassScaling) {
  auto g = line();
  const auto params = cubic(1, Coupling::identity(1));
  for (double c : {2.0, 8.0}) {
    const auto r = minimize(g, ConstraintSpec::total_mass(c), params);
    EXPECT_NEAR(r.report.energy, soliton_energy_at_mass(c), 1e-7) << c;
    EXPECT_NEAR(r.multipliers[0], c * c / 16.0, 1e-6) << c;
  }
}

TEST(Minimize, HistoryIsMonotoneAndConstraintExact) {
  const auto params = cubic(2, Coupling(2, {1.0, 0.5, 0.5, 1.0}));
  FlowConfig cfg;
  cfg.history_stride = 1;
  const auto r = minimize(line(), ConstraintSpec::total_mass(5.0), params, cfg);
  ASSERT_GT(r.history.size(), 2u);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    const double e = r.history[i - 1].energy;
    EXPECT_LE(r.history[i].energy, e + 1e-12 * (1.0 + std::abs(e))) << i;
  }
  for (const auto& h : r.history) EXPECT_LT(h.constraint_residual, 1e-12);
}

TEST(Minimize, UniformCouplingContinuum) {
  // With k_ij = 1 the minimizers at mass 4 are (a Q, b Q), a^2 + b^2 = 1.
  auto g = line();
  const auto params = cubic(2, Coupling::uniform(2, 1.0));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    FlowConfig cfg;
    cfg.init = Initializer::Random;
    cfg.seed = seed;
    const auto r = minimize(g, ConstraintSpec::total_mass(4.0), params, cfg);
    EXPECT_NEAR(r.report.energy, -2.0 / 3.0, 1e-7) << seed;
    const auto tags = classify_structure(r.profile, soliton(g));
    EXPECT_TRUE(tags.r_member) << seed;
    EXPECT_NEAR(tags.coefficients[0] * tags.coefficients[0] + tags.coefficients[1] * tags.coefficients[1], 1.0,
                1e-4);
  }
}

TEST(Minimize, DecoupledPerComponentMasses) {
  auto g = line();
  const auto params = cubic(2, Coupling::identity(2));
  const auto r = minimize(g, ConstraintSpec::per_component_mass({4.0, 8.0}), params);
  EXPECT_NEAR(r.report.component_mass[0], 4.0, 1e-12);
  EXPECT_NEAR(r.report.component_mass[1], 8.0, 1e-12);
  EXPECT_NEAR(r.report.energy, soliton_energy_at_mass(4.0) + soliton_energy_at_mass(8.0), 1e-7);
  EXPECT_NEAR(r.multipliers[0], 1.0, 1e-6);
  EXPECT_NEAR(r.multipliers[1], 4.0, 1e-6);
  // Unequal multipliers: no common rescaling is a bound state.
  const auto b = rescale_to_bound_state(r, params);
  EXPECT_FALSE(b.bound_state);
}

TEST(Rescale, SmallMassMinimizerMapsToUnitMultiplier) {
  auto g = line();
  const auto params = cubic(1, Coupling::identity(1));
  const auto m = minimize(g, ConstraintSpec::total_mass(8.0), params);
  const auto b = rescale_to_bound_state(m, params);
  EXPECT_TRUE(b.bound_state);
  EXPECT_NEAR(b.report.mass, 4.0, 1e-6);
  EXPECT_LT(b.bs_residual[0], 1e-5);
}

TEST(Classify, Examples) {
  auto g = line();
  const auto q = soliton(g);
  const auto a = classify_structure(FieldVec({q, ComponentField(g)}), q);
  EXPECT_EQ(a.support, std::vector<int>{0});
  EXPECT_TRUE(a.r_member);

  const auto b = classify_structure(FieldVec({0.6 * q, 0.8 * q}), q);
  EXPECT_TRUE(b.r_member);
  EXPECT_NEAR(b.coefficients[0], 0.6, 1e-6);
  EXPECT_NEAR(b.coefficients[1], 0.8, 1e-6);

  // Separated bumps share no common translate of Q.
  const auto c = classify_structure(FieldVec({soliton(g, 5.0), soliton(g, -5.0)}), q);
  EXPECT_EQ(c.support.size(), 2u);
  EXPECT_FALSE(c.proportional);
  EXPECT_FALSE(c.r_member);

  // A wider profile is proportional but not built from Q.
  auto wide = sample(g, [](std::span<const double> x) { return Complex(1.0 / std::cosh(0.5 * x[0])); });
  const auto d = classify_structure(FieldVec({wide, 2.0 * wide}), q);
  EXPECT_TRUE(d.proportional);
  EXPECT_FALSE(d.r_member);
}

TEST(GroundState, ScalarMassIsFour) {
  EXPECT_NEAR(mu_of_groundstate(line(), cubic(1, Coupling::identity(1))), oracle::kMassP1, 1e-6);
}

TEST(GroundState, RouteGivesBoundStateForCoupledSystem) {
  auto g = line();
  const auto params = cubic(2, Coupling::uniform(2, 1.0));
  const auto r = ground_state(g, params);
  EXPECT_TRUE(r.bound_state);
  EXPECT_NEAR(r.report.mass, 4.0, 1e-6);
  EXPECT_NEAR(r.report.action, 4.0 / 3.0, 1e-7);
  for (double bs : r.bs_residual) EXPECT_LT(bs, 1e-6);
}

TEST(GroundState, SeedsAgreeOnAction) {
  auto g = line();
  const auto params = cubic(3, Coupling(3, {1.0, 0.3, 0.3, 0.3, 1.0, 0.3, 0.3, 0.3, 1.0}));
  double first = 0.0;
  for (std::uint64_t seed : {0u, 7u, 42u}) {
    FlowConfig cfg;
    cfg.init = Initializer::Random;
    cfg.seed = seed;
    const double s = ground_state(g, params, cfg).report.action;
    if (seed == 0) first = s;
    EXPECT_NEAR(s, first, 1e-7 * first) << seed;
  }
}

TEST(GroundState, SupercriticalNehariSatisfiesIdentities) {
  auto g = line();
  const ModelParams params(3.0, 1, Coupling::identity(1));
  const auto r = ground_state(g, params);
  const auto ref = oracle::soliton_integrals(3.0);
  EXPECT_NEAR(r.report.mass / ref.mass, 1.0, 1e-6);
  EXPECT_NEAR(r.report.pohozaev / r.report.kinetic, 0.0, 1e-6);
  EXPECT_LT(r.bs_residual[0], 1e-6);
}

TEST(GroundState, SymmetricStartDoesNotStopAtSaddle) {
  // For p > 1 and k_ij = 1, J(a phi, b phi) ~ (a^{p+1} + b^{p+1})^2 favors a single component:
  // the least-action state is (Q, 0), with the scalar action, not the symmetric pair.
  auto g = line();
  const ModelParams pair(3.0, 1, Coupling::uniform(2, 1.0));
  const ModelParams one(3.0, 1, Coupling::identity(1));
  const double s_scalar = ground_state(g, one).report.action;
  for (auto init : {Initializer::Gaussian, Initializer::Sech}) {
    FlowConfig cfg;
    cfg.init = init;
    const auto r = ground_state(g, pair, cfg);
    EXPECT_NEAR(r.report.action, s_scalar, 1e-8 * s_scalar);
    EXPECT_EQ(r.classification.support.size(), 1u);
  }
}
