#include <gtest/gtest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "mnls/error.hpp"
#include "mnls/experiments.hpp"

using namespace mnls;

namespace {

GridPtr line() { return GridSpec::cube(1, 512, 40.0); }

ExperimentSpec quick(ExperimentKind kind, double p, Coupling k, double t_end) {
  auto spec = default_spec(kind, line(), ModelParams(p, 1, std::move(k)));
  spec.stepper.t_end = t_end;
  return spec;
}

double value(const ExperimentOutcome& o, const std::string& name) {
  const auto* c = o.find(name);
  EXPECT_NE(c, nullptr) << name;
  return c ? c->value : NAN;
}

}  // namespace

TEST(ExperimentSpec, RegimeMustMatchKind) {
  EXPECT_THROW(quick(ExperimentKind::Stability, 3.0, Coupling::identity(1), 1).validate(), ConfigError);
  EXPECT_THROW(quick(ExperimentKind::SupercriticalBlowup, 1.0, Coupling::identity(1), 1).validate(), ConfigError);
  EXPECT_THROW(quick(ExperimentKind::CriticalBlowup, 3.0, Coupling::identity(1), 1).validate(), ConfigError);
  auto s = quick(ExperimentKind::PerComponentStability, 1.0, Coupling::identity(2), 1);
  s.variant = PerComponentVariant::Subsystem;
  s.subset = {0, 1};
  EXPECT_THROW(s.validate(), ConfigError);
  s.subset = {2};
  EXPECT_THROW(s.validate(), ConfigError);
  auto c = quick(ExperimentKind::Stability, 1.0, Coupling::identity(2), 1);
  c.family = FamilyKind::Continuum;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ExperimentKindNames, RoundTrip) {
  for (auto k : {ExperimentKind::Stability, ExperimentKind::PerComponentStability, ExperimentKind::SupercriticalBlowup,
                 ExperimentKind::CriticalBlowup, ExperimentKind::IdentitySuite, ExperimentKind::GNSuite}) {
    EXPECT_EQ(parse_experiment_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_experiment_kind("bogus"), ConfigError);
}

TEST(Stability, UnperturbedOrbitStaysPut) {
  // The only drift left is the O(dt^2) offset between the splitting's stationary state and Q.
  auto sup = [](double dt) {
    auto spec = quick(ExperimentKind::Stability, 1.0, Coupling::identity(1), 2.0);
    spec.epsilon = 0.0;
    spec.stepper.dt = dt;
    const auto o = run_stability(spec);
    EXPECT_FALSE(o.trace->blowup_detected);
    return value(o, "sup_distance");
  };
  const double coarse = sup(1e-3), fine = sup(5e-4);
  EXPECT_NEAR(coarse / fine, 4.0, 0.4);
  EXPECT_LT(fine, 1e-6);
}

TEST(Stability, SmallPerturbationShortHorizon) {
  const auto o = run_stability(quick(ExperimentKind::Stability, 1.0, Coupling::identity(1), 5.0));
  EXPECT_EQ(o.verdict, Verdict::Pass);
  EXPECT_LT(value(o, "sup_distance"), 5 * 0.01);
  EXPECT_LT(o.measured.at("mass_drift"), 1e-10);
}

TEST(Stability, IsDeterministicGivenSeed) {
  auto spec = quick(ExperimentKind::Stability, 1.0, Coupling::identity(1), 1.0);
  spec.seed = 5;
  const auto a = run_stability(spec), b = run_stability(spec);
  EXPECT_EQ(value(a, "sup_distance"), value(b, "sup_distance"));
}

TEST(PerComponent, OutsideMassIsConserved) {
  auto spec = quick(ExperimentKind::PerComponentStability, 1.0, Coupling::uniform(2, 1.0), 2.0);
  spec.variant = PerComponentVariant::Subsystem;
  spec.subset = {0};
  const auto o = run_percomponent_stability(spec);
  EXPECT_EQ(o.verdict, Verdict::Pass);
  EXPECT_LE(value(o, "outside_mass_growth"), 1e-10);
  const auto& m = o.trace->component_mass;
  EXPECT_GT(m.front()[1], 0.0);
  EXPECT_NEAR(m.back()[1] / m.front()[1], 1.0, 1e-10);
}

TEST(PerComponent, UnequalRowSumsRejected) {
  auto spec = quick(ExperimentKind::PerComponentStability, 1.0, Coupling(2, {1.0, 1.0, 1.0, 2.0}), 1.0);
  EXPECT_THROW(run_percomponent_stability(spec), ConfigError);
}

TEST(SupercriticalBlowup, UnitDilationIsStationary) {
  auto spec = quick(ExperimentKind::SupercriticalBlowup, 3.0, Coupling::identity(1), 1.0);
  spec.lambda = 1.0;
  const auto o = run_supercritical_blowup(spec);
  EXPECT_NEAR(o.measured.at("H(V0)"), 0.0, 1e-6);
  EXPECT_FALSE(o.trace->blowup_detected);
  EXPECT_NE(o.verdict, Verdict::Pass);
}

TEST(CriticalBlowup, UnitAmplitudeIsStationary) {
  auto spec = quick(ExperimentKind::CriticalBlowup, 2.0, Coupling::identity(1), 1.0);
  spec.lambda = 1.0;
  const auto o = run_critical_blowup(spec);
  EXPECT_NEAR(o.measured.at("H(V0)"), 0.0, 1e-6);
  EXPECT_FALSE(o.trace->blowup_detected);
  EXPECT_LT(value(o, "|2E-H|"), 1e-10);
}

TEST(IdentitySuite, ScalarCubicPasses) {
  auto spec = quick(ExperimentKind::IdentitySuite, 1.0, Coupling::identity(1), 0.0);
  spec.random_fields = 30;
  const auto o = run_identity_suite(spec);
  EXPECT_EQ(o.verdict, Verdict::Pass);
  for (const auto& c : o.checks) EXPECT_TRUE(c.passed) << c.name << " = " << c.value;
}

TEST(GnSuite, ScalarCubicConstant) {
  auto spec = quick(ExperimentKind::GNSuite, 1.0, Coupling::identity(1), 0.0);
  spec.random_fields = 30;
  const auto o = run_gn_suite(spec);
  EXPECT_EQ(o.verdict, Verdict::Pass);
  EXPECT_NEAR(o.measured.at("C_M"), 1.0 / std::sqrt(3.0), 1e-5);
}

TEST(Outcome, JsonCarriesVerdictAndChecks) {
  auto spec = quick(ExperimentKind::GNSuite, 1.0, Coupling::identity(1), 0.0);
  spec.random_fields = 5;
  const nlohmann::json j = run_experiment(spec);
  EXPECT_EQ(j.at("verdict"), "pass");
  EXPECT_FALSE(j.at("checks").empty());
}
