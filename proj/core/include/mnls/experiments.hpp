#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mnls/dynamics.hpp"
#include "mnls/field.hpp"
#include "mnls/groundstate.hpp"
#include "mnls/params.hpp"

namespace mnls {

enum class ExperimentKind {
  Stability,
  PerComponentStability,
  SupercriticalBlowup,
  CriticalBlowup,
  IdentitySuite,
  GNSuite
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(ExperimentKind kind);
std::string to_string(Verdict verdict);
ExperimentKind parse_experiment_kind(const std::string& name);

/// Reference set for the stability distance.
///  - Orbit:     phases and translations of the computed ground state.
///  - Continuum: (cos a, sin a) Q_s over a in [0, pi/2] for M = 2, uniform K, p = 1.
enum class FamilyKind { Orbit, Continuum };

/// Per-component stability flavours.
///  - Bc:        perturbed (beta^{1/(2p)} Q, ..., beta^{1/(2p)} Q) for K > 0 with equal row sums beta.
///  - Subsystem: ground state of the X-subsystem padded with eps-small components outside X.
enum class PerComponentVariant { Bc, Subsystem };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::IdentitySuite;
  GridPtr grid;
  ModelParams params;
  double epsilon = 0.01;
  /// Dilation factor (supercritical) or amplitude factor (critical).
  double lambda = 1.1;
  StepperConfig stepper;
  FlowConfig flow;
  /// Stability passes when sup distance <= threshold * epsilon (floor 1e-6).
  double distance_threshold = 5.0;
  std::uint64_t seed = 0;
  FamilyKind family = FamilyKind::Orbit;
  PerComponentVariant variant = PerComponentVariant::Bc;
  /// X for the Subsystem variant (0-based).
  std::vector<int> subset;
  /// Blow-up datum a_i e^{i theta_i} P(Q_s, lambda) instead of P(Q, lambda).
  bool r_variant = false;
  int random_fields = 1000;
  /// Independent initializer seeds for the continuum check of the identity suite.
  int seeds = 10;

  /// Throws ConfigError when the regime or the parameters do not fit the kind.
  void validate() const;
};

/// Stepper settings used by the experiment drivers unless overridden.
ExperimentSpec default_spec(ExperimentKind kind, GridPtr grid, ModelParams params);

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
};

struct ExperimentOutcome {
  ExperimentKind kind = ExperimentKind::IdentitySuite;
  Verdict verdict = Verdict::Fail;
  std::vector<Check> checks;
  std::map<std::string, double> measured;
  std::vector<std::string> notes;
  std::optional<EvolutionTrace> trace;
  std::optional<FieldVec> reference;
  std::optional<FieldVec> initial;

  const Check* find(const std::string& name) const;
};

ExperimentOutcome run_stability(const ExperimentSpec& spec);
ExperimentOutcome run_percomponent_stability(const ExperimentSpec& spec);
ExperimentOutcome run_supercritical_blowup(const ExperimentSpec& spec);
ExperimentOutcome run_critical_blowup(const ExperimentSpec& spec);
ExperimentOutcome run_identity_suite(const ExperimentSpec& spec);
ExperimentOutcome run_gn_suite(const ExperimentSpec& spec);

/// Dispatches on spec.kind.
ExperimentOutcome run_experiment(const ExperimentSpec& spec);

/// Scalar ground state (M = 1, k = 1) with the power and dimension of `params`.
GroundStateResult scalar_ground_state(const GridPtr& grid, const ModelParams& params,
                                      const FlowConfig& cfg = {});

void to_json(nlohmann::json& j, const Check& c);
void to_json(nlohmann::json& j, const ExperimentOutcome& outcome);

}  // namespace mnls
