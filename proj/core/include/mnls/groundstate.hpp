#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnls/field.hpp"
#include "mnls/functionals.hpp"
#include "mnls/params.hpp"

namespace mnls {

/// Constraint set of a minimization problem.
///
///  - TotalMass:        minimize E subject to M(U) = mu.
///  - PerComponentMass: minimize E subject to ||u_i||^2 = c_i for every i.
///  - Nehari:           minimize S subject to I(U) = J(U); the route for
///                      p >= 2/N, where E is unbounded below on mass spheres.
struct ConstraintSpec {
  enum class Kind { TotalMass, PerComponentMass, Nehari };
  Kind kind = Kind::TotalMass;
  std::vector<double> values;

  static ConstraintSpec total_mass(double mu) { return {Kind::TotalMass, {mu}}; }
  static ConstraintSpec per_component_mass(std::vector<double> c) {
    return {Kind::PerComponentMass, std::move(c)};
  }
  static ConstraintSpec nehari() { return {Kind::Nehari, {}}; }

  /// Throws ConfigError for nonpositive targets or a wrong number of values.
  void validate(int components) const;
};

std::string to_string(ConstraintSpec::Kind kind);

enum class Initializer { Gaussian, Sech, Random, User };

struct FlowConfig {
  double tau = 0.5;
  int max_iterations = 20000;
  /// Stop when the relative Euler-Lagrange residual drops below this.
  double tolerance = 1e-10;
  /// A component is "zero" when its mass is below this fraction of the total.
  double mass_floor = 1e-10;
  Initializer init = Initializer::Gaussian;
  std::uint64_t seed = 0;
  /// Used when init == User.
  std::optional<FieldVec> initial;
  /// Record every n-th iteration in the history (0 disables).
  int history_stride = 10;
};

struct StructureTags {
  std::vector<int> support;  // 0-based indices with mass above the floor
  bool proportional = false;  // nonzero moduli proportional to one common profile
  bool r_member = false;      // ... and that profile is the scalar ground state
  std::vector<double> coefficients;  // a_i with |u_i| ~ a_i |Q(. + y)|
  std::vector<double> deviations;    // relative L2 deviation per component
  std::vector<double> translation;   // common y
};

struct FlowHistoryRow {
  int iteration = 0;
  double energy = 0.0;  // E for mass constraints, S for Nehari
  double constraint_residual = 0.0;
  double bs_residual = 0.0;
};

struct GroundStateResult {
  FieldVec profile;
  std::vector<double> multipliers;  // omega_i (NaN for zero components)
  /// L2 norm of Delta u_i - u_i + N_i(U) per component.
  std::vector<double> bs_residual;
  FunctionalReport report;
  int iterations = 0;
  bool converged = false;
  /// False when the per-component multipliers differ, so no scaling yields a bound state.
  bool bound_state = false;
  StructureTags classification;
  std::vector<FlowHistoryRow> history;
};

/// Normalized gradient flow for the constrained problem.
///
/// Each step is semi-implicit: the linear part is inverted spectrally, the
/// nonlinear gradient and the Lagrange-multiplier term are explicit, then the
/// iterate is projected back onto the constraint. The step is halved whenever
/// the objective would increase.
GroundStateResult minimize(const GridPtr& grid, const ConstraintSpec& constraint,
                           const ModelParams& params, const FlowConfig& cfg = {});

/// Maps a solution of Delta u - omega u + N(u) = 0 to one of Delta u - u + N(u) = 0
/// via u -> omega^{-1/(2p)} u(x / sqrt(omega)). Unequal multipliers leave the
/// profile untouched and clear `bound_state`.
GroundStateResult rescale_to_bound_state(const GroundStateResult& minimizer,
                                         const ModelParams& params, double tolerance = 1e-6);

/// Support set and R-membership against the scalar ground state `scalar_q`.
StructureTags classify_structure(const FieldVec& u, const ComponentField& scalar_q,
                                 double mass_floor = 1e-10, double tolerance = 1e-4);

/// Total mass of a computed ground state (subcritical only).
double mu_of_groundstate(const GridPtr& grid, const ModelParams& params, const FlowConfig& cfg = {});

/// Least-action bound state: the Nehari minimizer over the configured start plus
/// single-component and random mixed starts (only the given field for init == User);
/// when subcritical it is then polished by the TotalMass flow at its own mass and rescaled.
GroundStateResult ground_state(const GridPtr& grid, const ModelParams& params,
                               const FlowConfig& cfg = {});

/// Per-component residual of the bound-state system with unit multiplier.
std::vector<double> bound_state_residual(const FieldVec& u, const ModelParams& params);

/// Initial field for the given initializer; exposed for tests and the CLI.
FieldVec initial_field(const GridPtr& grid, const ModelParams& params, const FlowConfig& cfg);

}  // namespace mnls
