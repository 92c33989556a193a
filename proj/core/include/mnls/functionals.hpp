#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mnls/field.hpp"
#include "mnls/params.hpp"

namespace mnls {

struct FunctionalReport {
  double mass = 0.0;       // M(U) = sum ||u_i||^2
  double kinetic = 0.0;    // T(U) = sum ||grad u_i||^2
  double potential = 0.0;  // J(U) = sum_ij k_ij || u_i u_j ||_{p+1}^{p+1}
  double total = 0.0;      // I = M + T
  double energy = 0.0;     // E = T/2 - J/(2p+2)
  double pohozaev = 0.0;   // H = T - Np J/(2p+2)
  double action = 0.0;     // S = I/2 - J/(2p+2)
  std::vector<double> component_mass;
  std::vector<double> component_kinetic;
  std::vector<double> component_potential;  // J_i = sum_j k_ij int |u_i|^{p+1} |u_j|^{p+1}
};

/// Evaluates every functional by grid quadrature (T spectrally).
FunctionalReport report(const FieldVec& u, const ModelParams& params);

/// Builds the scalar functionals from component splits; exposed for reuse by steppers.
FunctionalReport assemble_report(std::vector<double> masses, std::vector<double> kinetics,
                                 std::vector<double> potentials, const ModelParams& params);

void to_json(nlohmann::json& j, const FunctionalReport& r);
std::string csv_header(const FunctionalReport& r, const std::string& prefix = "");
std::string csv_row(const FunctionalReport& r);

/// N_i(U) = sum_j k_ij |u_j|^{p+1} |u_i|^{p-1} u_i, the nonlinear term of the system.
FieldVec nonlinearity(const FieldVec& u, const ModelParams& params);

/// Real phase rate sum_j k_ij |u_j|^{p+1} |u_i|^{p-1} per node and component.
std::vector<std::vector<double>> phase_rates(const FieldVec& u, const ModelParams& params);

/// |2E(U) - H(U)|; only meaningful at the critical power. Throws ConfigError otherwise.
double critical_identity_residual(const FieldVec& u, const ModelParams& params);

struct ActionSample {
  double lambda = 0.0;
  double action = 0.0;    // S(P(U, lambda))
  double pohozaev = 0.0;  // H(P(U, lambda))
};

/// S and H along the mass-preserving dilation P(U, lambda) = lambda^{N/2} U(lambda x).
std::vector<ActionSample> action_profile(const FieldVec& u, const ModelParams& params,
                                         const std::vector<double>& lambdas);

/// Relative mismatch between lambda * dS/dlambda (centered difference, step
/// `dlambda`) and H(P(U, lambda)). The two agree for any U.
double action_derivative_mismatch(const FieldVec& u, const ModelParams& params, double lambda,
                                  double dlambda = 1e-3);

/// S(P(W, lambda)) from the exact scaling laws of M, T and J.
double dilated_action(const FunctionalReport& r, const ModelParams& params, double lambda);

/// argmax over lambda of S(P(W, lambda)); requires p > 2/N and J(W) > 0.
double lambda_star(const FieldVec& w, const ModelParams& params);
double lambda_star(const FunctionalReport& r, const ModelParams& params);

/// J / (M^{p+1-Np/2} T^{Np/2}); throws when M or T vanish.
double gn_quotient(const FieldVec& w, const ModelParams& params);
double gn_quotient(const FunctionalReport& r, const ModelParams& params);

struct GnRescale {
  double nu = 1.0;
  double zeta = 1.0;
  FieldVec field;  // nu * W(zeta x)
};

/// Rescaling that maps an optimizer of the Gagliardo-Nirenberg quotient onto
/// the reference ground state: matches M and J of `reference`.
GnRescale gn_equality_rescale(const FieldVec& w, const ModelParams& params,
                              const FieldVec& reference);

struct P1Witness {
  enum class Kind { DisjointSupport, SharedProfile, None };
  Kind kind = Kind::None;
  std::vector<double> coefficients;  // nonnegative a, max entry 1
  double value = 0.0;                // a^T K a (or k_ii for a diagonal witness)
  int diagonal_index = -1;

  bool found() const { return kind != Kind::None; }
};

/// Searches for a configuration with positive coupled potential energy.
P1Witness p1_witness(const Coupling& coupling);

/// Field realizing a witness: u_i = a_i^{1/(p+1)} phi with a Gaussian phi.
FieldVec witness_field(const P1Witness& witness, const GridPtr& grid, const ModelParams& params);

/// omega_i = (J_i - T_i) / M_i, nullopt for components whose mass is zero.
std::vector<std::optional<double>> multiplier_estimate(const FieldVec& u,
                                                       const ModelParams& params);
std::vector<std::optional<double>> multiplier_estimate(const FunctionalReport& r);

}  // namespace mnls
