#include "mnls/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "mnls/diagnostics.hpp"
#include "mnls/error.hpp"
#include "mnls/functionals.hpp"
#include "mnls/random_fields.hpp"
#include "mnls/spectral.hpp"

namespace mnls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void add_check(ExperimentOutcome& out, std::string name, double value, double limit, bool passed) {
  out.checks.push_back({std::move(name), value, limit, passed});
}

// value <= limit
void check_le(ExperimentOutcome& out, std::string name, double value, double limit) {
  add_check(out, std::move(name), value, limit, value <= limit);
}

void finish(ExperimentOutcome& out, bool inconclusive = false) {
  if (inconclusive) {
    out.verdict = Verdict::Inconclusive;
    return;
  }
  const bool ok = std::all_of(out.checks.begin(), out.checks.end(), [](const Check& c) { return c.passed; });
  out.verdict = ok ? Verdict::Pass : Verdict::Fail;
}

bool uniform_coupling(const Coupling& k) {
  const auto& e = k.entries();
  return std::all_of(e.begin(), e.end(), [&](double v) { return v == e.front(); });
}

// Common row sum of an all-positive coupling; throws when rows differ.
double common_row_sum(const Coupling& k) {
  for (double v : k.entries()) {
    if (!(v > 0.0)) throw ConfigError("this variant needs every k_ij > 0");
  }
  const double beta = k.row_sum(0);
  for (int i = 1; i < k.components(); ++i) {
    if (std::abs(k.row_sum(i) - beta) > 1e-12) {
      throw ConfigError("row sums of K differ beyond 1e-12; no common beta");
    }
  }
  return beta;
}

ModelParams scalar_params(const ModelParams& params, double k = 1.0) {
  return ModelParams(params.p, params.dim, Coupling::uniform(1, k), params.reg_eps);
}

FieldVec h1_unit_perturbation(const GridPtr& grid, int components, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FieldVec w = smooth_random_field(grid, components, rng);
  w *= 1.0 / h1_norm(w);
  return w;
}

FieldVec replicate(const ComponentField& q, const std::vector<Complex>& coefficients) {
  std::vector<ComponentField> comps;
  for (const auto& c : coefficients) comps.push_back(c * q);
  return FieldVec(std::move(comps));
}

double sup(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v)
    if (!std::isnan(x)) m = std::max(m, x);
  return m;
}

// Pass/fail of a stability run from its trace, shared by both stability drivers.
void judge_stability(ExperimentOutcome& out, const ExperimentSpec& spec, const EvolutionTrace& trace,
                     const std::string& name = "sup_distance") {
  const double limit = std::max(spec.distance_threshold * spec.epsilon, 1e-6);
  out.measured["initial_distance"] = trace.distance.front();
  check_le(out, name, sup(trace.distance), limit);
  add_check(out, "no_blowup", trace.blowup_detected ? 1.0 : 0.0, 0.0, !trace.blowup_detected);
  out.measured["t_final"] = trace.times.back();
}

std::vector<double> mass_drift(const EvolutionTrace& trace) {
  const auto& m0 = trace.component_mass.front();
  std::vector<double> drift(m0.size(), 0.0);
  for (const auto& row : trace.component_mass) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      drift[i] = std::max(drift[i], m0[i] > 0.0 ? std::abs(row[i] - m0[i]) / m0[i] : std::abs(row[i]));
    }
  }
  return drift;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Stability: return "stability";
    case ExperimentKind::PerComponentStability: return "percomponent-stability";
    case ExperimentKind::SupercriticalBlowup: return "supercritical-blowup";
    case ExperimentKind::CriticalBlowup: return "critical-blowup";
    case ExperimentKind::IdentitySuite: return "identities";
    case ExperimentKind::GNSuite: return "gn-check";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::Stability, ExperimentKind::PerComponentStability,
                 ExperimentKind::SupercriticalBlowup, ExperimentKind::CriticalBlowup,
                 ExperimentKind::IdentitySuite, ExperimentKind::GNSuite}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown experiment kind '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (!grid) throw ConfigError("experiment needs a grid");
  if (grid->dim() != params.dim) throw ConfigError("grid dimension differs from model dimension");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  const Regime r = params.regime();
  switch (kind) {
    case ExperimentKind::Stability:
    case ExperimentKind::PerComponentStability:
      if (r != Regime::Subcritical) throw ConfigError("stability experiments need p < 2/N");
      break;
    case ExperimentKind::SupercriticalBlowup:
      if (r != Regime::Supercritical) throw ConfigError("supercritical blow-up needs p > 2/N");
      if (!(lambda > 0.0)) throw ConfigError("dilation factor must be positive");
      break;
    case ExperimentKind::CriticalBlowup:
      if (r != Regime::Critical) throw ConfigError("critical blow-up needs p = 2/N");
      if (!(lambda > 0.0)) throw ConfigError("amplitude factor must be positive");
      break;
    case ExperimentKind::IdentitySuite:
    case ExperimentKind::GNSuite:
      if (random_fields < 0 || seeds < 0) throw ConfigError("counts must be nonnegative");
      break;
  }
  if (family == FamilyKind::Continuum) {
    if (params.components() != 2 || !uniform_coupling(params.coupling) ||
        !(params.coupling(0, 0) > 0.0) || params.p != 1.0) {
      throw ConfigError("the continuum family needs M = 2, a uniform positive K and p = 1");
    }
  }
  if (kind == ExperimentKind::PerComponentStability && variant == PerComponentVariant::Subsystem) {
    if (subset.empty() || static_cast<int>(subset.size()) >= params.components()) {
      throw ConfigError("subsystem variant needs a proper nonempty subset X");
    }
    for (int i : subset) {
      if (i < 0 || i >= params.components()) throw ConfigError("subset index out of range");
    }
  }
}

ExperimentSpec default_spec(ExperimentKind kind, GridPtr grid, ModelParams params) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.grid = std::move(grid);
  spec.params = std::move(params);
  switch (kind) {
    case ExperimentKind::Stability:
    case ExperimentKind::PerComponentStability:
      spec.stepper.t_end = 50.0;
      spec.stepper.record_stride = 100;
      break;
    case ExperimentKind::SupercriticalBlowup:
      spec.lambda = 1.1;
      spec.stepper.t_end = 10.0;
      spec.stepper.record_stride = 10;
      break;
    case ExperimentKind::CriticalBlowup:
      spec.lambda = 1.05;
      spec.stepper.t_end = 10.0;
      spec.stepper.record_stride = 10;
      // H tracks 2E, so its drift through the collapse is the accumulated energy error.
      spec.stepper.energy_jump_tolerance = 1e-7;
      break;
    default:
      break;
  }
  return spec;
}

const Check* ExperimentOutcome::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

GroundStateResult scalar_ground_state(const GridPtr& grid, const ModelParams& params,
                                      const FlowConfig& cfg) {
  FlowConfig c = cfg;
  if (c.init == Initializer::User) c.init = Initializer::Gaussian;
  c.initial.reset();
  return ground_state(grid, scalar_params(params), c);
}

ExperimentOutcome run_stability(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentOutcome out;
  out.kind = spec.kind;
  const auto gs = ground_state(spec.grid, spec.params, spec.flow);
  const FieldVec& q = gs.profile;
  out.reference = q;
  out.measured["ground_state_action"] = gs.report.action;

  DistanceMonitor monitor;
  if (spec.family == FamilyKind::Continuum) {
    const double k = spec.params.coupling(0, 0);
    const auto qs = ground_state(spec.grid, scalar_params(spec.params, k), FlowConfig{}).profile[0];
    FamilyGenerator family = [qs](double a) {
      return replicate(qs, {Complex(std::cos(a)), Complex(std::sin(a))});
    };
    monitor = [family](const FieldVec& v) {
      return distance_to_family(v, family, 0.0, 0.5 * std::numbers::pi).alignment.distance;
    };
  } else {
    monitor = [q](const FieldVec& v) { return orbital_distance(v, q).distance; };
  }

  FieldVec v0 = q;
  if (spec.epsilon > 0.0) v0 += Complex(spec.epsilon) * h1_unit_perturbation(spec.grid, q.components(), spec.seed);
  out.initial = v0;
  auto trace = evolve(v0, spec.params, spec.stepper, monitor);
  judge_stability(out, spec, trace);
  const auto drift = mass_drift(trace);
  out.measured["mass_drift"] = *std::max_element(drift.begin(), drift.end());
  const bool tail = trace.tail_violation;
  if (tail) out.notes.push_back("tail mass exceeded tolerance; box too small for this horizon");
  out.trace = std::move(trace);
  finish(out, tail);
  return out;
}

ExperimentOutcome run_percomponent_stability(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentOutcome out;
  out.kind = spec.kind;
  const int m = spec.params.components();
  const auto& p = spec.params;

  if (spec.variant == PerComponentVariant::Bc) {
    const double beta = common_row_sum(p.coupling);
    const auto qs = scalar_ground_state(spec.grid, p, spec.flow).profile[0];
    // (beta^{-1/(2p)} Q, ..., beta^{-1/(2p)} Q) solves the bound-state system when every row sums to beta.
    const double a = std::pow(beta, -0.5 / p.p);
    const FieldVec target = replicate(qs, std::vector<Complex>(m, Complex(a)));
    const double c = norm_squared(target[0]);
    out.measured["beta"] = beta;
    out.measured["component_mass_target"] = c;

    FlowConfig flow = spec.flow;
    const auto minimizer = minimize(spec.grid, ConstraintSpec::per_component_mass(std::vector<double>(m, c)), p, flow);
    double spread = 0.0;
    for (double w : minimizer.multipliers) spread = std::max(spread, std::abs(w - minimizer.multipliers[0]));
    out.measured["multiplier_spread"] = spread;
    const auto al = orbital_distance(minimizer.profile, target);
    const double l2 = std::sqrt(norm_squared(minimizer.profile - apply_alignment(target, al)));
    check_le(out, "minimizer_l2_error", l2, 1e-4);
    out.reference = minimizer.profile;

    FieldVec v0 = minimizer.profile;
    if (spec.epsilon > 0.0) v0 += Complex(spec.epsilon) * h1_unit_perturbation(spec.grid, m, spec.seed);
    out.initial = v0;
    const FieldVec ref = minimizer.profile;
    auto trace = evolve(v0, p, spec.stepper, [ref](const FieldVec& v) { return orbital_distance(v, ref).distance; });
    judge_stability(out, spec, trace);
    const bool tail = trace.tail_violation;
    out.trace = std::move(trace);
    finish(out, tail);
    return out;
  }

  // Subsystem variant: ground state on X, eps-small data outside.
  const ModelParams sub(p.p, p.dim, p.coupling.restrict_to(spec.subset), p.reg_eps);
  const auto qx = ground_state(spec.grid, sub, spec.flow).profile;
  std::vector<bool> in_x(m, false);
  for (int i : spec.subset) in_x[i] = true;
  const FieldVec noise = h1_unit_perturbation(spec.grid, m, spec.seed);
  std::vector<ComponentField> comps;
  int k = 0;
  for (int i = 0; i < m; ++i) {
    comps.push_back(in_x[i] ? qx[k++] : Complex(spec.epsilon) * noise[i]);
  }
  FieldVec v0(std::move(comps));
  out.initial = v0;
  out.reference = qx;

  auto restrict = [subset = spec.subset](const FieldVec& v) {
    std::vector<ComponentField> c;
    for (int i : subset) c.push_back(v[i]);
    return FieldVec(std::move(c));
  };
  auto trace = evolve(v0, p, spec.stepper,
                      [qx, restrict](const FieldVec& v) { return orbital_distance(restrict(v), qx).distance; });
  judge_stability(out, spec, trace, "sup_distance_in_x");

  double worst = 0.0;
  const auto& m0 = trace.component_mass.front();
  for (const auto& row : trace.component_mass) {
    for (int i = 0; i < m; ++i) {
      if (in_x[i]) continue;
      worst = std::max(worst, (row[i] - m0[i]) / std::max(m0[i], std::numeric_limits<double>::min()));
    }
  }
  check_le(out, "outside_mass_growth", worst, 1e-10);
  const bool tail = trace.tail_violation;
  out.trace = std::move(trace);
  finish(out, tail);
  return out;
}

ExperimentOutcome run_supercritical_blowup(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentOutcome out;
  out.kind = spec.kind;
  const auto& p = spec.params;
  const int m = p.components();

  FieldVec v0;
  FieldVec q;
  std::vector<Complex> coefficients;
  if (spec.r_variant) {
    const double beta = common_row_sum(p.coupling);
    const auto qs = scalar_ground_state(spec.grid, p, spec.flow).profile[0];
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double a = std::pow(beta, -0.5 / p.p);
    for (int i = 0; i < m; ++i) coefficients.push_back(std::polar(a, phase(rng)));
    q = replicate(qs, coefficients);
    const auto v = resample_scaled(FieldVec({qs}), spec.lambda, 0.5 * p.dim);
    v0 = replicate(v[0], coefficients);
  } else {
    q = ground_state(spec.grid, p, spec.flow).profile;
    v0 = resample_scaled(q, spec.lambda, 0.5 * p.dim);
  }
  out.reference = q;
  out.initial = v0;

  const auto rq = report(q, p);
  const auto r0 = report(v0, p);
  const double bound = r0.action - rq.action;
  out.measured["S(Q)"] = rq.action;
  out.measured["S(V0)"] = r0.action;
  out.measured["H(V0)"] = r0.pohozaev;
  add_check(out, "H(V0)<0", r0.pohozaev, 0.0, r0.pohozaev < 0.0);

  auto trace = evolve(v0, p, spec.stepper);
  const double hmax = sup(trace.pohozaev);
  check_le(out, "H(t)-(S(V0)-S(Q))", hmax - bound, 1e-6);

  const auto sd = second_differences(trace.times, trace.variance);
  const double sd_max = sd.empty() ? kNaN : sup(sd);
  out.measured["variance_second_difference_max"] = sd_max;
  add_check(out, "variance_concave", sd_max, 0.0, !sd.empty() && sd_max < 0.0);
  // The second difference averages 8H over its stencil, and H only decreases.
  check_le(out, "variance_second_difference-8maxH", sd.empty() ? kNaN : sd_max - 8.0 * hmax,
           1e-3 * (1.0 + 8.0 * std::abs(hmax)));

  const double tb = trace.blowup_time.value_or(kNaN);
  out.measured["blowup_time"] = tb;
  add_check(out, "blowup_detected", tb, spec.stepper.t_end,
            trace.blowup_detected && tb < spec.stepper.t_end);

  if (spec.r_variant) {
    // Components must stay a_i e^{i theta_i} times one scalar solution.
    const auto& v = trace.final_state;
    double dev = 0.0;
    for (int i = 1; i < m; ++i) {
      const Complex ratio = coefficients[i] / coefficients[0];
      dev = std::max(dev, std::sqrt(norm_squared(v[i] - ratio * v[0]) / norm_squared(v[i])));
    }
    check_le(out, "component_proportionality", dev, 1e-8);
  }

  const bool tail = trace.tail_violation && !trace.blowup_detected;
  if (tail) out.notes.push_back("tail violation before the blow-up proxy was raised");
  out.trace = std::move(trace);
  finish(out, tail);
  return out;
}

ExperimentOutcome run_critical_blowup(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentOutcome out;
  out.kind = spec.kind;
  const auto& p = spec.params;
  const auto gs = ground_state(spec.grid, p, spec.flow);
  const FieldVec v0 = Complex(spec.lambda) * gs.profile;
  out.reference = gs.profile;
  out.initial = v0;

  const auto r0 = report(v0, p);
  out.measured["H(V0)"] = r0.pohozaev;
  out.measured["E(V0)"] = r0.energy;
  add_check(out, "H(V0)<0", r0.pohozaev, 0.0, r0.pohozaev < 0.0);

  auto trace = evolve(v0, p, spec.stepper);
  double identity = 0.0, drift = 0.0;
  for (std::size_t r = 0; r < trace.size(); ++r) {
    identity = std::max(identity, std::abs(2.0 * trace.energy[r] - trace.pohozaev[r]));
    drift = std::max(drift, std::abs(trace.pohozaev[r] - trace.pohozaev.front()));
  }
  check_le(out, "|2E-H|", identity, 1e-10);
  check_le(out, "H_drift_relative", drift / std::abs(r0.pohozaev), 1e-3);
  const double tb = trace.blowup_time.value_or(kNaN);
  out.measured["blowup_time"] = tb;
  add_check(out, "blowup_detected", tb, spec.stepper.t_end,
            trace.blowup_detected && tb < spec.stepper.t_end);

  const bool tail = trace.tail_violation && !trace.blowup_detected;
  if (tail) out.notes.push_back("tail violation before the blow-up proxy was raised");
  out.trace = std::move(trace);
  finish(out, tail);
  return out;
}

ExperimentOutcome run_identity_suite(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentOutcome out;
  out.kind = spec.kind;
  const auto& p = spec.params;
  const int m = p.components();
  const auto gs = ground_state(spec.grid, p, spec.flow);
  const auto& rq = gs.report;
  out.reference = gs.profile;

  check_le(out, "|I-J|/I", std::abs(rq.total - rq.potential) / rq.total, 1e-6);
  check_le(out, "|H|/T", std::abs(rq.pohozaev) / rq.kinetic, 1e-6);
  double omega_err = 0.0;
  for (int i : gs.classification.support) omega_err = std::max(omega_err, std::abs(gs.multipliers[i] - 1.0));
  check_le(out, "multiplier_error", omega_err, 1e-6);
  check_le(out, "bs_residual", *std::max_element(gs.bs_residual.begin(), gs.bs_residual.end()), 1e-6);
  double ds = 0.0;
  for (double lam : {0.8, 1.0, 1.25}) ds = std::max(ds, action_derivative_mismatch(gs.profile, p, lam));
  check_le(out, "dS/dlambda_vs_H", ds, 1e-4);
  if (p.regime() == Regime::Supercritical) {
    check_le(out, "|lambda*(Q)-1|", std::abs(lambda_star(gs.profile, p) - 1.0), 1e-4);
  }

  // Random fields: Weinstein bound, supercritical inequality, critical identity.
  const double lambda_g = rq.potential;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> amp(0.5, 3.0);
  int weinstein_bad = 0, weinstein_tested = 0, ineq_bad = 0, ineq_tested = 0;
  double critical_worst = 0.0, ds_random = 0.0;
  for (int n = 0; n < spec.random_fields; ++n) {
    FieldVec w = smooth_random_field(spec.grid, m, rng);
    w *= amp(rng);
    const auto r = report(w, p);
    if (r.potential > 0.0) {
      ++weinstein_tested;
      const double rhs = std::pow(lambda_g, p.p / (p.p + 1.0)) * std::pow(r.potential, 1.0 / (p.p + 1.0));
      if (r.total < rhs * (1.0 - 1e-6)) ++weinstein_bad;
    }
    if (p.regime() == Regime::Supercritical && r.pohozaev < 0.0) {
      ++ineq_tested;
      if (r.pohozaev > r.action - rq.action + 1e-8) ++ineq_bad;
    }
    if (p.critical()) {
      critical_worst = std::max(critical_worst, std::abs(2.0 * r.energy - r.pohozaev) /
                                                    (std::abs(r.energy) + std::abs(r.pohozaev) + 1.0));
    }
    if (n < 10) ds_random = std::max(ds_random, action_derivative_mismatch(w, p, 1.0));
  }
  out.measured["lambda_G"] = lambda_g;
  out.measured["weinstein_tested"] = weinstein_tested;
  check_le(out, "weinstein_violations", weinstein_bad, 0.0);
  if (spec.random_fields > 0) check_le(out, "dS/dlambda_vs_H_random", ds_random, 1e-4);
  if (p.regime() == Regime::Supercritical) {
    out.measured["inequality_tested"] = ineq_tested;
    check_le(out, "supercritical_inequality_violations", ineq_bad, 0.0);
  }
  if (p.critical()) check_le(out, "critical_identity", critical_worst, 1e-12);

  if (spec.family == FamilyKind::Continuum && spec.seeds > 0) {
    double s_lo = std::numeric_limits<double>::infinity(), s_hi = -s_lo;
    double f_lo = s_lo, f_hi = s_hi, mu_lo = s_lo, mu_hi = s_hi;
    for (int s = 0; s < spec.seeds; ++s) {
      FlowConfig flow = spec.flow;
      flow.init = Initializer::Random;
      flow.seed = spec.seed + static_cast<std::uint64_t>(s);
      const auto g = ground_state(spec.grid, p, flow);
      const double frac = g.report.component_mass[0] / g.report.mass;
      s_lo = std::min(s_lo, g.report.action);
      s_hi = std::max(s_hi, g.report.action);
      f_lo = std::min(f_lo, frac);
      f_hi = std::max(f_hi, frac);
      mu_lo = std::min(mu_lo, g.report.mass);
      mu_hi = std::max(mu_hi, g.report.mass);
    }
    check_le(out, "continuum_action_spread", (s_hi - s_lo) / std::abs(rq.action), 1e-5);
    check_le(out, "continuum_mass_spread", (mu_hi - mu_lo) / mu_hi, 1e-4);
    add_check(out, "continuum_ratio_spread", f_hi - f_lo, 0.1, f_hi - f_lo > 0.1);
  }
  finish(out);
  return out;
}

ExperimentOutcome run_gn_suite(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentOutcome out;
  out.kind = spec.kind;
  const auto& p = spec.params;
  const auto gs = ground_state(spec.grid, p, spec.flow);
  const FieldVec& q = gs.profile;
  out.reference = q;
  const double cm = gn_quotient(gs.report, p);
  out.measured["C_M"] = cm;

  std::mt19937_64 rng(spec.seed);
  int bad = 0;
  double worst = 0.0;
  for (int n = 0; n < spec.random_fields; ++n) {
    const FieldVec w = smooth_random_field(spec.grid, p.components(), rng);
    const double ratio = gn_quotient(w, p) / cm;
    worst = std::max(worst, ratio);
    if (ratio > 1.0 + 1e-6) ++bad;
  }
  out.measured["max_quotient_ratio"] = worst;
  check_le(out, "gn_violations", bad, 0.0);

  double invariance = 0.0;
  for (double lam : {0.75, 1.5}) {
    invariance = std::max(invariance, std::abs(gn_quotient(resample_scaled(q, lam, 0.5 * p.dim), p) - cm) / cm);
  }
  check_le(out, "dilation_invariance", invariance, 1e-6);

  const auto back = gn_equality_rescale(resample_scaled(q, 1.5, 0.5 * p.dim), p, q);
  const auto al = orbital_distance(back.field, q);
  const double l2 = std::sqrt(norm_squared(back.field - apply_alignment(q, al)));
  out.measured["nu"] = back.nu;
  out.measured["zeta"] = back.zeta;
  check_le(out, "equality_rescale_l2", l2, 1e-4);
  finish(out);
  return out;
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::Stability: return run_stability(spec);
    case ExperimentKind::PerComponentStability: return run_percomponent_stability(spec);
    case ExperimentKind::SupercriticalBlowup: return run_supercritical_blowup(spec);
    case ExperimentKind::CriticalBlowup: return run_critical_blowup(spec);
    case ExperimentKind::IdentitySuite: return run_identity_suite(spec);
    case ExperimentKind::GNSuite: return run_gn_suite(spec);
  }
  throw ConfigError("unknown experiment kind");
}

void to_json(nlohmann::json& j, const Check& c) {
  j = nlohmann::json{{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"passed", c.passed}};
}

void to_json(nlohmann::json& j, const ExperimentOutcome& outcome) {
  j = nlohmann::json{{"kind", to_string(outcome.kind)},
                     {"verdict", to_string(outcome.verdict)},
                     {"checks", outcome.checks},
                     {"measured", outcome.measured},
                     {"notes", outcome.notes}};
  if (outcome.trace) j["trace"] = *outcome.trace;
}

}  // namespace mnls
