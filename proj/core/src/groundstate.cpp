#include "mnls/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mnls/diagnostics.hpp"
#include "mnls/error.hpp"
#include "mnls/spectral.hpp"

namespace mnls {

namespace {

using Kind = ConstraintSpec::Kind;

// Everything one flow iteration needs about the current iterate.
struct Evaluation {
  std::vector<std::vector<Complex>> spectra;
  std::vector<std::vector<Complex>> laplacians;
  FieldVec nonlinear;
  FunctionalReport report;
};

Evaluation evaluate(const FieldVec& u, const ModelParams& params) {
  const auto& grid = *u.grid();
  const int m = u.components();
  const auto k2 = grid.k_squared();
  const double scale = grid.cell_volume() / static_cast<double>(grid.size());
  Evaluation ev;
  ev.spectra.resize(m);
  ev.laplacians.resize(m);
  std::vector<double> masses(m), kinetics(m), potentials(m);
  for (int i = 0; i < m; ++i) {
    ev.spectra[i].assign(u[i].values().begin(), u[i].values().end());
    fft_forward_inplace(grid, ev.spectra[i]);
    double t = 0.0;
    auto& lap = ev.laplacians[i];
    lap.resize(grid.size());
    for (std::size_t k = 0; k < lap.size(); ++k) {
      t += k2[k] * std::norm(ev.spectra[i][k]);
      lap[k] = -k2[k] * ev.spectra[i][k];
    }
    fft_inverse_inplace(grid, lap);
    kinetics[i] = t * scale;
    masses[i] = norm_squared(u[i]);
  }
  ev.nonlinear = nonlinearity(u, params);
  for (int i = 0; i < m; ++i) potentials[i] = std::real(inner(u[i], ev.nonlinear[i]));
  ev.report = assemble_report(std::move(masses), std::move(kinetics), std::move(potentials), params);
  return ev;
}

double objective(const FunctionalReport& r, Kind kind) {
  return kind == Kind::Nehari ? r.action : r.energy;
}

std::vector<double> multipliers_for(const FunctionalReport& r, Kind kind) {
  const int m = static_cast<int>(r.component_mass.size());
  std::vector<double> omega(m, 0.0);
  if (kind == Kind::Nehari) return std::vector<double>(m, 1.0);
  if (kind == Kind::TotalMass) {
    const double w = (r.potential - r.kinetic) / r.mass;
    return std::vector<double>(m, w);
  }
  for (int i = 0; i < m; ++i) {
    omega[i] = (r.component_potential[i] - r.component_kinetic[i]) / r.component_mass[i];
  }
  return omega;
}

// Relative L2 norm of Delta u_i + N_i - omega_i u_i.
double flow_residual(const FieldVec& u, const Evaluation& ev, const std::vector<double>& omega) {
  double acc = 0.0;
  for (int i = 0; i < u.components(); ++i) {
    const auto v = u[i].values();
    const auto nl = ev.nonlinear[i].values();
    for (std::size_t k = 0; k < v.size(); ++k) {
      acc += std::norm(ev.laplacians[i][k] + nl[k] - omega[i] * v[k]);
    }
  }
  acc *= u.grid()->cell_volume();
  return std::sqrt(acc / std::max(ev.report.mass, std::numeric_limits<double>::min()));
}

FieldVec project(FieldVec u, const ConstraintSpec& c, const ModelParams& params) {
  switch (c.kind) {
    case Kind::TotalMass: {
      const double m = norm_squared(u);
      if (!(m > 0.0)) throw ConvergenceError("iterate collapsed to the zero field");
      u *= std::sqrt(c.values[0] / m);
      break;
    }
    case Kind::PerComponentMass: {
      for (int i = 0; i < u.components(); ++i) {
        const double m = norm_squared(u[i]);
        if (!(m > 0.0)) {
          throw ConvergenceError("component " + std::to_string(i + 1) + " collapsed to zero");
        }
        u[i] *= std::sqrt(c.values[i] / m);
      }
      break;
    }
    case Kind::Nehari: {
      const auto r = report(u, params);
      if (!(r.potential > 0.0)) {
        throw ConvergenceError("Nehari projection needs J > 0; iterate collapsed");
      }
      u *= std::pow(r.total / r.potential, 1.0 / (2.0 * params.p));
      break;
    }
  }
  return u;
}

double constraint_residual(const FunctionalReport& r, const ConstraintSpec& c) {
  switch (c.kind) {
    case Kind::TotalMass: return std::abs(r.mass - c.values[0]) / c.values[0];
    case Kind::PerComponentMass: {
      double worst = 0.0;
      for (std::size_t i = 0; i < c.values.size(); ++i) {
        worst = std::max(worst, std::abs(r.component_mass[i] - c.values[i]) / c.values[i]);
      }
      return worst;
    }
    case Kind::Nehari: return std::abs(r.total - r.potential) / r.total;
  }
  return 0.0;
}

double max_amplitude(const FieldVec& u) {
  double a = 0.0;
  for (const auto& c : u)
    for (const auto& v : c.values()) a = std::max(a, std::abs(v));
  return a;
}

std::vector<int> support_of(const FunctionalReport& r, double floor) {
  std::vector<int> s;
  for (std::size_t i = 0; i < r.component_mass.size(); ++i) {
    if (r.component_mass[i] > floor * r.mass) s.push_back(static_cast<int>(i));
  }
  return s;
}

}  // namespace

void ConstraintSpec::validate(int components) const {
  switch (kind) {
    case Kind::TotalMass:
      if (values.size() != 1) throw ConfigError("total-mass constraint takes one value");
      break;
    case Kind::PerComponentMass:
      if (static_cast<int>(values.size()) != components) {
        throw ConfigError("per-component mass constraint needs one value per component");
      }
      break;
    case Kind::Nehari:
      if (!values.empty()) throw ConfigError("Nehari constraint takes no values");
      break;
  }
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("constraint values must be positive");
  }
}

std::string to_string(ConstraintSpec::Kind kind) {
  switch (kind) {
    case Kind::TotalMass: return "total-mass";
    case Kind::PerComponentMass: return "per-component-mass";
    case Kind::Nehari: return "nehari";
  }
  return "unknown";
}

std::vector<double> bound_state_residual(const FieldVec& u, const ModelParams& params) {
  const auto ev = evaluate(u, params);
  std::vector<double> out(u.components());
  for (int i = 0; i < u.components(); ++i) {
    const auto v = u[i].values();
    const auto nl = ev.nonlinear[i].values();
    double acc = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) acc += std::norm(ev.laplacians[i][k] - v[k] + nl[k]);
    out[i] = std::sqrt(acc * u.grid()->cell_volume());
  }
  return out;
}

FieldVec initial_field(const GridPtr& grid, const ModelParams& params, const FlowConfig& cfg) {
  const int m = params.components();
  if (cfg.init == Initializer::User) {
    if (!cfg.initial) throw ConfigError("user initializer selected but no initial field given");
    if (!same_grid(cfg.initial->grid(), grid)) throw GridMismatchError();
    if (cfg.initial->components() != m) throw ConfigError("initial field has wrong component count");
    return *cfg.initial;
  }

  // Scalar ground-state amplitude scale (p + 1)^{1/(2p)}.
  const double peak = std::pow(params.p + 1.0, 0.5 / params.p);
  std::vector<Complex> weights(m, Complex(1.0, 0.0));
  std::vector<double> widths(m, 1.0);
  if (cfg.init == Initializer::Random) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> amp(0.1, 1.0), phase(0.0, 2.0 * std::numbers::pi),
        width(0.7, 1.4);
    for (int i = 0; i < m; ++i) {
      weights[i] = std::polar(amp(rng), phase(rng));
      widths[i] = width(rng);
    }
  }

  auto build = [&](const std::vector<Complex>& w) {
    std::vector<ComponentField> comps;
    for (int i = 0; i < m; ++i) {
      const double s = widths[i];
      comps.push_back(sample(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        const double shape = cfg.init == Initializer::Sech ? 1.0 / std::cosh(std::sqrt(r2) / s)
                                                           : std::exp(-0.5 * r2 / (s * s));
        return peak * w[i] * shape;
      }));
    }
    return FieldVec(std::move(comps));
  };

  FieldVec u = build(weights);
  if (report(u, params).potential > 0.0) return u;

  // Repulsive couplings: fall back to the (P1) witness for signs and supports.
  const auto witness = p1_witness(params.coupling);
  if (!witness.found()) throw ConfigError("no (P1) witness found for this coupling");
  for (int i = 0; i < m; ++i) {
    const double a = std::pow(witness.coefficients[i], 1.0 / (params.p + 1.0));
    weights[i] = a * (cfg.init == Initializer::Random ? std::abs(weights[i]) : 1.0);
  }
  return build(weights);
}

GroundStateResult minimize(const GridPtr& grid, const ConstraintSpec& constraint,
                           const ModelParams& params, const FlowConfig& cfg) {
  constraint.validate(params.components());
  if (grid->dim() != params.dim) throw ConfigError("grid dimension differs from model dimension");
  if (constraint.kind != Kind::Nehari && params.regime() != Regime::Subcritical) {
    throw ConfigError("mass-constrained energy minimization needs p < 2/N (" +
                      to_string(params.regime()) + " regime); use the Nehari constraint");
  }
  if (!(cfg.tau > 0.0) || !(cfg.tolerance > 0.0)) throw ConfigError("tau and tolerance must be positive");

  const auto k2 = grid->k_squared();
  const int m = params.components();
  double max_row = 0.0;
  for (int i = 0; i < m; ++i) max_row = std::max(max_row, params.coupling.row_abs_sum(i));

  FieldVec u = project(initial_field(grid, params, cfg), constraint, params);
  Evaluation ev = evaluate(u, params);
  const double kinetic0 = ev.report.kinetic;
  double tau = cfg.tau;

  GroundStateResult result;
  int iter = 0;
  double residual = std::numeric_limits<double>::infinity();
  for (;; ++iter) {
    const auto omega = multipliers_for(ev.report, constraint.kind);
    residual = flow_residual(u, ev, omega);
    if (cfg.history_stride > 0 && iter % cfg.history_stride == 0) {
      result.history.push_back({iter, objective(ev.report, constraint.kind),
                                constraint_residual(ev.report, constraint), residual});
    }
    if (residual < cfg.tolerance) break;
    if (iter >= cfg.max_iterations) {
      throw ConvergenceError("gradient flow did not converge in " + std::to_string(iter) +
                             " iterations (residual " + std::to_string(residual) + ")");
    }

    const double stab = max_row * std::pow(max_amplitude(u), 2.0 * params.p);
    const double linear_shift = constraint.kind == Kind::Nehari ? 1.0 : 0.0;
    const double current = objective(ev.report, constraint.kind);
    const double slack = 1e-13 * (std::abs(current) + ev.report.kinetic + ev.report.mass);

    for (;;) {
      std::vector<ComponentField> next;
      next.reserve(m);
      for (int i = 0; i < m; ++i) {
        const double shift = constraint.kind == Kind::Nehari ? 0.0 : omega[i];
        std::vector<Complex> rhs(grid->size());
        const auto v = u[i].values();
        const auto nl = ev.nonlinear[i].values();
        for (std::size_t k = 0; k < rhs.size(); ++k) {
          rhs[k] = v[k] + tau * (nl[k] - shift * v[k] + stab * v[k]);
        }
        fft_forward_inplace(*grid, rhs);
        for (std::size_t k = 0; k < rhs.size(); ++k) {
          rhs[k] /= 1.0 + tau * (k2[k] + linear_shift + stab);
        }
        fft_inverse_inplace(*grid, rhs);
        next.emplace_back(grid, std::move(rhs));
      }
      FieldVec trial = project(FieldVec(std::move(next)), constraint, params);
      Evaluation trial_ev = evaluate(trial, params);
      if (!std::isfinite(trial_ev.report.kinetic) ||
          trial_ev.report.kinetic > 1e8 * (kinetic0 + 1.0)) {
        throw ConvergenceError("objective diverging; kinetic energy exploded");
      }
      if (objective(trial_ev.report, constraint.kind) <= current + slack) {
        u = std::move(trial);
        ev = std::move(trial_ev);
        tau = std::min(cfg.tau, tau * 1.25);
        break;
      }
      tau *= 0.5;
      if (tau < 1e-12 * cfg.tau) {
        throw ConvergenceError("step size underflow while enforcing descent");
      }
    }
  }

  result.profile = u;
  result.report = ev.report;
  result.iterations = iter;
  result.converged = true;
  const auto omega = multiplier_estimate(ev.report);
  result.multipliers.resize(m);
  for (int i = 0; i < m; ++i) {
    result.multipliers[i] = omega[i] ? *omega[i] : std::numeric_limits<double>::quiet_NaN();
  }
  result.bs_residual = bound_state_residual(u, params);
  result.classification.support = support_of(ev.report, cfg.mass_floor);
  bool unit = true;
  for (int i : result.classification.support) {
    unit = unit && std::abs(result.multipliers[i] - 1.0) < 1e-6;
  }
  result.bound_state = unit;
  return result;
}

GroundStateResult rescale_to_bound_state(const GroundStateResult& minimizer,
                                         const ModelParams& params, double tolerance) {
  const auto& support = minimizer.classification.support;
  if (support.empty()) throw ConfigError("cannot rescale the zero field");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i : support) {
    lo = std::min(lo, minimizer.multipliers[i]);
    hi = std::max(hi, minimizer.multipliers[i]);
  }
  if (!(lo > 0.0)) throw Error("Lagrange multiplier is not positive; no bound-state scaling exists");

  GroundStateResult out = minimizer;
  if (hi - lo > tolerance * std::max(1.0, std::abs(hi))) {
    out.bound_state = false;
    return out;
  }
  double omega = 0.0;
  for (int i : support) omega += minimizer.multipliers[i];
  omega /= static_cast<double>(support.size());
  // Already a bound state to flow accuracy; a resample would only add boundary noise.
  if (std::abs(lo - 1.0) < 1e-9 && std::abs(hi - 1.0) < 1e-9) {
    out.bound_state = true;
    return out;
  }

  out.profile = resample_scaled(minimizer.profile, 1.0 / std::sqrt(omega), 1.0 / params.p);
  out.report = report(out.profile, params);
  const auto w = multiplier_estimate(out.report);
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.multipliers[i] = w[i] ? *w[i] : std::numeric_limits<double>::quiet_NaN();
  }
  out.bs_residual = bound_state_residual(out.profile, params);
  out.bound_state = true;
  for (int i : support) out.bound_state = out.bound_state && std::abs(out.multipliers[i] - 1.0) < tolerance;
  return out;
}

StructureTags classify_structure(const FieldVec& u, const ComponentField& scalar_q,
                                 double mass_floor, double tolerance) {
  StructureTags tags;
  double total = 0.0;
  std::vector<double> masses(u.components());
  for (int i = 0; i < u.components(); ++i) total += (masses[i] = norm_squared(u[i]));
  for (int i = 0; i < u.components(); ++i) {
    if (masses[i] > mass_floor * total) tags.support.push_back(i);
  }
  tags.coefficients.assign(u.components(), 0.0);
  tags.deviations.assign(u.components(), 0.0);
  tags.translation.assign(u.grid()->dim(), 0.0);
  if (tags.support.empty()) return tags;

  // Proportionality among the nonzero components, against the heaviest one.
  int ref = tags.support.front();
  for (int i : tags.support) if (masses[i] > masses[ref]) ref = i;
  tags.proportional = true;
  for (int i : tags.support) {
    const Complex c = inner(u[ref], u[i]) / masses[ref];
    const double dev = std::sqrt(norm_squared(u[i] - c * u[ref]) / masses[i]);
    tags.proportional = tags.proportional && dev < tolerance;
  }

  // R-membership: one common translate of Q, one complex factor per component.
  FieldVec q(std::vector<ComponentField>(u.components(), scalar_q));
  const auto fit = best_translation(u, q, false);
  tags.translation = fit.shift;
  const ComponentField qy = translate(scalar_q, fit.shift);
  const double qn = norm_squared(qy);
  tags.r_member = qn > 0.0;
  for (int i : tags.support) {
    const Complex c = inner(qy, u[i]) / qn;
    tags.coefficients[i] = std::abs(c);
    tags.deviations[i] = std::sqrt(norm_squared(u[i] - c * qy) / masses[i]);
    tags.r_member = tags.r_member && tags.deviations[i] < tolerance;
  }
  return tags;
}

namespace {

// Least-action Nehari minimizer over several starts. Symmetric starts stay on
// the symmetric branch, which for p > 1 is often a saddle, so single-component
// and random mixed starts are tried too. A candidate replaces the configured
// start only when its action is lower by a clear margin, so degenerate families
// keep the member the configured start leads to.
GroundStateResult least_action_nehari(const GridPtr& grid, const ModelParams& params, const FlowConfig& cfg) {
  auto best = minimize(grid, ConstraintSpec::nehari(), params, cfg);
  const int m = params.components();
  if (cfg.init == Initializer::User || m == 1) return best;

  std::vector<FieldVec> starts;
  FlowConfig gauss = cfg;
  gauss.init = Initializer::Gaussian;
  const FieldVec base = initial_field(grid, params, gauss);
  for (int i = 0; i < m; ++i) {
    if (!(params.coupling(i, i) > 0.0)) continue;
    FieldVec single(grid, m);
    single[i] = base[i];
    if (norm_squared(single) > 0.0) starts.push_back(std::move(single));
  }
  for (std::uint64_t k = 1; k <= 2; ++k) {
    FlowConfig rnd = cfg;
    rnd.init = Initializer::Random;
    rnd.seed = cfg.seed + 7919 * k;
    starts.push_back(initial_field(grid, params, rnd));
  }
  for (auto& start : starts) {
    FlowConfig c = cfg;
    c.init = Initializer::User;
    c.initial = std::move(start);
    auto cand = minimize(grid, ConstraintSpec::nehari(), params, c);
    if (cand.converged && cand.report.action < best.report.action * (1.0 - 1e-8)) best = std::move(cand);
  }
  return best;
}

}  // namespace

GroundStateResult ground_state(const GridPtr& grid, const ModelParams& params, const FlowConfig& cfg) {
  if (params.regime() != Regime::Subcritical) return least_action_nehari(grid, params, cfg);
  // The Nehari minimizer fixes the ground-state mass without a dilation; the
  // mass-constrained flow then runs at that mass, where the multiplier is 1.
  const auto nehari = least_action_nehari(grid, params, cfg);
  FlowConfig polish = cfg;
  polish.init = Initializer::User;
  polish.initial = nehari.profile;
  auto out = rescale_to_bound_state(
      minimize(grid, ConstraintSpec::total_mass(nehari.report.mass), params, polish), params);
  out.iterations += nehari.iterations;
  out.history.insert(out.history.begin(), nehari.history.begin(), nehari.history.end());
  return out;
}

double mu_of_groundstate(const GridPtr& grid, const ModelParams& params, const FlowConfig& cfg) {
  if (params.regime() != Regime::Subcritical) {
    throw ConfigError("the ground-state mass characterization needs p < 2/N");
  }
  return ground_state(grid, params, cfg).report.mass;
}

}  // namespace mnls
