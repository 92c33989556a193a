#include "mnls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include "mnls/diagnostics.hpp"
#include "mnls/error.hpp"
#include "mnls/functionals.hpp"
#include "mnls/spectral.hpp"

namespace mnls {

namespace {

void apply_phase(std::vector<Complex>& data, std::span<const double> k2, double dt) {
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= std::polar(1.0, -k2[k] * dt);
}

// exp(-i k^2 dt/2) for the current step; rebuilt only when dt changes.
struct HalfStepPhase {
  double dt = std::numeric_limits<double>::quiet_NaN();
  std::vector<Complex> factor;

  const std::vector<Complex>& at(double step, std::span<const double> k2) {
    if (step != dt) {
      dt = step;
      factor.resize(k2.size());
      for (std::size_t k = 0; k < k2.size(); ++k) factor[k] = std::polar(1.0, -0.5 * k2[k] * step);
    }
    return factor;
  }
};

void apply_factor(std::vector<Complex>& data, const std::vector<Complex>& factor) {
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= factor[k];
}


struct StepResult {
  FieldVec state;
  FunctionalReport report;
  bool finite = true;
};

// Strang step that reads masses and T off the last spectrum, so the
// energy check only costs one extra pointwise pass for J.
StepResult step_with_report(const FieldVec& v, const ModelParams& params, double dt,
                            std::span<const double> k2, HalfStepPhase& phase) {
  const auto& factor = phase.at(dt, k2);
  const auto& grid = *v.grid();
  const int m = v.components();
  const double scale = grid.cell_volume() / static_cast<double>(grid.size());

  std::vector<ComponentField> half;
  half.reserve(m);
  for (int i = 0; i < m; ++i) {
    std::vector<Complex> data(v[i].values().begin(), v[i].values().end());
    fft_forward_inplace(grid, data);
    apply_factor(data, factor);
    fft_inverse_inplace(grid, data);
    for (auto& z : data)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return {v, {}, false};
    half.emplace_back(v.grid(), std::move(data));
  }
  const FieldVec mid = nonlinear_phase_step(FieldVec(std::move(half)), params, dt);

  std::vector<ComponentField> out;
  out.reserve(m);
  std::vector<double> masses(m), kinetics(m);
  for (int i = 0; i < m; ++i) {
    std::vector<Complex> data(mid[i].values().begin(), mid[i].values().end());
    fft_forward_inplace(grid, data);
    apply_factor(data, factor);
    double mass = 0.0, t = 0.0;
    for (std::size_t k = 0; k < data.size(); ++k) {
      const double a = std::norm(data[k]);
      mass += a;
      t += k2[k] * a;
    }
    masses[i] = mass * scale;
    kinetics[i] = t * scale;
    fft_inverse_inplace(grid, data);
    for (auto& z : data)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return {v, {}, false};
    out.emplace_back(v.grid(), std::move(data));
  }
  FieldVec next(std::move(out));
  const auto nl = nonlinearity(next, params);
  std::vector<double> potentials(m);
  for (int i = 0; i < m; ++i) potentials[i] = std::real(inner(next[i], nl[i]));
  auto rep = assemble_report(std::move(masses), std::move(kinetics), std::move(potentials), params);
  const bool ok = std::isfinite(rep.energy) && std::isfinite(rep.kinetic);
  return {std::move(next), std::move(rep), ok};
}

}  // namespace

FieldVec nonlinear_phase_step(const FieldVec& v, const ModelParams& params, double dt) {
  const auto rates = phase_rates(v, params);
  FieldVec out = v;
  for (int i = 0; i < v.components(); ++i) {
    auto data = out[i].values();
    for (std::size_t n = 0; n < data.size(); ++n) data[n] *= std::polar(1.0, dt * rates[i][n]);
  }
  return out;
}

FieldVec kinetic_step(const FieldVec& v, double dt) {
  const auto k2 = v.grid()->k_squared();
  std::vector<ComponentField> out;
  out.reserve(v.components());
  for (const auto& c : v) {
    std::vector<Complex> data(c.values().begin(), c.values().end());
    fft_forward_inplace(*v.grid(), data);
    apply_phase(data, k2, dt);
    fft_inverse_inplace(*v.grid(), data);
    out.emplace_back(v.grid(), std::move(data));
  }
  return FieldVec(std::move(out));
}

FieldVec strang_step(const FieldVec& v, const ModelParams& params, double dt) {
  return kinetic_step(nonlinear_phase_step(kinetic_step(v, 0.5 * dt), params, dt), 0.5 * dt);
}

EvolutionTrace evolve(const FieldVec& v0, const ModelParams& params, const StepperConfig& cfg,
                      const DistanceMonitor& monitor) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end >= 0.0) || !(cfg.dt_min > 0.0) || cfg.record_stride < 1) {
    throw ConfigError("stepper needs dt > 0, t_end >= 0, dt_min > 0 and record_stride >= 1");
  }
  if (v0.components() != params.components()) {
    throw ConfigError("initial state has " + std::to_string(v0.components()) +
                      " components, coupling has " + std::to_string(params.components()));
  }
  if (v0.grid()->dim() != params.dim) throw ConfigError("grid dimension differs from model dimension");

  const auto k2 = v0.grid()->k_squared();
  HalfStepPhase phase;
  EvolutionTrace trace;
  FieldVec v = v0;
  FunctionalReport rep = report(v, params);
  const double grad0 = std::sqrt(rep.kinetic);
  double k_max = std::numeric_limits<double>::infinity();
  for (int a = 0; a < v.grid()->dim(); ++a) k_max = std::min(k_max, std::numbers::pi / v.grid()->spacing(a));
  const double grad_limit =
      cfg.resolution_fraction > 0.0
          ? std::min(cfg.blowup_gradient_factor * grad0, cfg.resolution_fraction * k_max * std::sqrt(rep.mass))
          : cfg.blowup_gradient_factor * grad0;
  // E can vanish identically (critical ground states), so the jump scale falls back on T.
  const double energy_scale = std::max(std::abs(rep.energy), 0.01 * rep.kinetic) +
                              std::numeric_limits<double>::min();
  double t = 0.0;
  double dt = cfg.dt;
  double last_dt = 0.0;

  auto record = [&] {
    trace.times.push_back(t);
    trace.component_mass.push_back(rep.component_mass);
    trace.energy.push_back(rep.energy);
    trace.pohozaev.push_back(rep.pohozaev);
    trace.variance.push_back(variance(v));
    trace.gradient_norm.push_back(std::sqrt(rep.kinetic));
    trace.distance.push_back(monitor ? monitor(v) : std::numeric_limits<double>::quiet_NaN());
    const double tail = tail_mass_fraction(v);
    trace.tail_fraction.push_back(tail);
    trace.dt.push_back(last_dt);
    if (tail > cfg.tail_tolerance) trace.tail_violation = true;
  };

  record();
  int since_record = 0;
  const double t_eps = 1e-12 * std::max(1.0, cfg.t_end);
  while (!trace.tail_violation && t < cfg.t_end - t_eps) {
    const double h = std::min(dt, cfg.t_end - t);
    auto step = step_with_report(v, params, h, k2, phase);
    const bool jump = !step.finite ||
                      std::abs(step.report.energy - rep.energy) > cfg.energy_jump_tolerance * energy_scale;
    if (jump) {
      ++trace.rejected_steps;
      dt = 0.5 * h;
      if (dt < cfg.dt_min) {
        trace.blowup_detected = true;
        trace.blowup_time = t;
        break;
      }
      continue;
    }
    v = std::move(step.state);
    rep = std::move(step.report);
    t += h;
    last_dt = h;
    ++trace.steps;
    ++since_record;
    if (rep.kinetic > 0.0 && std::sqrt(rep.kinetic) > grad_limit) {
      trace.blowup_detected = true;
      trace.blowup_time = t;
      record();
      since_record = 0;
      break;
    }
    if (since_record >= cfg.record_stride) {
      record();
      since_record = 0;
    }
    // Let the step recover after a transient.
    if (h == dt) dt = std::min(cfg.dt, 1.25 * dt);
  }
  if (since_record > 0) record();
  trace.final_state = std::move(v);
  return trace;
}

void write_trace_csv(std::ostream& out, const EvolutionTrace& trace) {
  const std::size_t m = trace.component_mass.empty() ? 0 : trace.component_mass.front().size();
  out << "t,dt";
  for (std::size_t i = 0; i < m; ++i) out << ",mass_" << i + 1;
  out << ",energy,pohozaev,variance,gradient_norm,distance,tail_fraction\n";
  out.precision(17);
  for (std::size_t r = 0; r < trace.size(); ++r) {
    out << trace.times[r] << ',' << trace.dt[r];
    for (double mass : trace.component_mass[r]) out << ',' << mass;
    out << ',' << trace.energy[r] << ',' << trace.pohozaev[r] << ',' << trace.variance[r] << ','
        << trace.gradient_norm[r] << ',' << trace.distance[r] << ',' << trace.tail_fraction[r]
        << '\n';
  }
}

void to_json(nlohmann::json& j, const EvolutionTrace& trace) {
  j = nlohmann::json{{"steps", trace.steps},
                     {"rejected_steps", trace.rejected_steps},
                     {"records", trace.size()},
                     {"blowup_detected", trace.blowup_detected},
                     {"tail_violation", trace.tail_violation}};
  j["blowup_time"] = trace.blowup_time ? nlohmann::json(*trace.blowup_time) : nlohmann::json(nullptr);
  if (!trace.times.empty()) {
    j["t_final"] = trace.times.back();
    j["energy_initial"] = trace.energy.front();
    j["energy_final"] = trace.energy.back();
    double drift = 0.0;
    for (double e : trace.energy) drift = std::max(drift, std::abs(e - trace.energy.front()));
    j["energy_drift"] = drift;
    double dmax = 0.0;
    bool any = false;
    for (double d : trace.distance) {
      if (std::isnan(d)) continue;
      dmax = std::max(dmax, d);
      any = true;
    }
    j["distance_sup"] = any ? nlohmann::json(dmax) : nlohmann::json(nullptr);
  }
}

}  // namespace mnls
