#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mnls/field.hpp"
#include "mnls/params.hpp"

namespace mnls {

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double dt_min = 1e-7;
  /// Blow-up when ||grad V|| exceeds this multiple of ||grad V0||.
  double blowup_gradient_factor = 1e3;
  /// Blow-up also when ||grad V|| exceeds this fraction of k_max ||V||_2, the
  /// largest gradient the grid can carry (0 disables).
  double resolution_fraction = 0.25;
  /// Tail mass fraction (outer 10% shell) beyond which results are untrusted.
  double tail_tolerance = 1e-4;
  int record_stride = 10;
  /// Halve dt when one step changes E by more than this fraction of the energy scale.
  double energy_jump_tolerance = 1e-5;
};

/// Time series recorded by `evolve`; one entry per recorded time.
struct EvolutionTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> component_mass;  // [record][component]
  std::vector<double> energy;
  std::vector<double> pohozaev;
  std::vector<double> variance;
  std::vector<double> gradient_norm;
  std::vector<double> distance;  // NaN without a distance monitor
  std::vector<double> tail_fraction;
  std::vector<double> dt;

  bool blowup_detected = false;
  bool tail_violation = false;
  std::optional<double> blowup_time;
  int steps = 0;
  int rejected_steps = 0;
  FieldVec final_state;

  std::size_t size() const { return times.size(); }
};

using DistanceMonitor = std::function<double(const FieldVec&)>;

/// v_i -> exp(i dt sum_j k_ij |v_j|^{p+1} |v_i|^{p-1}) v_i pointwise. Exact,
/// since the rate depends only on the moduli, which the map preserves.
FieldVec nonlinear_phase_step(const FieldVec& v, const ModelParams& params, double dt);

/// Free Schroedinger flow exp(i dt Delta), exact in Fourier space.
FieldVec kinetic_step(const FieldVec& v, double dt);

/// Strang splitting: half kinetic, full nonlinear, half kinetic.
FieldVec strang_step(const FieldVec& v, const ModelParams& params, double dt);

/// Integrates the coupled system to cfg.t_end or until a flag is raised.
///
/// Blow-up is declared when the gradient norm exceeds the configured
/// multiple of its initial value or the resolution cap, when the adaptive step would fall below
/// dt_min, or when the state stops being finite. A tail violation stops the
/// run since the variance and the periodic box are no longer trustworthy.
EvolutionTrace evolve(const FieldVec& v0, const ModelParams& params, const StepperConfig& cfg,
                      const DistanceMonitor& monitor = {});

/// One CSV row per recorded time.
void write_trace_csv(std::ostream& out, const EvolutionTrace& trace);
/// Flags and summary numbers.
void to_json(nlohmann::json& j, const EvolutionTrace& trace);

}  // namespace mnls
