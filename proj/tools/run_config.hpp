#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mnls/dynamics.hpp"
#include "mnls/experiments.hpp"
#include "mnls/groundstate.hpp"

namespace mnls::cli {

// Every key accepted by the config file; each is also a --key flag.
struct RunConfig {
  // grid
  int dim = 1;
  int points = 1024;
  double length = 40.0;
  // model
  double p = 1.0;
  int components = 1;
  std::vector<double> coupling;  // row-major; empty means identity
  double reg_eps = 0.0;
  // ground-state flow
  std::string constraint = "ground-state";
  std::vector<double> masses;
  double tau = 0.5;
  int max_iterations = 20000;
  double tolerance = 1e-10;
  double mass_floor = 1e-10;
  std::string init = "gaussian";
  std::string initial;  // snapshot path
  // stepper
  double dt = 1e-3;
  double t_end = 1.0;
  double dt_min = 1e-7;
  double blowup_gradient_factor = 1e3;
  double resolution_fraction = 0.25;
  double tail_tolerance = 1e-4;
  double energy_jump_tolerance = 1e-5;
  int record_stride = 10;
  // evolve
  double dilation = 1.0;
  double amplitude = 1.0;
  // experiments
  double epsilon = 0.01;
  double lambda = 1.1;
  double distance_threshold = 5.0;
  std::string family = "orbit";
  std::string variant = "none";
  std::vector<int> subset;  // 1-based
  bool r_variant = false;
  int random_fields = 1000;
  int seeds = 10;
  // sweep
  std::vector<double> sweep_p{1.0, 2.0, 3.0};
  std::vector<int> sweep_m{1, 2, 3};
  int jobs = 0;
  // global
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "mnls_out";
};

void register_options(CLI::App& app, RunConfig& cfg);

/// True when the key was given on the command line or in the config file.
bool was_set(const CLI::App& app, const std::string& key);

GridPtr make_grid(const RunConfig& cfg);
ModelParams make_params(const RunConfig& cfg);
FlowConfig make_flow(const RunConfig& cfg, const GridPtr& grid);
ConstraintSpec make_constraint(const RunConfig& cfg);

/// Stepper settings: the experiment defaults for `kind`, overridden by any key set explicitly.
StepperConfig make_stepper(const CLI::App& app, const RunConfig& cfg, const StepperConfig& base);

/// Experiment spec for `kind`, with explicitly set keys overriding the per-kind defaults.
ExperimentSpec make_spec(const CLI::App& app, const RunConfig& cfg, ExperimentKind kind);

}  // namespace mnls::cli
