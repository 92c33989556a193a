#include "run_config.hpp"

#include "mnls/error.hpp"
#include "mnls/snapshot.hpp"

namespace mnls::cli {

void register_options(CLI::App& app, RunConfig& c) {
  const std::string model = "Model";
  app.add_option("--dim", c.dim, "Spatial dimension N")->group(model)->check(CLI::Range(1, 3));
  app.add_option("--points", c.points, "Grid points per axis (power of two)")->group(model);
  app.add_option("--length", c.length, "Box length per axis")->group(model);
  app.add_option("--p", c.p, "Nonlinearity power p")->group(model);
  app.add_option("--components", c.components, "Number of components M")->group(model);
  app.add_option("--coupling", c.coupling, "Row-major coupling matrix K (identity if omitted)")
      ->group(model)
      ->expected(0, CLI::detail::expected_max_vector_size);
  app.add_option("--reg_eps", c.reg_eps, "Regularization of |u|^(p-1) at u = 0")->group(model);

  const std::string flow = "Ground-state flow";
  app.add_option("--constraint", c.constraint, "ground-state | total-mass | per-component-mass | nehari")
      ->group(flow)
      ->check(CLI::IsMember({"ground-state", "total-mass", "per-component-mass", "nehari"}));
  app.add_option("--masses", c.masses, "Constraint masses")->group(flow);
  app.add_option("--tau", c.tau, "Flow step")->group(flow);
  app.add_option("--max_iterations", c.max_iterations, "Flow iteration cap")->group(flow);
  app.add_option("--tolerance", c.tolerance, "Relative Euler-Lagrange residual to stop at")->group(flow);
  app.add_option("--mass_floor", c.mass_floor, "Zero-component threshold (fraction of total mass)")->group(flow);
  app.add_option("--init", c.init, "gaussian | sech | random | user")
      ->group(flow)
      ->check(CLI::IsMember({"gaussian", "sech", "random", "user"}));
  app.add_option("--initial", c.initial, "Snapshot file used as initial field")->group(flow);

  const std::string step = "Stepper";
  app.add_option("--dt", c.dt, "Time step")->group(step);
  app.add_option("--t_end", c.t_end, "Final time")->group(step);
  app.add_option("--dt_min", c.dt_min, "Smallest adaptive step")->group(step);
  app.add_option("--blowup_gradient_factor", c.blowup_gradient_factor, "Gradient growth flagged as blow-up")->group(step);
  app.add_option("--resolution_fraction", c.resolution_fraction, "Fraction of k_max ||V|| flagged as blow-up")->group(step);
  app.add_option("--tail_tolerance", c.tail_tolerance, "Boundary-shell mass fraction allowed")->group(step);
  app.add_option("--energy_jump_tolerance", c.energy_jump_tolerance, "Per-step energy change allowed")->group(step);
  app.add_option("--record_stride", c.record_stride, "Steps between trace records")->group(step);
  app.add_option("--dilation", c.dilation, "evolve: initial datum P(Q, dilation)")->group(step);
  app.add_option("--amplitude", c.amplitude, "evolve: initial datum scaled by this factor")->group(step);

  const std::string exp = "Experiments";
  app.add_option("--epsilon", c.epsilon, "Perturbation size")->group(exp);
  app.add_option("--lambda", c.lambda, "Dilation (supercritical) or amplitude (critical) factor")->group(exp);
  app.add_option("--distance_threshold", c.distance_threshold, "Stability limit in units of epsilon")->group(exp);
  app.add_option("--family", c.family, "orbit | continuum")->group(exp)->check(CLI::IsMember({"orbit", "continuum"}));
  app.add_option("--variant", c.variant, "none | bc | subsystem")
      ->group(exp)
      ->check(CLI::IsMember({"none", "bc", "subsystem"}));
  app.add_option("--subset", c.subset, "Components in X (1-based)")->group(exp);
  app.add_option("--r_variant", c.r_variant, "Blow-up from a multiple of the scalar datum")->group(exp);
  app.add_option("--random_fields", c.random_fields, "Random fields per suite")->group(exp);
  app.add_option("--seeds", c.seeds, "Initializer seeds for the continuum check")->group(exp);
  app.add_option("--sweep_p", c.sweep_p, "Powers in the sweep")->group(exp);
  app.add_option("--sweep_m", c.sweep_m, "Component counts in the sweep")->group(exp);
  app.add_option("--jobs", c.jobs, "Concurrent sweep jobs (0 = hardware threads)")->group(exp);

  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("-o,--output_dir", c.output_dir, "Output directory");
}

bool was_set(const CLI::App& app, const std::string& key) {
  const auto* opt = app.get_option_no_throw("--" + key);
  return opt != nullptr && opt->count() > 0;
}

GridPtr make_grid(const RunConfig& c) { return GridSpec::cube(c.dim, c.points, c.length); }

ModelParams make_params(const RunConfig& c) {
  if (c.components < 1) throw ConfigError("components must be at least 1");
  Coupling k = c.coupling.empty() ? Coupling::identity(c.components) : Coupling(c.components, c.coupling);
  return ModelParams(c.p, c.dim, std::move(k), c.reg_eps);
}

FlowConfig make_flow(const RunConfig& c, const GridPtr& grid) {
  FlowConfig f;
  f.tau = c.tau;
  f.max_iterations = c.max_iterations;
  f.tolerance = c.tolerance;
  f.mass_floor = c.mass_floor;
  f.seed = c.seed;
  if (c.init == "gaussian") f.init = Initializer::Gaussian;
  else if (c.init == "sech") f.init = Initializer::Sech;
  else if (c.init == "random") f.init = Initializer::Random;
  else f.init = Initializer::User;
  if (!c.initial.empty()) {
    f.initial = read_snapshot(std::filesystem::path(c.initial));
    if (!same_grid(f.initial->grid(), grid)) throw GridMismatchError();
    f.init = Initializer::User;
  } else if (f.init == Initializer::User) {
    throw ConfigError("init = user needs an initial snapshot");
  }
  return f;
}

ConstraintSpec make_constraint(const RunConfig& c) {
  if (c.constraint == "total-mass") {
    if (c.masses.size() != 1) throw ConfigError("total-mass needs exactly one value in masses");
    return ConstraintSpec::total_mass(c.masses[0]);
  }
  if (c.constraint == "per-component-mass") return ConstraintSpec::per_component_mass(c.masses);
  if (c.constraint == "nehari") return ConstraintSpec::nehari();
  throw ConfigError("constraint '" + c.constraint + "' is not a single minimization problem");
}

StepperConfig make_stepper(const CLI::App& app, const RunConfig& c, const StepperConfig& base) {
  StepperConfig s = base;
  if (was_set(app, "dt")) s.dt = c.dt;
  if (was_set(app, "t_end")) s.t_end = c.t_end;
  if (was_set(app, "dt_min")) s.dt_min = c.dt_min;
  if (was_set(app, "blowup_gradient_factor")) s.blowup_gradient_factor = c.blowup_gradient_factor;
  if (was_set(app, "resolution_fraction")) s.resolution_fraction = c.resolution_fraction;
  if (was_set(app, "tail_tolerance")) s.tail_tolerance = c.tail_tolerance;
  if (was_set(app, "energy_jump_tolerance")) s.energy_jump_tolerance = c.energy_jump_tolerance;
  if (was_set(app, "record_stride")) s.record_stride = c.record_stride;
  return s;
}

ExperimentSpec make_spec(const CLI::App& app, const RunConfig& c, ExperimentKind kind) {
  const auto grid = make_grid(c);
  ExperimentSpec s = default_spec(kind, grid, make_params(c));
  s.stepper = make_stepper(app, c, s.stepper);
  s.flow = make_flow(c, grid);
  s.epsilon = c.epsilon;
  if (was_set(app, "lambda")) s.lambda = c.lambda;
  s.distance_threshold = c.distance_threshold;
  s.seed = c.seed;
  s.family = c.family == "continuum" ? FamilyKind::Continuum : FamilyKind::Orbit;
  s.variant = c.variant == "subsystem" ? PerComponentVariant::Subsystem : PerComponentVariant::Bc;
  s.subset.clear();
  for (int i : c.subset) s.subset.push_back(i - 1);
  s.r_variant = c.r_variant;
  s.random_fields = c.random_fields;
  s.seeds = c.seeds;
  return s;
}

}  // namespace mnls::cli
