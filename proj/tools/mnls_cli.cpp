#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mnls/diagnostics.hpp"
#include "mnls/error.hpp"
#include "mnls/experiments.hpp"
#include "mnls/functionals.hpp"
#include "mnls/snapshot.hpp"
#include "mnls/spectral.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mnls;
using namespace mnls::cli;

namespace {

enum ExitCode { kPass = 0, kFail = 1, kInconclusive = 2, kUsage = 3 };

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kPass;
    case Verdict::Fail: return kFail;
    case Verdict::Inconclusive: return kInconclusive;
  }
  return kFail;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_trace(const fs::path& path, const EvolutionTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_trace_csv(out, trace);
}

json tags_json(const StructureTags& t) {
  return json{{"support", t.support},           {"proportional", t.proportional},
              {"r_member", t.r_member},         {"coefficients", t.coefficients},
              {"deviations", t.deviations},     {"translation", t.translation}};
}

json nan_safe(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(std::isfinite(x) ? json(x) : json(nullptr));
  return a;
}

// Persists everything an outcome carries; the checks stay recomputable from these files.
void write_outcome(const fs::path& dir, const ExperimentOutcome& o) {
  fs::create_directories(dir);
  write_json(dir / "summary.json", o);
  if (o.trace) {
    write_trace(dir / "trace.csv", *o.trace);
    write_snapshot(dir / "final.mnls", o.trace->final_state);
  }
  if (o.reference) write_snapshot(dir / "reference.mnls", *o.reference);
  if (o.initial) write_snapshot(dir / "initial.mnls", *o.initial);
}

int report_outcome(const fs::path& dir, const ExperimentOutcome& o) {
  write_outcome(dir, o);
  std::cout << to_string(o.kind) << ": " << to_string(o.verdict) << '\n';
  for (const auto& c : o.checks) {
    std::cout << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << " = " << c.value << " (limit " << c.limit
              << ")\n";
  }
  for (const auto& n : o.notes) std::cout << "  note: " << n << '\n';
  return exit_code(o.verdict);
}

int cmd_groundstate(const RunConfig& cfg) {
  const auto grid = make_grid(cfg);
  const auto params = make_params(cfg);
  const auto flow = make_flow(cfg, grid);
  const bool route = cfg.constraint == "ground-state";
  const auto result = route ? ground_state(grid, params, flow) : minimize(grid, make_constraint(cfg), params, flow);
  const auto qs = scalar_ground_state(grid, params).profile[0];
  const auto tags = classify_structure(result.profile, qs, flow.mass_floor);

  fs::create_directories(cfg.output_dir);
  json j;
  j["constraint"] = cfg.constraint;
  j["regime"] = to_string(params.regime());
  j["report"] = result.report;
  j["multipliers"] = nan_safe(result.multipliers);
  j["bs_residual"] = result.bs_residual;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["bound_state"] = result.bound_state;
  j["structure"] = tags_json(tags);
  write_json(cfg.output_dir / "summary.json", j);
  write_snapshot(cfg.output_dir / "profile.mnls", result.profile);
  {
    std::ofstream h(cfg.output_dir / "history.csv");
    h << "iteration,objective,constraint_residual,bs_residual\n";
    h.precision(17);
    for (const auto& r : result.history) {
      h << r.iteration << ',' << r.energy << ',' << r.constraint_residual << ',' << r.bs_residual << '\n';
    }
  }
  const double worst = *std::max_element(result.bs_residual.begin(), result.bs_residual.end());
  std::cout << "groundstate: " << result.iterations << " iterations, S = " << result.report.action
            << ", max bs residual = " << worst << '\n';
  const bool ok = result.converged && (!route || (result.bound_state && worst < 1e-6));
  return ok ? kPass : kFail;
}

int cmd_evolve(const CLI::App& app, const RunConfig& cfg) {
  const auto grid = make_grid(cfg);
  const auto params = make_params(cfg);
  FieldVec v0;
  DistanceMonitor monitor;
  if (!cfg.initial.empty()) {
    v0 = read_snapshot(fs::path(cfg.initial));
    if (!same_grid(v0.grid(), grid)) throw GridMismatchError();
  } else {
    const auto q = ground_state(grid, params, make_flow(cfg, grid)).profile;
    v0 = cfg.dilation == 1.0 ? q : resample_scaled(q, cfg.dilation, 0.5 * params.dim);
    v0 *= cfg.amplitude;
    monitor = [q](const FieldVec& v) { return orbital_distance(v, q).distance; };
  }
  const auto trace = evolve(v0, params, make_stepper(app, cfg, StepperConfig{}), monitor);
  fs::create_directories(cfg.output_dir);
  write_json(cfg.output_dir / "summary.json", trace);
  write_trace(cfg.output_dir / "trace.csv", trace);
  write_snapshot(cfg.output_dir / "initial.mnls", v0);
  write_snapshot(cfg.output_dir / "final.mnls", trace.final_state);
  std::cout << "evolve: t = " << trace.times.back() << ", steps = " << trace.steps
            << (trace.blowup_detected ? ", blow-up proxy raised" : "")
            << (trace.tail_violation ? ", tail violation" : "") << '\n';
  return trace.tail_violation ? kInconclusive : kPass;
}

int cmd_experiment(const CLI::App& app, const RunConfig& cfg, ExperimentKind kind) {
  return report_outcome(cfg.output_dir, run_experiment(make_spec(app, cfg, kind)));
}

int cmd_blowup(const CLI::App& app, const RunConfig& cfg) {
  const auto regime = make_params(cfg).regime();
  if (regime == Regime::Subcritical) throw ConfigError("blowup needs p >= 2/N");
  return cmd_experiment(app, cfg,
                        regime == Regime::Critical ? ExperimentKind::CriticalBlowup : ExperimentKind::SupercriticalBlowup);
}

int cmd_sweep(const CLI::App& app, const RunConfig& cfg) {
  struct Job {
    double p;
    int m;
    fs::path dir;
    Verdict verdict = Verdict::Fail;
    std::string row;
    std::string error;
  };
  std::vector<Job> jobs;
  for (double p : cfg.sweep_p) {
    for (int m : cfg.sweep_m) {
      std::ostringstream name;
      name << "p" << p << "_M" << m;
      jobs.push_back({p, m, cfg.output_dir / name.str(), Verdict::Fail, {}, {}});
    }
  }
  // Validate every combination before starting any work.
  for (const auto& job : jobs) {
    RunConfig c = cfg;
    c.p = job.p;
    c.components = job.m;
    c.coupling.assign(static_cast<std::size_t>(job.m) * job.m, 1.0);
    (void)make_params(c);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      auto& job = jobs[i];
      try {
        RunConfig c = cfg;
        c.p = job.p;
        c.components = job.m;
        c.coupling.assign(static_cast<std::size_t>(job.m) * job.m, 1.0);
        c.family = "orbit";
        auto spec = make_spec(app, c, ExperimentKind::IdentitySuite);
        const auto out = run_identity_suite(spec);
        write_outcome(job.dir, out);
        job.verdict = out.verdict;
        const auto r = report(*out.reference, spec.params);
        std::ostringstream row;
        row.precision(17);
        row << r.mass << ',' << r.kinetic << ',' << r.potential << ',' << r.energy << ',' << r.pohozaev << ','
            << r.action;
        job.row = row.str();
      } catch (const std::exception& e) {
        job.error = e.what();
        job.verdict = Verdict::Fail;
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs) : hw;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(n, jobs.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  fs::create_directories(cfg.output_dir);
  std::ofstream csv(cfg.output_dir / "sweep.csv");
  csv << "p,M,verdict,mass,kinetic,potential,energy,pohozaev,action\n";
  int code = kPass;
  json summary = json::array();
  for (const auto& job : jobs) {
    summary.push_back({{"p", job.p}, {"M", job.m}, {"verdict", to_string(job.verdict)}, {"error", job.error}});
    std::cout << "p = " << job.p << ", M = " << job.m << ": " << to_string(job.verdict)
              << (job.error.empty() ? "" : " (" + job.error + ")") << '\n';
    if (!job.row.empty()) csv << job.p << ',' << job.m << ',' << to_string(job.verdict) << ',' << job.row << '\n';
    if (job.verdict == Verdict::Fail) code = kFail;
    else if (job.verdict == Verdict::Inconclusive && code == kPass) code = kInconclusive;
  }
  write_json(cfg.output_dir / "sweep.json", summary);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerics lab for M coupled nonlinear Schroedinger equations"};
  app.set_config("--config", "", "Config file of key = value lines (INI or TOML)");
  app.require_subcommand(1, 1);
  RunConfig cfg;
  register_options(app, cfg);

  auto* gs = app.add_subcommand("groundstate", "Compute a ground state or constrained minimizer");
  auto* ev = app.add_subcommand("evolve", "Evolve a snapshot or a scaled ground state");
  auto* st = app.add_subcommand("stability", "Orbital stability experiment (variant none | bc | subsystem)");
  auto* bu = app.add_subcommand("blowup", "Blow-up experiment for p >= 2/N");
  auto* id = app.add_subcommand("identities", "Bound-state and functional identity suite");
  auto* gn = app.add_subcommand("gn-check", "Gagliardo-Nirenberg constant and optimality checks");
  auto* sw = app.add_subcommand("sweep", "Identity suite over a (p, M) matrix, run concurrently");
  for (auto* sub : {gs, ev, st, bu, id, gn, sw}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*gs) return cmd_groundstate(cfg);
    if (*ev) return cmd_evolve(app, cfg);
    if (*st) {
      const auto kind = cfg.variant == "none" ? ExperimentKind::Stability : ExperimentKind::PerComponentStability;
      return cmd_experiment(app, cfg, kind);
    }
    if (*bu) return cmd_blowup(app, cfg);
    if (*id) return cmd_experiment(app, cfg, ExperimentKind::IdentitySuite);
    if (*gn) return cmd_experiment(app, cfg, ExperimentKind::GNSuite);
    if (*sw) return cmd_sweep(app, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const GridMismatchError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const TailMassError& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
