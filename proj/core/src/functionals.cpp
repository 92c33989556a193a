#include "mnls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mnls/error.hpp"
#include "mnls/spectral.hpp"

namespace mnls {

namespace {

void check_finite(double value, const char* name) {
  if (!std::isfinite(value)) throw Error(std::string("functional ") + name + " is not finite");
}

void check_dim(const FieldVec& u, const ModelParams& params) {
  if (u.grid()->dim() != params.dim) throw ConfigError("field dimension differs from model dimension");
  if (u.components() != params.components()) {
    throw ConfigError("field has " + std::to_string(u.components()) + " components, coupling has " +
                      std::to_string(params.components()));
  }
}

// (|z|^2)^e, multiplying out small integer exponents (odd p) instead of calling pow.
struct NormPower {
  double e;
  int whole;  // e when it is an integer in [0, 8], else -1

  explicit NormPower(double exponent) : e(exponent), whole(-1) {
    if (exponent >= 0.0 && exponent <= 8.0 && exponent == std::floor(exponent)) whole = static_cast<int>(exponent);
  }
  double operator()(double norm) const {
    if (whole < 0) return std::pow(norm, e);
    double r = 1.0;
    for (int k = 0; k < whole; ++k) r *= norm;
    return r;
  }
};

// |z|^(p-1) with the zero convention (or regularized) at z = 0.
double modulus_power(double modulus, double exponent, double reg_eps) {
  if (reg_eps > 0.0) return std::pow(modulus + reg_eps, exponent);
  if (modulus == 0.0) return exponent == 0.0 ? 1.0 : 0.0;
  return std::pow(modulus, exponent);
}

// |u_i|^{p+1} per node per component.
std::vector<std::vector<double>> moduli(const FieldVec& u, double p) {
  const NormPower pw(0.5 * (p + 1.0));
  std::vector<std::vector<double>> out(u.components());
  for (int i = 0; i < u.components(); ++i) {
    const auto v = u[i].values();
    out[i].resize(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[i][j] = pw(std::norm(v[j]));
  }
  return out;
}

}  // namespace

FunctionalReport assemble_report(std::vector<double> masses, std::vector<double> kinetics,
                                 std::vector<double> potentials, const ModelParams& params) {
  FunctionalReport r;
  for (double m : masses) r.mass += m;
  for (double t : kinetics) r.kinetic += t;
  for (double j : potentials) r.potential += j;
  check_finite(r.mass, "M");
  check_finite(r.kinetic, "T");
  check_finite(r.potential, "J");
  const double q = 2.0 * params.p + 2.0;
  r.total = r.mass + r.kinetic;
  r.energy = 0.5 * r.kinetic - r.potential / q;
  r.pohozaev = r.kinetic - params.dim * params.p * r.potential / q;
  r.action = 0.5 * r.total - r.potential / q;
  r.component_mass = std::move(masses);
  r.component_kinetic = std::move(kinetics);
  r.component_potential = std::move(potentials);
  return r;
}

FunctionalReport report(const FieldVec& u, const ModelParams& params) {
  check_dim(u, params);
  const int m = u.components();
  const double dv = u.grid()->cell_volume();
  std::vector<double> masses(m), kinetics(m), potentials(m, 0.0);
  for (int i = 0; i < m; ++i) {
    masses[i] = norm_squared(u[i]);
    kinetics[i] = kinetic(u[i]);
  }
  const auto mod = moduli(u, params.p);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double k = params.coupling(i, j);
      if (k == 0.0) continue;
      double acc = 0.0;
      for (std::size_t n = 0; n < mod[i].size(); ++n) acc += mod[i][n] * mod[j][n];
      potentials[i] += k * acc * dv;
    }
  }
  return assemble_report(std::move(masses), std::move(kinetics), std::move(potentials), params);
}

void to_json(nlohmann::json& j, const FunctionalReport& r) {
  j = nlohmann::json{{"mass", r.mass},
                     {"kinetic", r.kinetic},
                     {"potential", r.potential},
                     {"total", r.total},
                     {"energy", r.energy},
                     {"pohozaev", r.pohozaev},
                     {"action", r.action},
                     {"component_mass", r.component_mass},
                     {"component_kinetic", r.component_kinetic},
                     {"component_potential", r.component_potential}};
}

std::string csv_header(const FunctionalReport& r, const std::string& prefix) {
  std::ostringstream out;
  out << prefix << "M," << prefix << "T," << prefix << "J," << prefix << "I," << prefix << "E,"
      << prefix << "H," << prefix << "S";
  for (std::size_t i = 0; i < r.component_mass.size(); ++i) {
    out << ',' << prefix << "M_" << i + 1 << ',' << prefix << "T_" << i + 1 << ',' << prefix
        << "J_" << i + 1;
  }
  return out.str();
}

std::string csv_row(const FunctionalReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << r.mass << ',' << r.kinetic << ',' << r.potential << ',' << r.total << ',' << r.energy
      << ',' << r.pohozaev << ',' << r.action;
  for (std::size_t i = 0; i < r.component_mass.size(); ++i) {
    out << ',' << r.component_mass[i] << ',' << r.component_kinetic[i] << ','
        << r.component_potential[i];
  }
  return out.str();
}

std::vector<std::vector<double>> phase_rates(const FieldVec& u, const ModelParams& params) {
  check_dim(u, params);
  const int m = u.components();
  const auto mod = moduli(u, params.p);
  const NormPower lower(0.5 * (params.p - 1.0));
  std::vector<std::vector<double>> rates(m, std::vector<double>(u.grid()->size(), 0.0));
  for (int i = 0; i < m; ++i) {
    const auto v = u[i].values();
    for (std::size_t n = 0; n < v.size(); ++n) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += params.coupling(i, j) * mod[j][n];
      // Integer (p-1)/2 has no singularity at 0, so the multiplied-out power is exact there too.
      const double w = params.reg_eps == 0.0 && lower.whole >= 0
                           ? lower(std::norm(v[n]))
                           : modulus_power(std::abs(v[n]), params.p - 1.0, params.reg_eps);
      rates[i][n] = s * w;
    }
  }
  return rates;
}

FieldVec nonlinearity(const FieldVec& u, const ModelParams& params) {
  const auto rates = phase_rates(u, params);
  FieldVec out = u;
  for (int i = 0; i < u.components(); ++i) {
    auto v = out[i].values();
    for (std::size_t n = 0; n < v.size(); ++n) v[n] *= rates[i][n];
  }
  return out;
}

double critical_identity_residual(const FieldVec& u, const ModelParams& params) {
  if (!params.critical()) throw ConfigError("critical identity needs p = 2/N");
  const auto r = report(u, params);
  return std::abs(2.0 * r.energy - r.pohozaev);
}

std::vector<ActionSample> action_profile(const FieldVec& u, const ModelParams& params,
                                         const std::vector<double>& lambdas) {
  std::vector<ActionSample> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw ConfigError("dilation factors must be positive");
    const auto r = report(resample_scaled(u, lambda, 0.5 * params.dim), params);
    out.push_back({lambda, r.action, r.pohozaev});
  }
  return out;
}

double action_derivative_mismatch(const FieldVec& u, const ModelParams& params, double lambda,
                                  double dlambda) {
  const auto prof =
      action_profile(u, params, {lambda - dlambda, lambda, lambda + dlambda});
  const double derivative = (prof[2].action - prof[0].action) / (2.0 * dlambda);
  const auto centre = report(resample_scaled(u, lambda, 0.5 * params.dim), params);
  const double scale = std::abs(centre.pohozaev) + centre.kinetic;
  if (scale == 0.0) return 0.0;
  return std::abs(lambda * derivative - centre.pohozaev) / scale;
}

double dilated_action(const FunctionalReport& r, const ModelParams& params, double lambda) {
  const double np = params.dim * params.p;
  return 0.5 * r.mass + 0.5 * lambda * lambda * r.kinetic -
         std::pow(lambda, np) * r.potential / (2.0 * params.p + 2.0);
}

double lambda_star(const FieldVec& w, const ModelParams& params) {
  return lambda_star(report(w, params), params);
}

double lambda_star(const FunctionalReport& r, const ModelParams& params) {
  if (params.regime() != Regime::Supercritical) {
    throw ConfigError("lambda* exists only for p > 2/N");
  }
  if (!(r.potential > 0.0)) throw ConfigError("lambda* needs J(W) > 0");
  const double np = params.dim * params.p;
  const double q = 2.0 * params.p + 2.0;
  auto slope = [&](double l) { return l * r.kinetic - np * std::pow(l, np - 1.0) * r.potential / q; };
  auto curvature = [&](double l) {
    return r.kinetic - np * (np - 1.0) * std::pow(l, np - 2.0) * r.potential / q;
  };
  auto g = [&](double s) { return dilated_action(r, params, std::exp(s)); };

  // Bracket in log-lambda; widen geometrically when the maximum sits outside.
  double lo = std::log(1e-3), hi = std::log(1e3);
  for (int expand = 0; !(slope(std::exp(lo)) > 0.0 && slope(std::exp(hi)) < 0.0); ++expand) {
    if (expand == 8) throw ConvergenceError("lambda*: no interior maximum in bracket");
    lo -= std::log(10.0);
    hi += std::log(10.0);
  }

  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > 1e-10) {
    if (gc > gd) {
      b = d; d = c; gd = gc;
      c = b - ratio * (b - a); gc = g(c);
    } else {
      a = c; c = d; gc = gd;
      d = a + ratio * (b - a); gd = g(d);
    }
  }
  // Golden section only resolves the flat maximum to sqrt(eps); polish on g'.
  double l = std::exp(0.5 * (a + b));
  for (int it = 0; it < 20; ++it) {
    const double step = slope(l) / curvature(l);
    if (!std::isfinite(step)) break;
    l -= step;
    if (std::abs(step) < 1e-15 * l) break;
  }
  if (!(l > 0.0) || std::abs(slope(l)) > 1e-8 * std::max(r.kinetic, 1.0)) {
    throw ConvergenceError("lambda*: derivative residual too large");
  }
  return l;
}

double gn_quotient(const FieldVec& w, const ModelParams& params) {
  return gn_quotient(report(w, params), params);
}

double gn_quotient(const FunctionalReport& r, const ModelParams& params) {
  if (!(r.mass > 0.0) || !(r.kinetic > 0.0)) {
    throw ConfigError("Gagliardo-Nirenberg quotient needs M(W) > 0 and T(W) > 0");
  }
  const double half_np = 0.5 * params.dim * params.p;
  return r.potential /
         (std::pow(r.mass, params.p + 1.0 - half_np) * std::pow(r.kinetic, half_np));
}

GnRescale gn_equality_rescale(const FieldVec& w, const ModelParams& params,
                              const FieldVec& reference) {
  const auto rw = report(w, params);
  const auto rq = report(reference, params);
  if (!(rw.mass > 0.0)) throw ConfigError("rescale needs W != 0");
  if (!(rw.potential > 0.0) || !(rq.potential > 0.0)) throw ConfigError("rescale needs J > 0");
  GnRescale out;
  out.nu = std::pow(rq.potential * rw.mass / (rq.mass * rw.potential), 1.0 / (2.0 * params.p));
  out.zeta = std::pow(out.nu * out.nu * rw.mass / rq.mass, 1.0 / params.dim);
  out.field = resample_scaled(w, out.zeta, 0.0);
  out.field *= out.nu;
  return out;
}

P1Witness p1_witness(const Coupling& k) {
  P1Witness out;
  const int m = k.components();
  for (int i = 0; i < m; ++i) {
    if (k(i, i) > 0.0) {
      out.kind = P1Witness::Kind::DisjointSupport;
      out.diagonal_index = i;
      out.coefficients.assign(m, 0.0);
      out.coefficients[i] = 1.0;
      out.value = k(i, i);
      return out;
    }
  }

  auto quad = [&](const std::vector<double>& a) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += a[i] * k(i, j) * a[j];
    return s;
  };
  std::vector<double> best;
  double best_value = 0.0;
  auto consider = [&](const std::vector<double>& a) {
    const double v = quad(a);
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  };

  // Simplex lattice sum(a) = resolution, then seeded random points for larger M.
  const int resolution = m <= 3 ? 24 : (m <= 5 ? 8 : 0);
  if (resolution > 0) {
    std::vector<int> counts(m, 0);
    auto recurse = [&](auto&& self, int idx, int remaining) -> void {
      if (idx == m - 1) {
        counts[idx] = remaining;
        std::vector<double> a(m);
        for (int i = 0; i < m; ++i) a[i] = static_cast<double>(counts[i]) / resolution;
        consider(a);
        return;
      }
      for (int c = 0; c <= remaining; ++c) {
        counts[idx] = c;
        self(self, idx + 1, remaining - c);
      }
    };
    recurse(recurse, 0, resolution);
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::exponential_distribution<double> expo(1.0);
  for (int trial = 0; trial < 20000; ++trial) {
    std::vector<double> a(m);
    double s = 0.0;
    for (auto& x : a) s += (x = expo(rng));
    for (auto& x : a) x /= s;
    consider(a);
  }

  if (best.empty()) return out;
  const double top = *std::max_element(best.begin(), best.end());
  for (auto& x : best) x /= top;
  out.kind = P1Witness::Kind::SharedProfile;
  out.coefficients = best;
  out.value = quad(best);
  return out;
}

FieldVec witness_field(const P1Witness& witness, const GridPtr& grid, const ModelParams& params) {
  if (!witness.found()) throw ConfigError("no (P1) witness to realize");
  const auto phi = sample(grid, [](std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return Complex(std::exp(-0.5 * r2), 0.0);
  });
  FieldVec out(grid, params.components());
  for (int i = 0; i < params.components(); ++i) {
    const double a = witness.coefficients[i];
    if (a > 0.0) out[i] = std::pow(a, 1.0 / (params.p + 1.0)) * phi;
  }
  return out;
}

std::vector<std::optional<double>> multiplier_estimate(const FieldVec& u,
                                                       const ModelParams& params) {
  return multiplier_estimate(report(u, params));
}

std::vector<std::optional<double>> multiplier_estimate(const FunctionalReport& r) {
  std::vector<std::optional<double>> out(r.component_mass.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (r.component_mass[i] > 0.0) {
      out[i] = (r.component_potential[i] - r.component_kinetic[i]) / r.component_mass[i];
    }
  }
  return out;
}

}  // namespace mnls
