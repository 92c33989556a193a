#pragma once

#include <functional>
#include <vector>

#include "mnls/field.hpp"

namespace mnls {

struct EvolutionTrace;

/// Sum_i int |x|^2 |v_i|^2 with centered coordinates.
double variance(const FieldVec& v);

/// ||W||_{H^1}^2 = M(W) + T(W), computed spectrally.
double h1_norm_squared(const FieldVec& w);
double h1_norm(const FieldVec& w);

/// Second differences of the recorded variance against 8 H(t):
/// max over interior samples of |d2v/dt2 - 8H| / (1 + |8H|).
/// Throws ConfigError when the recorded times are not uniformly spaced or
/// fewer than three samples exist.
double virial_residual(const EvolutionTrace& trace);

/// Second differences of `values` at interior samples of a possibly
/// non-uniform time grid.
std::vector<double> second_differences(const std::vector<double>& times,
                                       const std::vector<double>& values);

struct TranslationFit {
  std::vector<double> shift;     // y maximizing sum_i |<q_i(. + y), u_i>|
  std::vector<Complex> overlaps;  // <q_i(. + y), u_i> at the optimum
};

/// Common translation aligning `reference` to `u`, using the H^1 pairing when
/// `h1_weight` is set and the L2 pairing otherwise. The grid-resolution
/// maximizer of the cross-correlation is refined by Newton steps on the
/// trigonometric correlation polynomial.
TranslationFit best_translation(const FieldVec& u, const FieldVec& reference, bool h1_weight);

struct OrbitalAlignment {
  std::vector<double> translation;  // y
  std::vector<double> phases;       // theta_i
  double distance = 0.0;            // || V - (e^{i theta_i} q_i(. + y)) ||_{H^1}
};

/// Distance from V to the orbit {(e^{i theta_i} q_i(. + y))} of `reference`
/// under per-component phases and a common translation.
OrbitalAlignment orbital_distance(const FieldVec& v, const FieldVec& reference);

/// Applies an alignment to a reference: (e^{i theta_i} q_i(. + y)).
FieldVec apply_alignment(const FieldVec& reference, const OrbitalAlignment& alignment);

using FamilyGenerator = std::function<FieldVec(double)>;

struct FamilyDistance {
  double parameter = 0.0;
  OrbitalAlignment alignment;
};

/// Distance to a one-parameter family of orbits: minimum over `samples`
/// equally spaced parameters in [lo, hi], refined by golden section around
/// the best sample. An estimate from above of the true infimum.
FamilyDistance distance_to_family(const FieldVec& v, const FamilyGenerator& family, double lo,
                                  double hi, int samples = 64);

}  // namespace mnls
