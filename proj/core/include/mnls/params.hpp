#pragma once

#include <string>
#include <vector>

namespace mnls {

enum class Regime { Subcritical, Critical, Supercritical };

std::string to_string(Regime regime);

/// Symmetric M x M coupling matrix (k_ij).
class Coupling {
 public:
  Coupling() = default;
  /// Row-major entries; throws ConfigError unless square and exactly symmetric.
  Coupling(int components, std::vector<double> entries);
  static Coupling identity(int components);
  /// Every entry equal to `value`.
  static Coupling uniform(int components, double value);

  int components() const { return m_; }
  double operator()(int i, int j) const { return k_[static_cast<std::size_t>(i) * m_ + j]; }
  const std::vector<double>& entries() const { return k_; }
  double row_sum(int i) const;
  /// Sum of |k_ij| over row i.
  double row_abs_sum(int i) const;
  /// The sub-matrix on the given (0-based) indices.
  Coupling restrict_to(const std::vector<int>& indices) const;

 private:
  int m_ = 0;
  std::vector<double> k_;
};

/// Power p, dimension N and coupling K of the coupled system.
struct ModelParams {
  double p = 1.0;
  int dim = 1;
  Coupling coupling;
  /// Regularization for |u|^(p-1) at u = 0; zero means the value is taken as 0 there.
  double reg_eps = 0.0;

  ModelParams() = default;
  /// Validates 0 < p < 4/(N-2)^+ and symmetry.
  ModelParams(double p, int dim, Coupling coupling, double reg_eps = 0.0);

  int components() const { return coupling.components(); }
  Regime regime() const;
  /// p * N == 2 exactly in floating point.
  bool critical() const { return p * dim == 2.0; }
  /// Np / (2p + 2), the potential weight in the Pohozaev functional.
  double pohozaev_weight() const { return dim * p / (2.0 * p + 2.0); }
};

}  // namespace mnls
