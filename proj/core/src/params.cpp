#include "mnls/params.hpp"

#include <cmath>
#include <string>

#include "mnls/error.hpp"

namespace mnls {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "unknown";
}

Coupling::Coupling(int components, std::vector<double> entries)
    : m_(components), k_(std::move(entries)) {
  if (m_ < 1) throw ConfigError("coupling needs at least one component");
  if (k_.size() != static_cast<std::size_t>(m_) * m_) {
    throw ConfigError("coupling for " + std::to_string(m_) + " components needs " +
                      std::to_string(m_ * m_) + " entries, got " + std::to_string(k_.size()));
  }
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < m_; ++j) {
      if (!std::isfinite((*this)(i, j))) throw ConfigError("coupling entries must be finite");
      if ((*this)(i, j) != (*this)(j, i)) {
        throw ConfigError("coupling is not symmetric at (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ")");
      }
    }
  }
}

Coupling Coupling::identity(int components) {
  std::vector<double> k(static_cast<std::size_t>(components) * components, 0.0);
  for (int i = 0; i < components; ++i) k[static_cast<std::size_t>(i) * components + i] = 1.0;
  return Coupling(components, std::move(k));
}

Coupling Coupling::uniform(int components, double value) {
  return Coupling(components, std::vector<double>(static_cast<std::size_t>(components) * components, value));
}

double Coupling::row_sum(int i) const {
  double s = 0.0;
  for (int j = 0; j < m_; ++j) s += (*this)(i, j);
  return s;
}

double Coupling::row_abs_sum(int i) const {
  double s = 0.0;
  for (int j = 0; j < m_; ++j) s += std::abs((*this)(i, j));
  return s;
}

Coupling Coupling::restrict_to(const std::vector<int>& indices) const {
  const int l = static_cast<int>(indices.size());
  std::vector<double> k;
  k.reserve(static_cast<std::size_t>(l) * l);
  for (int a : indices) {
    for (int b : indices) {
      if (a < 0 || a >= m_ || b < 0 || b >= m_) throw ConfigError("component index out of range");
      k.push_back((*this)(a, b));
    }
  }
  return Coupling(l, std::move(k));
}

ModelParams::ModelParams(double p_, int dim_, Coupling coupling_, double reg_eps_)
    : p(p_), dim(dim_), coupling(std::move(coupling_)), reg_eps(reg_eps_) {
  if (dim < 1 || dim > 3) throw ConfigError("dimension must be 1, 2 or 3");
  if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("power p must be positive");
  if (dim >= 3 && !(p < 4.0 / (dim - 2))) {
    throw ConfigError("power p must be below the energy-critical exponent 4/(N-2)");
  }
  if (!(reg_eps >= 0.0)) throw ConfigError("reg_eps must be nonnegative");
  if (coupling.components() < 1) throw ConfigError("coupling matrix is empty");
}

Regime ModelParams::regime() const {
  if (critical()) return Regime::Critical;
  return p * dim < 2.0 ? Regime::Subcritical : Regime::Supercritical;
}

}  // namespace mnls
