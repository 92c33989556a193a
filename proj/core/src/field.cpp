#include "mnls/field.hpp"

#include <algorithm>
#include <cmath>

#include "mnls/error.hpp"

namespace mnls {

namespace {

void require_same(const GridPtr& a, const GridPtr& b) {
  if (!same_grid(a, b)) throw GridMismatchError();
}

}  // namespace

ComponentField::ComponentField(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw ConfigError("field needs a grid");
  values_.assign(grid_->size(), Complex{});
}

ComponentField::ComponentField(GridPtr grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ConfigError("field needs a grid");
  if (values_.size() != grid_->size()) {
    throw ConfigError("field has " + std::to_string(values_.size()) + " values, grid has " +
                      std::to_string(grid_->size()) + " nodes");
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j].real()) || !std::isfinite(values_[j].imag())) {
      throw NonFiniteError("field value", j);
    }
  }
}

ComponentField& ComponentField::operator+=(const ComponentField& other) {
  require_same(grid_, other.grid_);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

ComponentField& ComponentField::operator-=(const ComponentField& other) {
  require_same(grid_, other.grid_);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

ComponentField& ComponentField::operator*=(Complex factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

ComponentField operator+(ComponentField a, const ComponentField& b) { return a += b; }
ComponentField operator-(ComponentField a, const ComponentField& b) { return a -= b; }
ComponentField operator*(Complex factor, ComponentField a) { return a *= factor; }

FieldVec::FieldVec(GridPtr grid, int components) {
  if (components < 1) throw ConfigError("a field vector needs at least one component");
  components_.assign(components, ComponentField(std::move(grid)));
}

FieldVec::FieldVec(std::vector<ComponentField> components) : components_(std::move(components)) {
  if (components_.empty()) throw ConfigError("a field vector needs at least one component");
  for (const auto& c : components_) require_same(components_.front().grid(), c.grid());
}

FieldVec& FieldVec::operator+=(const FieldVec& other) {
  if (other.components() != components()) throw ConfigError("component count mismatch");
  for (int i = 0; i < components(); ++i) components_[i] += other.components_[i];
  return *this;
}

FieldVec& FieldVec::operator*=(Complex factor) {
  for (auto& c : components_) c *= factor;
  return *this;
}

FieldVec operator+(FieldVec a, const FieldVec& b) { return a += b; }

FieldVec operator-(FieldVec a, const FieldVec& b) {
  if (a.components() != b.components()) throw ConfigError("component count mismatch");
  for (int i = 0; i < a.components(); ++i) a[i] -= b[i];
  return a;
}

FieldVec operator*(Complex factor, FieldVec a) { return a *= factor; }

ComponentField sample(const GridPtr& grid, const PointFunction& f) {
  ComponentField out(grid);
  const int n_axes = grid->dim();
  std::vector<double> x(n_axes);
  auto values = out.values();
  for (std::size_t idx = 0; idx < grid->size(); ++idx) {
    std::size_t rest = idx;
    for (int a = 0; a < n_axes; ++a) {
      x[a] = grid->coordinates(a)[rest / grid->stride(a)];
      rest %= grid->stride(a);
    }
    const Complex v = f(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NonFiniteError("sampled value", idx);
    }
    values[idx] = v;
  }
  return out;
}

Complex inner(const ComponentField& a, const ComponentField& b) {
  require_same(a.grid(), b.grid());
  Complex acc{};
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t j = 0; j < av.size(); ++j) acc += std::conj(av[j]) * bv[j];
  return acc * a.grid()->cell_volume();
}

Complex inner(const FieldVec& a, const FieldVec& b) {
  if (a.components() != b.components()) throw ConfigError("component count mismatch");
  Complex acc{};
  for (int i = 0; i < a.components(); ++i) acc += inner(a[i], b[i]);
  return acc;
}

double norm_squared(const ComponentField& a) {
  double acc = 0.0;
  for (const auto& v : a.values()) acc += std::norm(v);
  return acc * a.grid()->cell_volume();
}

double norm_squared(const FieldVec& a) {
  double acc = 0.0;
  for (const auto& c : a) acc += norm_squared(c);
  return acc;
}

double tail_mass_fraction(const FieldVec& u, double shell) {
  const auto& grid = *u.grid();
  const int n_axes = grid.dim();
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    std::size_t rest = idx;
    bool in_shell = false;
    for (int a = 0; a < n_axes; ++a) {
      const double x = grid.coordinates(a)[rest / grid.stride(a)];
      rest %= grid.stride(a);
      if (std::abs(x) > (1.0 - shell) * 0.5 * grid.length(a)) in_shell = true;
    }
    double density = 0.0;
    for (const auto& c : u) density += std::norm(c[idx]);
    total += density;
    if (in_shell) tail += density;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace mnls
