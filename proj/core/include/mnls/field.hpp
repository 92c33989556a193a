#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "mnls/grid.hpp"

namespace mnls {

/// One complex scalar field u_i sampled on a grid.
class ComponentField {
 public:
  ComponentField() = default;
  /// Zero field.
  explicit ComponentField(GridPtr grid);
  /// Takes ownership of `values`; size must match the grid and every value must be finite.
  ComponentField(GridPtr grid, std::vector<Complex> values);

  const GridPtr& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  std::size_t size() const { return values_.size(); }
  Complex operator[](std::size_t j) const { return values_[j]; }
  Complex& operator[](std::size_t j) { return values_[j]; }

  ComponentField& operator+=(const ComponentField& other);
  ComponentField& operator-=(const ComponentField& other);
  ComponentField& operator*=(Complex factor);

 private:
  GridPtr grid_;
  std::vector<Complex> values_;
};

ComponentField operator+(ComponentField a, const ComponentField& b);
ComponentField operator-(ComponentField a, const ComponentField& b);
ComponentField operator*(Complex factor, ComponentField a);

/// U = (u_1, ..., u_M) on one shared grid.
class FieldVec {
 public:
  FieldVec() = default;
  /// M zero components.
  FieldVec(GridPtr grid, int components);
  /// Components must be non-empty and share one grid.
  explicit FieldVec(std::vector<ComponentField> components);

  int components() const { return static_cast<int>(components_.size()); }
  const GridPtr& grid() const { return components_.front().grid(); }
  const ComponentField& operator[](int i) const { return components_[i]; }
  ComponentField& operator[](int i) { return components_[i]; }
  auto begin() const { return components_.begin(); }
  auto end() const { return components_.end(); }
  auto begin() { return components_.begin(); }
  auto end() { return components_.end(); }

  FieldVec& operator+=(const FieldVec& other);
  FieldVec& operator*=(Complex factor);

 private:
  std::vector<ComponentField> components_;
};

FieldVec operator+(FieldVec a, const FieldVec& b);
FieldVec operator-(FieldVec a, const FieldVec& b);
FieldVec operator*(Complex factor, FieldVec a);

using PointFunction = std::function<Complex(std::span<const double>)>;

/// Evaluates f at every node. Throws NonFiniteError naming the first bad node.
ComponentField sample(const GridPtr& grid, const PointFunction& f);

/// L2 pairing sum conj(a_j) b_j h^N.
Complex inner(const ComponentField& a, const ComponentField& b);
/// Sum of component pairings.
Complex inner(const FieldVec& a, const FieldVec& b);

double norm_squared(const ComponentField& a);
double norm_squared(const FieldVec& a);

/// Fraction of the total L2 mass sitting where any |x_a| exceeds
/// (1 - shell) * L_a / 2. Zero for the zero field.
double tail_mass_fraction(const FieldVec& u, double shell = 0.1);

}  // namespace mnls
