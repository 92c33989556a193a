#include "mnls/random_fields.hpp"

#include <cmath>
#include <numbers>

namespace mnls {

namespace {

FieldVec random_bumps(const GridPtr& grid, int components, std::mt19937_64& rng, bool complex_phase) {
  std::uniform_int_distribution<int> bump_count(1, 3);
  std::uniform_real_distribution<double> amplitude(0.2, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> width(0.6, 2.5);
  std::vector<ComponentField> comps;
  comps.reserve(components);
  for (int i = 0; i < components; ++i) {
    ComponentField field(grid);
    const int bumps = bump_count(rng);
    for (int b = 0; b < bumps; ++b) {
      const Complex amp = complex_phase ? std::polar(amplitude(rng), phase(rng))
                                        : Complex(amplitude(rng), 0.0);
      const double w = width(rng);
      std::vector<double> centre(grid->dim());
      for (int a = 0; a < grid->dim(); ++a) {
        std::uniform_real_distribution<double> c(-grid->length(a) / 8.0, grid->length(a) / 8.0);
        centre[a] = c(rng);
      }
      field += sample(grid, [&](std::span<const double> x) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - centre[a]) * (x[a] - centre[a]);
        return amp * std::exp(-0.5 * r2 / (w * w));
      });
    }
    comps.push_back(std::move(field));
  }
  return FieldVec(std::move(comps));
}

}  // namespace

FieldVec smooth_random_field(const GridPtr& grid, int components, std::mt19937_64& rng) {
  return random_bumps(grid, components, rng, true);
}

FieldVec smooth_random_real_field(const GridPtr& grid, int components, std::mt19937_64& rng) {
  return random_bumps(grid, components, rng, false);
}

}  // namespace mnls
