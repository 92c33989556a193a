#pragma once

#include <cstdint>
#include <random>

#include "mnls/field.hpp"

namespace mnls {

/// Smooth, well-localized random fields: each component is a sum of one to
/// three Gaussian bumps with random complex amplitudes, widths in
/// [0.6, 2.5] and centers within L/8 of the origin.
FieldVec smooth_random_field(const GridPtr& grid, int components, std::mt19937_64& rng);

/// Same family, real and nonnegative amplitudes (no phases).
FieldVec smooth_random_real_field(const GridPtr& grid, int components, std::mt19937_64& rng);

}  // namespace mnls
