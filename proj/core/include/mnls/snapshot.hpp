#pragma once

#include <filesystem>
#include <iosfwd>

#include "mnls/field.hpp"

namespace mnls {

// Binary field snapshot, little-endian:
//   char[8]   magic "MNLSFLD1"
//   uint32    N (dimension)
//   uint32[N] points per axis
//   float64[N] box length per axis
//   uint32    M (components)
//   M blocks of n^N (float64 re, float64 im) pairs in grid order
void write_snapshot(std::ostream& out, const FieldVec& u);
FieldVec read_snapshot(std::istream& in);

void write_snapshot(const std::filesystem::path& path, const FieldVec& u);
FieldVec read_snapshot(const std::filesystem::path& path);

}  // namespace mnls
