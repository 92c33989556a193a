#include "mnls/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "mnls/error.hpp"

namespace mnls {

namespace {

constexpr std::array<char, 8> kMagic = {'M', 'N', 'L', 'S', 'F', 'L', 'D', '1'};

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error("truncated snapshot");
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const FieldVec& u) {
  const auto& grid = *u.grid();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.dim()));
  for (int n : grid.points()) put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  for (double l : grid.lengths()) put<double>(out, l);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(u.components()));
  for (const auto& c : u) {
    for (const auto& v : c.values()) {
      put<double>(out, v.real());
      put<double>(out, v.imag());
    }
  }
  if (!out) throw Error("failed writing snapshot");
}

FieldVec read_snapshot(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error("not a field snapshot (bad magic)");
  const auto dim = get<std::uint32_t>(in);
  if (dim < 1 || dim > 3) throw Error("snapshot has invalid dimension");
  std::vector<int> points(dim);
  std::vector<double> lengths(dim);
  for (auto& n : points) n = static_cast<int>(get<std::uint32_t>(in));
  for (auto& l : lengths) l = get<double>(in);
  auto grid = GridSpec::make(points, lengths);
  const auto m = get<std::uint32_t>(in);
  if (m < 1) throw Error("snapshot has no components");
  std::vector<ComponentField> comps;
  comps.reserve(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    std::vector<Complex> values(grid->size());
    for (auto& v : values) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      v = {re, im};
    }
    comps.emplace_back(grid, std::move(values));
  }
  return FieldVec(std::move(comps));
}

void write_snapshot(const std::filesystem::path& path, const FieldVec& u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_snapshot(out, u);
}

FieldVec read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace mnls
