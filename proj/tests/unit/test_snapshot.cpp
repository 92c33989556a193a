#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "mnls/error.hpp"
#include "mnls/random_fields.hpp"
#include "mnls/snapshot.hpp"

using namespace mnls;

TEST(Snapshot, RoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick_dim(1, 3), pick_m(1, 3), pick_log(2, 5);
  std::uniform_real_distribution<double> pick_len(1.0, 50.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = pick_dim(rng);
    std::vector<int> pts;
    std::vector<double> lens;
    for (int a = 0; a < dim; ++a) {
      pts.push_back(1 << pick_log(rng));
      lens.push_back(pick_len(rng));
    }
    auto g = GridSpec::make(pts, lens);
    const auto u = smooth_random_field(g, pick_m(rng), rng);
    std::stringstream buf;
    write_snapshot(buf, u);
    const auto v = read_snapshot(buf);
    ASSERT_TRUE(same_grid(u.grid(), v.grid()));
    ASSERT_EQ(u.components(), v.components());
    for (int i = 0; i < u.components(); ++i) {
      EXPECT_EQ(std::memcmp(u[i].values().data(), v[i].values().data(), u[i].size() * sizeof(Complex)), 0);
    }
  }
}

TEST(Snapshot, HeaderLayout) {
  auto g = GridSpec::make({4, 8}, {2.0, 3.0});
  FieldVec u(g, 2);
  std::stringstream buf;
  write_snapshot(buf, u);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 8), "MNLSFLD1");
  // magic + N + 2 counts + 2 lengths + M + data
  EXPECT_EQ(bytes.size(), 8u + 4 + 2 * 4 + 2 * 8 + 4 + 2 * 32 * 16);
}

TEST(Snapshot, RejectsBadMagic) {
  std::stringstream buf("NOTAFLD1 and some more bytes");
  EXPECT_THROW(read_snapshot(buf), Error);
}

TEST(Snapshot, RejectsTruncatedData) {
  FieldVec u(GridSpec::cube(1, 16, 4.0), 1);
  std::stringstream buf;
  write_snapshot(buf, u);
  std::stringstream cut(buf.str().substr(0, buf.str().size() - 10));
  EXPECT_THROW(read_snapshot(cut), Error);
}

TEST(Snapshot, MissingFileThrows) {
  EXPECT_THROW(read_snapshot(std::filesystem::path("/nonexistent/field.mnls")), Error);
}
