#include <gtest/gtest.h>

#include "ma/errors.hpp"
#include "ma/grid.hpp"

#include <cmath>
#include <sstream>

namespace {

using ma::GridFunction;
using ma::make_grid;
using ma::Point;

TEST(Grid, SpacingAndSize) {
  const auto g2 = make_grid(2, 31);
  EXPECT_DOUBLE_EQ(g2.h(), 1.0 / 30.0);
  EXPECT_EQ(g2.size(), 961u);

  const auto g3 = make_grid(3, 7);
  EXPECT_DOUBLE_EQ(g3.h(), 1.0 / 6.0);
  EXPECT_EQ(g3.size(), 343u);
}

TEST(Grid, RejectsBadShape) {
  EXPECT_THROW(make_grid(2, 2), ma::ConfigError);
  EXPECT_THROW(make_grid(1, 9), ma::ConfigError);
  EXPECT_THROW(make_grid(4, 9), ma::ConfigError);
}

TEST(Grid, ClassifyCounts) {
  auto interior_count = [](const ma::GridSpec& g) {
    const auto tags = ma::classify(g);
    std::size_t n = 0;
    for (auto t : tags) n += t == ma::PointClass::interior;
    return n;
  };
  EXPECT_EQ(interior_count(make_grid(2, 3)), 1u);
  EXPECT_EQ(make_grid(2, 3).size() - interior_count(make_grid(2, 3)), 8u);
  EXPECT_EQ(interior_count(make_grid(2, 31)), 29u * 29u);
  EXPECT_EQ(interior_count(make_grid(3, 7)), 125u);
  EXPECT_EQ(make_grid(3, 7).interior_size(), 125u);
}

TEST(Grid, CoordinateIndexRoundTrip) {
  for (auto g : {make_grid(2, 9), make_grid(3, 5)}) {
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto idx = g.index_of(g.coordinate(p));
      ASSERT_TRUE(idx.has_value());
      EXPECT_EQ(*idx, p);
      EXPECT_EQ(g.flat_index(g.multi_index(p)), p);
    }
  }
  EXPECT_FALSE(make_grid(2, 9).index_of({0.01, 0.5, 0.0}).has_value());
}

TEST(Grid, FlatOrderIsXFastest) {
  const auto g = make_grid(2, 5);
  EXPECT_DOUBLE_EQ(g.coordinate(1)[0], 0.25);
  EXPECT_DOUBLE_EQ(g.coordinate(1)[1], 0.0);
  EXPECT_DOUBLE_EQ(g.coordinate(5)[1], 0.25);
}

TEST(Sample, ConstantAndLinear) {
  const auto ones = ma::sample(make_grid(2, 31), [](const Point&) { return 1.0; });
  for (double v : ones.values()) EXPECT_EQ(v, 1.0);

  const auto u = ma::sample(make_grid(2, 3), [](const Point& x) { return x[0] + x[1]; });
  const double expected[] = {0.0, 0.5, 1.0, 0.5, 1.0, 1.5, 1.0, 1.5, 2.0};
  for (std::size_t p = 0; p < 9; ++p) EXPECT_DOUBLE_EQ(u[p], expected[p]);
}

TEST(Sample, NonFiniteIsDataError) {
  EXPECT_THROW(ma::sample(make_grid(2, 3), [](const Point& x) { return 1.0 / (x[0] - 0.5); }), ma::DataError);
}

TEST(Interpolate, ExactForMultilinear) {
  auto bilinear = [](const Point& x) { return 1.0 + 2.0 * x[0] - x[1] + 3.0 * x[0] * x[1]; };
  const auto u = ma::sample(make_grid(2, 7), bilinear);
  for (Point x : {Point{0.13, 0.71, 0.0}, Point{1.0, 0.3, 0.0}, Point{0.0, 0.0, 0.0}}) {
    EXPECT_NEAR(ma::interpolate(u, x), bilinear(x), 1e-14);
  }
  const auto fine = ma::resample(u, make_grid(2, 13));
  EXPECT_NEAR(fine[fine.grid().flat_index({3, 5, 0})], bilinear(fine.grid().coordinate({3, 5, 0})), 1e-14);
}

TEST(Csv, RoundTripIsExact) {
  const auto g = make_grid(3, 5);
  const auto u = ma::sample(g, [](const Point& x) { return x[0] * x[0] - x[1] / 3.0 + x[2] * x[0]; });
  std::stringstream ss;
  ma::write_csv(ss, u);
  const auto back = ma::read_csv(ss, g);
  for (std::size_t p = 0; p < g.size(); ++p) EXPECT_EQ(back[p], u[p]);

  std::stringstream bad("x,y,value\n0,0\n");
  EXPECT_THROW(ma::read_csv(bad, make_grid(2, 3)), ma::DataError);
}

TEST(Boundary, LatticeInterpolationIsLinearAlongFaces) {
  const auto g = make_grid(2, 3);
  const auto data = ma::BoundaryData::from_field([](const Point& x) { return x[0] * x[0]; });
  EXPECT_DOUBLE_EQ(data.on_lattice(g, {0.5, 0.0, 0.0}), 0.25);
  // Halfway between (0,0) and (0.5,0): mean of 0 and 0.25, not 0.0625.
  EXPECT_DOUBLE_EQ(data.on_lattice(g, {0.25, 0.0, 0.0}), 0.125);
  EXPECT_DOUBLE_EQ(data({0.25, 0.0, 0.0}), 0.0625);
}

TEST(Boundary, ApplyOverwritesBoundaryOnly) {
  const auto g = make_grid(2, 5);
  const auto data = ma::BoundaryData::from_field([](const Point&) { return 7.0; });
  const auto u = data.apply(GridFunction(g, -1.0));
  for (std::size_t p = 0; p < g.size(); ++p) EXPECT_EQ(u[p], g.is_boundary(p) ? 7.0 : -1.0);

  const auto from_samples = ma::BoundaryData::from_samples(u);
  EXPECT_EQ(from_samples({0.0, 0.5, 0.0}), 7.0);
}

}  // namespace
