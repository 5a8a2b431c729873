#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>

#include "hgr/transforms.hpp"
#include "oracle_helpers.hpp"

using hgr::GridHierarchy;
using hgr::ndarray;

namespace {

template <class T>
double max_abs_diff(const ndarray<T>& a, const ndarray<T>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(double(a[i]) - double(b[i])));
  return m;
}

template <class T>
double max_abs(const ndarray<T>& a) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(double(a[i])));
  return m;
}

}  // namespace

TEST_CASE("midpoint interpolation on a uniform line is the average") {
  GridHierarchy g({{0, 1, 2, 3, 4}});
  ndarray<double> coarse({3}, {6, 0, 2});
  auto fine = hgr::interpolate_to_fine(coarse, g, 2);
  CHECK(fine.values() == std::vector<double>{6, 3, 0, 1, 2});
}

TEST_CASE("interpolation reproduces constants") {
  auto g = GridHierarchy({oracle::random_coords(9, 3), oracle::random_coords(5, 4)});
  for (int l = 1; l <= g.levels(); ++l) {
    ndarray<double> coarse(g.level_extents(l - 1));
    for (auto& v : coarse.values()) v = 7.25;
    auto fine = hgr::interpolate_to_fine(coarse, g, l);
    for (std::size_t i = 0; i < fine.size(); ++i) CHECK(fine[i] == Catch::Approx(7.25).epsilon(1e-14));
  }
}

TEST_CASE("nonuniform weights follow the spacing ratio") {
  GridHierarchy g({{0, 1, 3}});
  ndarray<double> coarse({2}, {0, 3});
  auto fine = hgr::interpolate_to_fine(coarse, g, 1);
  CHECK(fine[1] == Catch::Approx(1.0).epsilon(1e-15));  // (2/3)*0 + (1/3)*3
}

TEST_CASE("coefficients of the sampled quadratic") {
  GridHierarchy g({{0, 1, 2, 3, 4}});
  ndarray<double> data({5}, {6, 2, 0, 0, 2});  // x^2 - 5x + 6 at 0..4
  auto coeffs = hgr::compute_coefficients(data, g, 2);
  CHECK(coeffs.values() == std::vector<double>{0, -1, 0, -1, 0});
}

TEST_CASE("affine data annihilates coefficients") {
  auto g = GridHierarchy({oracle::random_coords(17, 5), oracle::random_coords(9, 6)});
  ndarray<double> data(g.finest_extents());
  for (std::size_t i = 0; i < 17; ++i)
    for (std::size_t j = 0; j < 9; ++j)
      data[i * 9 + j] = 3.0 * g.coords(0)[i] - 1.5 * g.coords(1)[j] + 0.25;
  for (int l = 1; l <= g.levels(); ++l) {
    ndarray<double> level_data(g.level_extents(l));
    const std::size_t stride = g.level_stride(l);
    std::size_t k = 0;
    for (std::size_t i = 0; i < 17; i += stride)
      for (std::size_t j = 0; j < 9; j += stride) level_data[k++] = data[i * 9 + j];
    auto coeffs = hgr::compute_coefficients(level_data, g, l);
    CHECK(max_abs(coeffs) <= 1e-12 * max_abs(data));
  }
}

TEST_CASE("2D bump coefficient at the center") {
  auto g = GridHierarchy::uniform({3, 3});
  ndarray<double> data({3, 3}, {0, 0, 0, 0, 1, 0, 0, 0, 0});  // [0,1,0] outer [0,1,0]
  auto coeffs = hgr::compute_coefficients(data, g, 1);
  CHECK(coeffs.values() == std::vector<double>{0, 0, 0, 0, 1, 0, 0, 0, 0});
}

TEST_CASE("apply_coefficients inverts compute_coefficients") {
  GridHierarchy g({{0, 1, 2, 3, 4}});
  ndarray<double> coarse({3}, {6, 0, 2});
  ndarray<double> coeffs({5}, {0, -1, 0, -1, 0});
  auto fine = hgr::apply_coefficients(coarse, coeffs, g, 2);
  CHECK(fine.values() == std::vector<double>{6, 2, 0, 0, 2});

  ndarray<double> zero({5});
  auto interp_only = hgr::apply_coefficients(coarse, zero, g, 2);
  CHECK(interp_only.values() == std::vector<double>{6, 3, 0, 1, 2});
}

TEST_CASE("compute/apply round trip on random data") {
  auto g = GridHierarchy(
      {oracle::random_coords(9, 11), oracle::random_coords(9, 12), oracle::random_coords(5, 13)});
  ndarray<double> data(g.finest_extents(), oracle::random_values<double>(9 * 9 * 5, 21));
  const int l = g.levels();
  auto coeffs = hgr::compute_coefficients(data, g, l);
  // restriction of the data to the coarse grid
  ndarray<double> coarse(g.level_extents(l - 1));
  std::size_t k = 0;
  for (std::size_t i = 0; i < 9; i += 2)
    for (std::size_t j = 0; j < 9; j += 2)
      for (std::size_t m = 0; m < 5; m += 2) coarse[k++] = data[(i * 9 + j) * 5 + m];
  auto back = hgr::apply_coefficients(coarse, coeffs, g, l);
  CHECK(max_abs_diff(back, data) <= 1e-12 * max_abs(data));
}

TEST_CASE("coefficient computation is linear") {
  auto g = GridHierarchy({oracle::random_coords(9, 31), oracle::random_coords(9, 32)});
  auto u = ndarray<double>(g.finest_extents(), oracle::random_values<double>(81, 41));
  auto v = ndarray<double>(g.finest_extents(), oracle::random_values<double>(81, 42));
  const double a = 2.75, b = -0.5;
  ndarray<double> mix(g.finest_extents());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * u[i] + b * v[i];
  auto cu = hgr::compute_coefficients(u, g, g.levels());
  auto cv = hgr::compute_coefficients(v, g, g.levels());
  auto cm = hgr::compute_coefficients(mix, g, g.levels());
  double scale = std::max(max_abs(u), max_abs(v));
  for (std::size_t i = 0; i < cm.size(); ++i)
    CHECK(cm[i] == Catch::Approx(a * cu[i] + b * cv[i]).margin(1e-12 * scale));
}

TEST_CASE("a node odd in m dimensions reads exactly 2^m coarse neighbors") {
  auto g = GridHierarchy::uniform({5, 5, 5});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  // probe node (1,2,1): odd in dims 0 and 2 -> neighbors (0|2, 1, 0|2) of the
  // coarse grid; poison everything else and expect a finite interpolant there
  ndarray<double> coarse({3, 3, 3});
  for (auto& v : coarse.values()) v = nan;
  for (std::size_t i : {0u, 1u})
    for (std::size_t k : {0u, 1u}) coarse[(i * 3 + 1) * 3 + k] = 1.0;
  auto fine = hgr::interpolate_to_fine(coarse, g, 2);
  CHECK(fine[(1 * 5 + 2) * 5 + 1] == Catch::Approx(1.0));
  // probe node (1,1,1): odd in all three -> needs all 8 corners
  for (auto& v : coarse.values()) v = nan;
  for (std::size_t i : {0u, 1u})
    for (std::size_t j : {0u, 1u})
      for (std::size_t k : {0u, 1u}) coarse[(i * 3 + j) * 3 + k] = 2.0;
  fine = hgr::interpolate_to_fine(coarse, g, 2);
  CHECK(fine[(1 * 5 + 1) * 5 + 1] == Catch::Approx(2.0));
  // and with one corner poisoned the trilinear blend must break
  coarse[0] = nan;
  fine = hgr::interpolate_to_fine(coarse, g, 2);
  CHECK(std::isnan(fine[(1 * 5 + 1) * 5 + 1]));
}

TEST_CASE("shape and level validation") {
  auto g = GridHierarchy::uniform({5});
  ndarray<double> wrong({4});
  CHECK_THROWS_AS(hgr::interpolate_to_fine(wrong, g, 2), hgr::error);
  CHECK_THROWS_AS(hgr::compute_coefficients(wrong, g, 2), hgr::error);
  CHECK_THROWS_AS(hgr::compute_coefficients(ndarray<double>({5}), g, 3), hgr::error);
  CHECK_THROWS_AS(hgr::compute_coefficients(ndarray<double>({5}), g, 0), hgr::error);
  CHECK_THROWS_AS(
      hgr::apply_coefficients(ndarray<double>({3}), ndarray<double>({4}), g, 2), hgr::error);
}

TEST_CASE("worker partitioning does not change results") {
  auto g = GridHierarchy({oracle::random_coords(33, 51), oracle::random_coords(33, 52)});
  ndarray<double> data(g.finest_extents(), oracle::random_values<double>(33 * 33, 53));
  hgr::set_worker_count(1);
  auto serial = hgr::compute_coefficients(data, g, g.levels());
  hgr::set_worker_count(4);
  auto parallel = hgr::compute_coefficients(data, g, g.levels());
  hgr::set_worker_count(0);
  CHECK(serial.values() == parallel.values());  // bit-identical
}

TEST_CASE("float arrays take the same paths") {
  auto g = GridHierarchy::uniform({9, 9});
  ndarray<float> data(g.finest_extents(), oracle::random_values<float>(81, 61));
  auto coeffs = hgr::compute_coefficients(data, g, g.levels());
  ndarray<float> coarse(g.level_extents(g.levels() - 1));
  std::size_t k = 0;
  for (std::size_t i = 0; i < 9; i += 2)
    for (std::size_t j = 0; j < 9; j += 2) coarse[k++] = data[i * 9 + j];
  auto back = hgr::apply_coefficients(coarse, coeffs, g, g.levels());
  CHECK(max_abs_diff(back, data) <= 1e-6 * max_abs(data));
}
