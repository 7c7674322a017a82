#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gllab/errors.hpp"
#include "gllab/geometry.hpp"
#include "test_support.hpp"

using gllab::Complex;
using gllab::ConvexDomain;

namespace {

ConvexDomain unit_square() { return ConvexDomain::polygon({0.0, 1.0, Complex{1.0, 1.0}, Complex{0.0, 1.0}}); }

// diameter of K_eps from the support function: max_theta h(theta) + h(theta + pi) + 2 eps
double sampled_eps_diameter(const ConvexDomain& k, double eps) {
  double best = 0.0;
  constexpr int kSteps = 20000;
  for (int i = 0; i < kSteps; ++i) {
    const double th = std::numbers::pi * i / kSteps;
    best = std::max(best, k.support(th) + k.support(th + std::numbers::pi) + 2.0 * eps);
  }
  return best;
}

}  // namespace

TEST_CASE("contains") {
  const auto disk = ConvexDomain::disk(0.0, 1.0);
  CHECK(gllab::contains(disk, 0.0));
  CHECK_FALSE(gllab::contains(disk, 2.0));
  CHECK(gllab::contains(disk, 1.0));
  CHECK(gllab::contains(unit_square(), Complex{0.5, 0.5}));
  CHECK(gllab::contains(unit_square(), Complex{1.0, 0.3}));
  CHECK_FALSE(gllab::contains(unit_square(), Complex{1.0 + 1e-12, 0.3}));
}

TEST_CASE("distance") {
  CHECK(gllab::distance(ConvexDomain::disk(0.0, 1.0), 3.0) == doctest::Approx(2.0));
  CHECK(gllab::distance(unit_square(), Complex{2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(gllab::distance(unit_square(), Complex{0.3, 0.6}) == 0.0);
  CHECK(gllab::distance(unit_square(), Complex{0.5, -2.0}) == doctest::Approx(2.0));
}

TEST_CASE("diameter") {
  CHECK(gllab::diameter(ConvexDomain::disk(0.0, 1.0)) == doctest::Approx(2.0));
  CHECK(gllab::diameter(unit_square()) == doctest::Approx(std::sqrt(2.0)));
  const auto tri = ConvexDomain::polygon({0.0, 4.0, Complex{1.0, 1.0}});
  CHECK(gllab::diameter(tri) == doctest::Approx(4.0));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = gllab::testing::disk_samples(rng, 40);
    const auto hull = gllab::convex_hull(pts);
    double brute = 0.0;
    for (const Complex a : pts)
      for (const Complex b : pts) brute = std::max(brute, std::abs(a - b));
    CHECK(hull.diameter() == doctest::Approx(brute).epsilon(1e-14));
  }
}

TEST_CASE("degenerate polygons are rejected") {
  CHECK_THROWS_AS(ConvexDomain::polygon({0.0, 1.0, 2.0}), gllab::InvalidDomain);
  CHECK_THROWS_AS(ConvexDomain::polygon({0.0, 1.0}), gllab::InvalidDomain);
  CHECK_THROWS_AS(ConvexDomain::disk(0.0, 0.0), gllab::InvalidDomain);
  // bow tie
  CHECK_THROWS_AS(ConvexDomain::polygon({0.0, Complex{1.0, 1.0}, 1.0, Complex{0.0, 1.0}}), gllab::InvalidDomain);
  // reflex vertex
  CHECK_THROWS_AS(ConvexDomain::polygon({0.0, 2.0, Complex{1.0, 0.5}, Complex{2.0, 2.0}, Complex{0.0, 2.0}}),
                  gllab::InvalidDomain);
}

TEST_CASE("polygon construction normalises orientation and collinear vertices") {
  const auto cw = ConvexDomain::polygon({0.0, Complex{0.0, 1.0}, Complex{1.0, 1.0}, 1.0});
  CHECK(gllab::cross(cw.vertices()[1] - cw.vertices()[0], cw.vertices()[2] - cw.vertices()[1]) > 0.0);
  const auto merged = ConvexDomain::polygon({0.0, 0.5, 1.0, Complex{1.0, 1.0}, Complex{0.0, 1.0}, 0.0});
  CHECK(merged.vertices().size() == 4);
}

TEST_CASE("neighborhood_contains") {
  const auto disk = ConvexDomain::disk(0.0, 1.0);
  CHECK(gllab::neighborhood_contains(disk, 0.5, 1.4));
  CHECK_FALSE(gllab::neighborhood_contains(disk, 0.5, 1.6));
  CHECK_THROWS_AS(gllab::neighborhood_contains(disk, 0.0, 0.0), gllab::InvalidEpsilon);
  CHECK_THROWS_AS(gllab::Neighborhood(disk, -1.0), gllab::InvalidEpsilon);

  const gllab::Neighborhood nb(unit_square(), 0.25);
  CHECK(nb.contains(Complex{1.2, 1.1}));
  CHECK_FALSE(nb.contains(Complex{1.2, 1.2}));
}

TEST_CASE("monotonicity: K is inside K_eps") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  const ConvexDomain shapes[] = {ConvexDomain::disk(Complex{0.1, -0.2}, 0.7), unit_square(),
                                 ConvexDomain::polygon({Complex{-1.0, -0.5}, Complex{1.0, -0.2}, Complex{0.3, 1.0}})};
  for (const auto& k : shapes) {
    for (int i = 0; i < 2000; ++i) {
      const Complex z{coord(rng), coord(rng)};
      if (k.contains(z)) {
        for (const double eps : {1e-9, 0.01, 1.0}) CHECK(gllab::neighborhood_contains(k, eps, z));
      }
    }
  }
}

TEST_CASE("diameter of K_eps is diameter K + 2 eps") {
  for (const auto& k : {ConvexDomain::disk(Complex{0.3, 0.1}, 1.3), unit_square(),
                        ConvexDomain::polygon({Complex{-1.0, -0.5}, Complex{1.0, -0.2}, Complex{0.3, 1.0}})}) {
    for (const double eps : {0.1, 0.5, 2.0}) {
      const double sampled = sampled_eps_diameter(k, eps);
      CHECK(std::abs(sampled - (k.diameter() + 2.0 * eps)) <= 1e-7 * (1.0 + sampled));
    }
  }
}

TEST_CASE("distance is 1-Lipschitz") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  const auto k = ConvexDomain::polygon({Complex{-1.0, -0.5}, Complex{1.0, -0.2}, Complex{1.2, 0.7}, Complex{0.3, 1.0}});
  for (int i = 0; i < 5000; ++i) {
    const Complex a{coord(rng), coord(rng)};
    const Complex b{coord(rng), coord(rng)};
    CHECK(std::abs(k.distance(a) - k.distance(b)) <= std::abs(a - b) + 1e-14);
  }
}

TEST_CASE("convex_hull") {
  const auto tri = gllab::convex_hull(std::vector<Complex>{0.0, 1.0, Complex{0.0, 1.0}});
  CHECK(tri.vertices().size() == 3);
  const auto same = gllab::convex_hull(std::vector<Complex>{0.0, 1.0, Complex{0.0, 1.0}, Complex{0.25, 0.25}});
  CHECK(same.vertices().size() == 3);
  for (const Complex v : same.vertices()) CHECK((v == Complex{0.0} || v == Complex{1.0} || v == Complex{0.0, 1.0}));

  CHECK_THROWS_AS(gllab::convex_hull(std::vector<Complex>{0.0, 1.0, 2.0}), gllab::DegenerateHull);
  CHECK_THROWS_AS(gllab::convex_hull(std::vector<Complex>{0.0, 1.0}), gllab::DegenerateHull);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = gllab::testing::disk_samples(rng, 100);
    const auto hull = gllab::convex_hull(pts);
    for (const Complex z : pts) CHECK(hull.distance(z) <= 1e-12);
  }
}

TEST_CASE("outline and boundary points") {
  const auto sq = unit_square();
  CHECK(sq.perimeter() == doctest::Approx(4.0));
  CHECK(std::abs(sq.boundary_point(0.375) - Complex{1.0, 0.5}) < 1e-12);
  for (const Complex z : sq.outline(0.3, 64)) CHECK(sq.distance(z) == doctest::Approx(0.3));
  const auto disk = ConvexDomain::disk(Complex{1.0, 1.0}, 2.0);
  for (const Complex z : disk.outline(0.5, 32)) CHECK(disk.distance(z) == doctest::Approx(0.5));
}
