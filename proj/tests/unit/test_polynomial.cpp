#include <doctest.h>

#include <cmath>
#include <random>

#include "gllab/errors.hpp"
#include "gllab/geometry.hpp"
#include "gllab/polynomial.hpp"
#include "test_support.hpp"

using gllab::Complex;
using gllab::Polynomial;

namespace {

const Complex I{0.0, 1.0};

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

void check_coeffs(const Polynomial& p, std::initializer_list<Complex> expected) {
  REQUIRE(p.coeffs().size() == expected.size());
  std::size_t k = 0;
  for (const Complex c : expected) CHECK(close(p.coeffs()[k++], c));
}

}  // namespace

TEST_CASE("from_roots expands the product") {
  check_coeffs(Polynomial::from_roots(std::vector<Complex>{0.0, 1.0}), {0.0, -1.0, 1.0});
  check_coeffs(Polynomial::from_roots(std::vector<Complex>{}), {1.0});
  check_coeffs(Polynomial::from_roots(std::vector<Complex>{I, -I}), {1.0, 0.0, 1.0});

  const auto p = Polynomial::from_roots(std::vector<Complex>{2.0, 2.0, -1.0});
  CHECK(p.degree() == 3);
  CHECK(p.leading() == Complex{1.0});
  CHECK(p.has_roots());
  CHECK(p.roots().size() == 3);
}

TEST_CASE("from_coeffs trims trailing zeros") {
  const auto p = Polynomial::from_coeffs({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  CHECK_FALSE(p.has_roots());
  const auto z = Polynomial::from_coeffs({0.0, 0.0});
  CHECK(z.is_zero());
  CHECK(z.degree() == 0);
}

TEST_CASE("evaluate") {
  CHECK(close(gllab::evaluate(Polynomial::from_coeffs({1.0, 0.0, 1.0}), I), 0.0));
  CHECK(close(gllab::evaluate(Polynomial::from_coeffs({0.0, -1.0, 1.0}), 2.0), 2.0));
  CHECK(close(gllab::evaluate(Polynomial::from_roots(std::vector<Complex>{1.0, 2.0, 3.0}), 0.0), -6.0));
}

TEST_CASE("derivative") {
  check_coeffs(gllab::derivative(Polynomial::from_coeffs({1.0, 0.0, 1.0})), {0.0, 2.0});
  check_coeffs(gllab::derivative(Polynomial::from_coeffs({0.0, -3.0, 0.0, 1.0})), {-3.0, 0.0, 3.0});
  const auto d = gllab::derivative(Polynomial::from_coeffs({5.0}));
  CHECK(d.is_zero());
  CHECK(d.degree() == 0);
}

TEST_CASE("degree drops by one under differentiation") {
  std::mt19937_64 rng(11);
  for (int deg = 1; deg <= 40; ++deg) {
    const auto p = Polynomial::from_roots(gllab::testing::disk_samples(rng, deg));
    CHECK(gllab::derivative(p).degree() == deg - 1);
  }
}

TEST_CASE("products and sums") {
  const auto a = Polynomial::from_roots(std::vector<Complex>{1.0});
  const auto b = Polynomial::from_roots(std::vector<Complex>{-1.0});
  const auto ab = a * b;
  CHECK(ab.has_roots());
  check_coeffs(ab, {-1.0, 0.0, 1.0});
  check_coeffs(a + b, {0.0, 2.0});
  const auto c = Polynomial::from_coeffs({1.0, 1.0}) * Polynomial::from_coeffs({-1.0, 1.0});
  CHECK_FALSE(c.has_roots());
  check_coeffs(c, {-1.0, 0.0, 1.0});
}

TEST_CASE("stored roots evaluate to zero within the scale") {
  std::mt19937_64 rng(3);
  const auto roots = gllab::testing::disk_samples(rng, 60);
  const auto p = Polynomial::from_roots(roots);
  for (const Complex a : roots) CHECK(std::abs(p(a)) <= gllab::tolerance::root * p.scale());
}

TEST_CASE("log_derivative") {
  CHECK(close(gllab::log_derivative(Polynomial::from_roots(std::vector<Complex>{0.0}), 2.0), 0.5));
  CHECK(close(gllab::log_derivative(Polynomial::from_roots(std::vector<Complex>{1.0, -1.0}), 0.0), 0.0));

  // high-precision direct summation
  const Complex expected{1.1333333333333333, 0.1};
  const auto rooted = Polynomial::from_roots(std::vector<Complex>{0.0, 1.0, I});
  const auto bare = Polynomial::from_coeffs(rooted.coeffs());
  CHECK(std::abs(gllab::log_derivative(rooted, 3.0) - expected) <= 1e-14);
  CHECK(std::abs(gllab::log_derivative(bare, 3.0) - expected) <= 1e-10 * std::abs(expected));

  CHECK_THROWS_AS(gllab::log_derivative(rooted, 1.0), gllab::SingularPoint);
  CHECK_THROWS_AS(gllab::log_derivative(bare, I), gllab::SingularPoint);
}

TEST_CASE("log-derivative identity on random polynomials") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = 1 + trial % 50;
    const auto roots = gllab::testing::disk_samples(rng, deg);
    const auto rooted = Polynomial::from_roots(roots);
    const auto bare = Polynomial::from_coeffs(rooted.coeffs());
    Complex z;
    double clearance = 0.0;
    do {
      z = {unit(rng), unit(rng)};
      clearance = 1e300;
      for (const Complex a : roots) clearance = std::min(clearance, std::abs(z - a));
    } while (clearance < 0.1);
    const Complex a = gllab::log_derivative(rooted, z);
    const Complex b = gllab::log_derivative(bare, z);
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(b) + 1e-12);
  }
}

TEST_CASE("find_roots on small cases") {
  const auto quad = gllab::find_roots(Polynomial::from_coeffs({1.0, 0.0, 1.0}));
  CHECK(gllab::testing::matching_error(quad, {I, -I}) <= 1e-12);

  const auto cubic = gllab::find_roots(Polynomial::from_coeffs({-1.0, 0.0, 0.0, 1.0}));
  std::vector<Complex> unity;
  for (int k = 0; k < 3; ++k) unity.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 3));
  CHECK(gllab::testing::matching_error(cubic, unity) <= 1e-12);

  const auto zeros = gllab::find_roots(Polynomial::from_coeffs({0.0, 0.0, 2.0, 1.0}));
  CHECK(gllab::testing::matching_error(zeros, {0.0, 0.0, -2.0}) <= 1e-12);

  CHECK_THROWS_AS(gllab::find_roots(Polynomial::from_coeffs({3.0})), std::invalid_argument);
}

TEST_CASE("find_roots residuals are within the backward-error bound") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = Polynomial::from_coeffs(
        Polynomial::from_roots(gllab::testing::disk_samples(rng, 5 + 10 * trial)).coeffs());
    for (const Complex z : gllab::find_roots(p))
      CHECK(std::abs(p(z)) <= gllab::tolerance::root * gllab::evaluation_scale(p, z));
  }
}

TEST_CASE("round trip: 50 uniform disk samples") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const auto roots = gllab::testing::disk_samples(rng, 50);
    const auto p = Polynomial::from_coeffs(Polynomial::from_roots(roots).coeffs());
    CHECK(gllab::testing::matching_error(gllab::find_roots(p), roots) <= 1e-8);
  }
}

TEST_CASE("round trip: well-separated sets up to 100 roots") {
  // jittered lattice in the unit disk, pairwise distance >= 1e-3 by construction
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  for (const int n : {10, 25, 50, 75, 100}) {
    std::vector<Complex> roots;
    const int rings = 1 + static_cast<int>(std::sqrt(n / 3.0));
    for (int ring = 1; static_cast<int>(roots.size()) < n; ring = ring % rings + 1) {
      const double r = 0.95 * ring / rings;
      const int count = std::max(1, 6 * ring);
      for (int k = 0; k < count && static_cast<int>(roots.size()) < n; ++k)
        roots.push_back(std::polar(r, 2.0 * std::numbers::pi * (k + 0.5 * ring) / count) +
                        Complex{jitter(rng), jitter(rng)});
    }
    REQUIRE(gllab::testing::min_pairwise_distance(roots) >= 1e-3);
    const auto p = Polynomial::from_coeffs(Polynomial::from_roots(roots).coeffs());
    CHECK_MESSAGE(gllab::testing::matching_error(gllab::find_roots(p), roots) <= 1e-8, "n = " << n);
  }
}

TEST_CASE("critical points of small polynomials") {
  const auto mid = gllab::critical_points(Polynomial::from_roots(std::vector<Complex>{0.0, 1.0}));
  REQUIRE(mid.size() == 1);
  CHECK(close(mid[0], 0.5));

  const auto sym = gllab::critical_points(Polynomial::from_roots(std::vector<Complex>{-1.0, 0.0, 1.0}));
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(gllab::testing::matching_error(sym, {s, -s}) <= 1e-12);

  const auto bare = gllab::critical_points(Polynomial::from_coeffs({0.0, -1.0, 0.0, 1.0}));
  CHECK(gllab::testing::matching_error(bare, {s, -s}) <= 1e-12);

  // repeated roots are themselves critical points
  const auto rep = gllab::critical_points(Polynomial::from_roots(std::vector<Complex>{2.0, 2.0, 2.0, -1.0}));
  REQUIRE(rep.size() == 3);
  CHECK(gllab::testing::matching_error(rep, {2.0, 2.0, Complex{-0.25}}) <= 1e-9);

  CHECK_THROWS_AS(gllab::critical_points(Polynomial::from_roots(std::vector<Complex>{1.0})),
                  std::invalid_argument);
}

TEST_CASE("critical points agree between the rooted and coefficient paths") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rooted = Polynomial::from_roots(gllab::testing::disk_samples(rng, 3 + trial));
    const auto bare = Polynomial::from_coeffs(rooted.coeffs());
    CHECK(gllab::testing::matching_error(gllab::critical_points(rooted), gllab::critical_points(bare)) <= 1e-7);
  }
}

TEST_CASE("Gauss-Lucas: critical points lie in the hull of the roots") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 50; ++trial) {
    const auto roots = gllab::testing::disk_samples(rng, 20);
    const auto hull = gllab::convex_hull(roots);
    for (const Complex z : gllab::critical_points(Polynomial::from_roots(roots)))
      CHECK(hull.distance(z) <= 1e-9);
  }
}

TEST_CASE("critical points stay accurate at high degree") {
  std::mt19937_64 rng(21);
  const auto roots = gllab::testing::disk_samples(rng, 500);
  const auto p = Polynomial::from_roots(roots);
  const auto crit = gllab::critical_points(p);
  REQUIRE(crit.size() == 499);
  for (const Complex z : crit) {
    Complex s{0.0};
    double scale = 0.0;
    for (const Complex a : roots) {
      s += 1.0 / (z - a);
      scale += 1.0 / std::abs(z - a);
    }
    CHECK(std::abs(s) <= 1e-9 * scale);
  }
}

TEST_CASE("separate_repeated_roots") {
  const std::vector<Complex> roots{1.0, 1.0, 1.0, 0.5};
  const auto j = gllab::separate_repeated_roots(roots, 1e-9, 4);
  CHECK(j.perturbed == 2);
  CHECK(j.magnitude == doctest::Approx(1e-9));
  CHECK(gllab::testing::min_pairwise_distance(j.roots) > 0.0);
  CHECK(gllab::testing::matching_error(j.roots, roots) <= 2e-9);
  CHECK(j.roots[3] == Complex{0.5});
}
