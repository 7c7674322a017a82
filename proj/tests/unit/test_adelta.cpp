#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gllab/adelta.hpp"
#include "gllab/contour.hpp"
#include "gllab/errors.hpp"
#include "test_support.hpp"

using gllab::Box;
using gllab::Complex;
using gllab::ConvexDomain;
using gllab::RootSplit;

namespace {

const ConvexDomain kDisk = ConvexDomain::disk(0.0, 1.0);

RootSplit two_plus_one() { return RootSplit(kDisk, {-0.5, 0.5}, {3.0}); }

}  // namespace

TEST_CASE("RootSplit enforces membership") {
  CHECK_NOTHROW(RootSplit(kDisk, {0.0}, {2.0}));
  CHECK_THROWS_AS(RootSplit(kDisk, {2.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(RootSplit(kDisk, {0.0}, {0.5}), std::invalid_argument);
  const auto s = RootSplit::classify(kDisk, std::vector<Complex>{0.2, 3.0, Complex{0.0, -0.9}, -4.0});
  CHECK(s.inside().size() == 2);
  CHECK(s.outside().size() == 2);
  CHECK(s.p().degree() == 4);
  CHECK(s.q().degree() == 2);
  CHECK(s.r().degree() == 2);
}

TEST_CASE("adelta_indicator values") {
  const RootSplit s(kDisk, {-1.0, 1.0}, {5.0});
  CHECK(gllab::adelta_indicator(s, 0.01, 0.0) == doctest::Approx(-0.202).epsilon(1e-14));
  CHECK(gllab::adelta_indicator(s, 0.01, 1.5) == doctest::Approx(2.111428571428571).epsilon(1e-14));
  CHECK_THROWS_AS(gllab::adelta_indicator(s, 0.01, 1.0), gllab::SingularPoint);
  CHECK_THROWS_AS(gllab::adelta_indicator(s, 0.01, 5.0), gllab::SingularPoint);
}

TEST_CASE("critical points satisfy g <= -delta/|r|") {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 50; ++trial) {
    auto inside = gllab::testing::disk_samples(rng, 3 + trial % 8);
    std::vector<Complex> outside;
    for (const Complex z : gllab::testing::disk_samples(rng, 1 + trial % 3, 1.0, 0.0)) outside.push_back(2.5 * z / std::abs(z));
    const RootSplit s(kDisk, inside, outside);
    for (const Complex z : gllab::critical_points(s.p())) {
      const double r_abs = std::abs(s.r()(z));
      CHECK(gllab::adelta_indicator(s, 1e-3, z) <= -1e-3 / r_abs + 1e-9 * (1.0 + 1e-3 / r_abs));
    }
  }
}

TEST_CASE("two inside roots and one far root") {
  const auto s = two_plus_one();
  const Box bbox = gllab::default_bbox(s, kDisk, 0.25);
  const auto crit = gllab::critical_points(s.p());
  const auto mask = gllab::build_mask(s, 1e-3, bbox, 200.0, crit);
  CHECK(mask.components >= 2);

  // label ids are dense and partition the nonpositive cells
  std::vector<int> seen(static_cast<std::size_t>(mask.components), 0);
  for (std::size_t i = 0; i < mask.labels.size(); ++i) {
    CHECK((mask.labels[i] >= 0) == (mask.indicator[i] <= 1e-14));
    if (mask.labels[i] >= 0) seen[static_cast<std::size_t>(mask.labels[i])] = 1;
  }
  for (const int v : seen) CHECK(v == 1);

  // bbox edge cells lie outside A_delta
  for (int ix = 0; ix < mask.nx; ++ix) {
    CHECK(mask.labels[mask.index(ix, 0)] < 0);
    CHECK(mask.labels[mask.index(ix, mask.ny - 1)] < 0);
  }

  const auto reports = gllab::classify_components(mask, s, kDisk, 0.25);
  Complex far_crit = crit[0];
  for (const Complex z : crit)
    if (z.real() > far_crit.real()) far_crit = z;
  CHECK(far_crit.real() > 1.0);
  const int far = mask.label_at(far_crit);
  REQUIRE(far >= 0);
  const auto& rep = reports[static_cast<std::size_t>(far)];
  CHECK_FALSE(rep.touches_K);
  CHECK(rep.r_roots_inside == 1);
  REQUIRE(rep.crit_points_inside.has_value());
  CHECK(*rep.crit_points_inside == 1);
  CHECK(rep.rouche_margin > 0.0);
}

TEST_CASE("critical points are always captured") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const auto inside = gllab::testing::disk_samples(rng, 4 + trial % 6);
    std::vector<Complex> outside;
    for (int j = 0; j <= trial % 3; ++j) outside.push_back(std::polar(1.3 + 0.5 * j, 1.7 * j + 0.3 * trial));
    const RootSplit s(kDisk, inside, outside);
    const auto crit = gllab::critical_points(s.p());
    const std::vector<double> deltas{1e-2, 1e-3, 1e-4};
    Box bbox = gllab::default_bbox(s, kDisk, 0.25);
    std::vector<gllab::RegionMask> masks;
    for (int attempt = 0; attempt < 4 && masks.empty(); ++attempt) {
      try {
        masks = gllab::build_masks(s, deltas, bbox, 200.0, crit);
      } catch (const gllab::GrowBBox& g) {
        bbox = g.suggested();
      }
    }
    REQUIRE(masks.size() == 3);
    for (const auto& mask : masks)
      for (const Complex z : crit) CHECK(mask.label_at(z) >= 0);

    // nesting: A_delta grows with delta
    for (std::size_t i = 0; i < masks[0].labels.size(); ++i) {
      if (masks[2].labels[i] >= 0) CHECK(masks[1].labels[i] >= 0);
      if (masks[1].labels[i] >= 0) CHECK(masks[0].labels[i] >= 0);
    }
  }
}

TEST_CASE("without outside roots A_delta shrinks with delta") {
  const RootSplit s(kDisk, {Complex{-0.5, 0.1}, Complex{0.4, 0.3}, Complex{0.1, -0.6}}, {});
  // fine grid over K so that the delta = 0.1 components span many cells
  const Box bbox{-1.0, 1.0, -1.0, 1.0};
  const std::vector<double> deltas{1e-1, 1e-2, 1e-3};
  const auto masks = gllab::build_masks(s, deltas, bbox, 1000.0, gllab::critical_points(s.p()));
  std::vector<std::size_t> areas;
  for (const auto& mask : masks) {
    std::size_t area = 0;
    for (const int l : mask.labels) area += l >= 0 ? 1 : 0;
    areas.push_back(area);
    CHECK(mask.components == 2);
    const auto b = gllab::bridging_check(s, mask.delta, kDisk, 0.5, mask);
    CHECK_FALSE(b.bridge);
  }
  CHECK(areas[1] <= areas[0]);
  CHECK(areas[2] <= areas[1]);
  CHECK(areas[2] < areas[0]);
  for (std::size_t i = 0; i < masks[2].labels.size(); ++i)
    if (masks[2].labels[i] >= 0) CHECK(masks[1].labels[i] >= 0);
}

TEST_CASE("GrowBBox is raised when A_delta reaches the edge") {
  const auto s = two_plus_one();
  // at delta = 1 the component around the critical point near 0 has radius ~0.08
  const Box small{-0.05, 0.05, -0.05, 0.05};
  CHECK_THROWS_AS(gllab::build_mask(s, 1.0, small, 200.0), gllab::GrowBBox);
  // a witness outside the box
  const Box box{-2.0, 2.0, -2.0, 2.0};
  CHECK_THROWS_AS(gllab::build_mask(s, 1e-3, box, 20.0, std::vector<Complex>{5.0}), gllab::GrowBBox);
}

TEST_CASE("traced boundaries enclose their component") {
  const auto s = two_plus_one();
  const auto mask = gllab::build_mask(s, 1e-2, gllab::default_bbox(s, kDisk, 0.25), 100.0,
                                      gllab::critical_points(s.p()));
  const auto loops = gllab::trace_boundaries(mask);
  REQUIRE(static_cast<int>(loops.size()) == mask.components);
  for (int c = 0; c < mask.components; ++c) {
    // every vertex sits within half a cell of the cell-edge outline, so the
    // signed area differs from the cell area by at most h/2 per boundary edge
    const double h = mask.cell_size();
    double area = 0.0;
    std::size_t edges = 0;
    for (const auto& loop : loops[static_cast<std::size_t>(c)]) {
      CHECK(loop.front() == loop.back());
      for (std::size_t i = 1; i < loop.size(); ++i) {
        area += 0.5 * gllab::cross(loop[i - 1], loop[i]);
        edges += static_cast<std::size_t>(std::ceil(std::abs(loop[i] - loop[i - 1]) / (0.5 * h)));
      }
    }
    const double cells = static_cast<double>(mask.cell_count_per_component()[static_cast<std::size_t>(c)]) * h * h;
    CHECK(area > 0.0);
    CHECK(std::abs(area - cells) <= 0.5 * h * h * static_cast<double>(edges));
    // interpolated vertices lie on the zero level of the indicator
    for (const auto& loop : loops[static_cast<std::size_t>(c)])
      for (const Complex z : loop) CHECK(std::abs(gllab::adelta_indicator(s, 1e-2, z)) <= 0.05);
  }
}

TEST_CASE("bridging on a tight configuration") {
  const RootSplit s(kDisk, {-0.5, 0.5}, {});
  const auto mask = gllab::build_mask(s, 1e-3, Box{-2.0, 2.0, -2.0, 2.0}, 100.0, gllab::critical_points(s.p()));
  const auto verdict = gllab::bridging_check(s, 1e-3, kDisk, 0.5, mask);
  CHECK_FALSE(verdict.bridge);
  CHECK(verdict.witness.empty());
  CHECK_THROWS_AS(gllab::bridging_check(s, 1e-2, kDisk, 0.5, mask), std::invalid_argument);
}

TEST_CASE("adversarial: three outside roots on a ray") {
  // m = n leaves A_delta possibly unbounded; logged, not asserted
  const RootSplit s(kDisk, {Complex{0.0, 0.5}, Complex{0.0, -0.5}, 0.9}, {1.05, 1.3, 1.6});
  Box bbox = gllab::default_bbox(s, kDisk, 0.1);
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      const auto mask = gllab::build_mask(s, 1e-2, bbox, 50.0, gllab::critical_points(s.p()));
      const auto verdict = gllab::bridging_check(s, 1e-2, kDisk, 0.1, mask);
      MESSAGE("bridge: " << verdict.bridge << ", witness cells: " << verdict.witness.size());
      return;
    } catch (const gllab::GrowBBox& g) {
      bbox = g.suggested();
    }
  }
  MESSAGE("A_delta still reaches the box after 4 enlargements");
}

TEST_CASE("adversarial outside roots produce a witness path") {
  // outside roots along a ray just beyond the boundary pull A_delta across K_eps
  // m < n keeps A_delta bounded
  const RootSplit s(kDisk, {Complex{0.0, 0.5}, Complex{0.0, -0.5}, 0.9, -0.6, Complex{-0.2, 0.2}},
                    {1.05, 1.3, 1.6});
  const auto crit = gllab::critical_points(s.p());
  Box bbox = gllab::default_bbox(s, kDisk, 0.1);
  std::optional<gllab::RegionMask> mask;
  for (int attempt = 0; attempt < 4 && !mask; ++attempt) {
    try {
      mask = gllab::build_mask(s, 1e-2, bbox, 100.0, crit);
    } catch (const gllab::GrowBBox& g) {
      bbox = g.suggested();
    }
  }
  REQUIRE(mask);
  const auto verdict = gllab::bridging_check(s, 1e-2, kDisk, 0.1, *mask);
  MESSAGE("bridge: " << verdict.bridge << ", witness cells: " << verdict.witness.size());
  if (verdict.bridge) {
    REQUIRE(verdict.witness.size() >= 2);
    CHECK(kDisk.contains(verdict.witness.front()));
    CHECK(kDisk.distance(verdict.witness.back()) > 0.1);
    CHECK(verdict.outside_field.size() == verdict.witness.size());
    CHECK(verdict.inside_field.size() == verdict.witness.size());
    for (std::size_t i = 1; i < verdict.witness.size(); ++i)
      CHECK(std::abs(verdict.witness[i] - verdict.witness[i - 1]) == doctest::Approx(mask->cell_size()));
    for (const Complex z : verdict.witness) CHECK(mask->label_at(z) == verdict.component);
  }
}

TEST_CASE("field_lower_bound") {
  CHECK(gllab::field_lower_bound(100, 1.0, 2.0) == doctest::Approx(100.0 / 9.0));
  CHECK(gllab::field_lower_bound(5, 0.0, 2.0) == 0.0);
  CHECK_THROWS_AS(gllab::field_lower_bound(0, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(gllab::field_lower_bound(1, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("field lower bound holds on random trials") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double min_slack = 1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto k = trial % 2 ? ConvexDomain::disk(0.0, 0.5 + unit(rng))
                             : gllab::convex_hull(gllab::testing::disk_samples(rng, 8));
    const int n = 1 + trial % 60;
    std::vector<Complex> roots;
    const Box b = k.bounds();
    while (static_cast<int>(roots.size()) < n) {
      const Complex z{b.xmin + unit(rng) * b.width(), b.ymin + unit(rng) * b.height()};
      if (k.contains(z)) roots.push_back(z);
    }
    Complex z;
    do {
      z = std::polar(4.0 * unit(rng), 6.283185307179586 * unit(rng));
    } while (k.contains(z));
    Complex field{0.0};
    for (const Complex a : roots) field += 1.0 / (z - a);
    const double bound = gllab::field_lower_bound(n, k.distance(z), k.diameter());
    CHECK(std::abs(field) >= bound);
    min_slack = std::min(min_slack, std::abs(field) - bound);
  }
  MESSAGE("minimum slack " << min_slack);
}

TEST_CASE("mask CSV export") {
  const RootSplit s(kDisk, {-0.5, 0.5}, {});
  const auto mask = gllab::build_mask(s, 1e-2, Box{-1.0, 1.0, -1.0, 1.0}, 5.0);
  std::ostringstream os;
  gllab::write_mask_csv(mask, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,g,label");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == mask.nx * mask.ny);
}
