#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gllab/errors.hpp"
#include "gllab/supercharge.hpp"

using gllab::ChargeSet;
using gllab::Complex;
using gllab::Curve;
using gllab::SearchConfig;

namespace {

SearchConfig small_config(int m, double margin, std::uint64_t seed = 1) {
  SearchConfig cfg;
  cfg.m = m;
  cfg.exclusion_margin = margin;
  cfg.restarts = 4;
  cfg.budget = 1600;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("objective of a single charge") {
  SearchConfig cfg = small_config(1, 0.01);
  const double v = gllab::objective(ChargeSet({Complex{0.5, 0.5}}), cfg);
  CHECK(v == doctest::Approx(1.0 / std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("charges on the curve are penalised, not infinite") {
  SearchConfig cfg = small_config(1, 0.05);
  const double v = gllab::objective(ChargeSet({Complex{0.5, 0.0}}), cfg, 10.0);
  CHECK(std::isfinite(v));
  CHECK(v < 0.0);
  const double feasible = gllab::objective(ChargeSet({Complex{0.5, 0.05}}), cfg, 10.0);
  CHECK(v < feasible);
}

TEST_CASE("search-grade objective stays within 1% of the certificate") {
  SearchConfig cfg = small_config(3, 0.02);
  const ChargeSet cs({Complex{0.2, 0.03}, Complex{0.6, -0.05}, Complex{0.9, 0.1}});
  const double search = gllab::objective(cs, cfg);
  const auto cert = gllab::curve_min(cs, cfg.curve, gllab::PotentialMode::field);
  CHECK(search <= cert.value * 1.01);
}

TEST_CASE("enforce_clearance") {
  const Curve seg = Curve::segment(0.0, 1.0);
  const auto out = gllab::enforce_clearance(ChargeSet({Complex{0.5, 0.001}, Complex{0.3, 0.0}, Complex{1.2, 0.0},
                                                       Complex{0.5, 1.0}}),
                                            seg, 0.05);
  for (const Complex z : out.charges) CHECK(seg.distance_to(z) >= 0.05);
  CHECK(out.charges[3] == Complex{0.5, 1.0});
  CHECK(gllab::violation_depth(out, seg, 0.05) == 0.0);
  CHECK(gllab::violation_depth(ChargeSet({Complex{0.5, 0.01}}), seg, 0.05) == doctest::Approx(0.04));

  const Curve zig({0.0, Complex{0.5, 0.02}, 1.0});
  const auto z2 = gllab::enforce_clearance(ChargeSet({Complex{0.5, 0.0}, Complex{0.5, 0.01}}), zig, 0.03);
  for (const Complex z : z2.charges) CHECK(zig.distance_to(z) >= 0.03);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(gllab::optimize(small_config(0, 0.1)), gllab::ConfigError);
  CHECK_THROWS_AS(gllab::optimize(small_config(1, 0.0)), gllab::ConfigError);
  SearchConfig bent = small_config(1, 0.1);
  bent.curve = Curve::segment(0.0, 2.0);
  CHECK_THROWS_AS(gllab::validate(bent), gllab::ConfigError);
  SearchConfig tiny = small_config(5, 0.1);
  tiny.budget = 10;
  CHECK_THROWS_AS(gllab::validate(tiny), gllab::ConfigError);
}

TEST_CASE("one charge hugs the midpoint at the margin") {
  // brute force over a 2-D grid: best value 2 / sqrt(1 + 4 margin^2)
  for (const auto& [margin, best] : {std::pair{0.05, 1.990074}, std::pair{0.1, 1.961161}}) {
    const auto r = gllab::optimize(small_config(1, margin));
    CHECK(r.certified);
    CHECK(r.achieved == doctest::Approx(best).epsilon(2e-3));
    CHECK(r.achieved <= best * 1.0001);
    const Complex z = r.best_charges.charges[0];
    CHECK(std::abs(z.real() - 0.5) < 0.02);
    CHECK(std::abs(std::abs(z.imag()) - margin) < 1e-3);
  }
}

TEST_CASE("two charges do at least as well as one") {
  const auto one = gllab::optimize(small_config(1, 0.05));
  const auto two = gllab::optimize(small_config(2, 0.05));
  CHECK(two.achieved >= one.achieved * 0.999);
}

TEST_CASE("results are deterministic and independent of jobs") {
  SearchConfig cfg = small_config(3, 0.05, 77);
  const auto a = gllab::optimize(cfg);
  cfg.jobs = 3;
  const auto b = gllab::optimize(cfg);
  CHECK(a.achieved == b.achieved);
  CHECK(a.history == b.history);
  CHECK(a.evals_used == b.evals_used);
  CHECK(a.best_charges.charges == b.best_charges.charges);
}

TEST_CASE("certificate integrity and feasibility") {
  for (int m = 1; m <= 6; ++m) {
    const auto cfg = small_config(m, 0.03, 100 + m);
    const auto r = gllab::optimize(cfg);
    CHECK(r.certified);
    CHECK(std::abs(r.achieved - r.certificate_value) <= 0.01 * std::max(r.achieved, r.certificate_value));
    for (const Complex z : r.best_charges.charges) CHECK(cfg.curve.distance_to(z) >= cfg.exclusion_margin);
    CHECK(r.achieved <= r.lemma_point_value * (1.0 + 1e-9));
    CHECK(r.lemma_point_value <= r.lemma_ceiling * (1.0 + 1e-9));
    CHECK(r.evals_used <= cfg.budget);
    CHECK(r.history.size() == static_cast<std::size_t>(cfg.restarts));
  }
}

TEST_CASE("conjecture sweep CSV") {
  SearchConfig base = small_config(1, 0.05);
  base.budget = 400;
  const std::vector<int> ms{1, 2};
  const std::vector<double> margins{0.05, 0.1};
  const auto rows = gllab::conjecture_sweep(base.curve, ms, margins, base);
  REQUIRE(rows.size() == 4);
  CHECK(std::isnan(rows[0].ratio_logcorrected));
  CHECK(rows[2].ratio_logcorrected == doctest::Approx(rows[2].achieved / (2.0 * std::log(2.0))));
  std::ostringstream os;
  gllab::write_sweep_csv(os, rows);
  const std::string csv = os.str();
  CHECK(csv.rfind("m,margin,achieved,ratio_linear,ratio_logcorrected,evals,seed\n", 0) == 0);
  CHECK(csv.find(",nan,") != std::string::npos);
  for (const auto& r : rows) MESSAGE("m=" << r.m << " margin=" << r.margin << " achieved=" << r.achieved);
}
