#include "gllab/supercharge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "gllab/errors.hpp"
#include "parallel.hpp"

namespace gllab {

namespace {

constexpr double kPenaltyScale = 1e3;

std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ChargeSet unpack(const std::vector<double>& x) {
  std::vector<Complex> z(x.size() / 2);
  for (std::size_t l = 0; l < z.size(); ++l) z[l] = {x[2 * l], x[2 * l + 1]};
  return ChargeSet(std::move(z));
}

std::vector<double> pack(const ChargeSet& c) {
  std::vector<double> x;
  x.reserve(2 * c.m());
  for (const Complex z : c.charges) {
    x.push_back(z.real());
    x.push_back(z.imag());
  }
  return x;
}

double search_value(const ChargeSet& feasible, const SearchConfig& cfg) {
  CurveMinOptions opts;
  opts.samples = cfg.search_samples;
  opts.certify = false;
  return curve_min(feasible, cfg.curve, PotentialMode::field, opts).value;
}

struct RestartOutcome {
  ChargeSet best;
  double value = -std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  bool exhausted = false;
};

ChargeSet initial_charges(const SearchConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> z;
  for (int l = 0; l < cfg.m; ++l) {
    const double t = unit(rng);
    const double u = unit(rng);
    const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
    const Complex p = cfg.curve.at(t);
    const Complex normal = cfg.curve.closest(p).normal;
    z.push_back(p + side * normal * (cfg.exclusion_margin * (1.0 + u)));
  }
  return enforce_clearance(ChargeSet(std::move(z)), cfg.curve, cfg.exclusion_margin);
}

RestartOutcome run_restart(const SearchConfig& cfg, int restart, std::size_t budget) {
  std::mt19937_64 rng(mix(cfg.seed ^ mix(static_cast<std::uint64_t>(restart) + 1)));
  RestartOutcome out;
  const std::size_t dim = 2 * static_cast<std::size_t>(cfg.m);

  const auto evaluate = [&](const std::vector<double>& x) {
    const ChargeSet raw = unpack(x);
    const double depth = violation_depth(raw, cfg.curve, cfg.exclusion_margin);
    const ChargeSet feasible = depth > 0.0 ? enforce_clearance(raw, cfg.curve, cfg.exclusion_margin) : raw;
    const double v = search_value(feasible, cfg);
    ++out.evals;
    if (v > out.value) {
      out.value = v;
      out.best = feasible;
    }
    if (depth > 0.0) return v - kPenaltyScale * std::max(out.value, 1.0) * depth;
    return v;
  };

  // minimize h = -objective
  const double step = std::max(cfg.exclusion_margin, 0.05 * cfg.curve.length());
  std::vector<std::vector<double>> simplex(dim + 1, pack(initial_charges(cfg, rng)));
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step;
  std::vector<double> h(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) h[i] = -evaluate(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim);
  const auto along = [&](const std::vector<double>& from, double coef) {
    std::vector<double> x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = centroid[k] + coef * (from[k] - centroid[k]);
    return x;
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a] < h[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i <= dim; ++i)
      for (std::size_t k = 0; k < dim; ++k)
        spread = std::max(spread, std::abs(simplex[i][k] - simplex[best][k]));
    if (spread < 1e-12 * std::max(1.0, step)) break;
    if (out.evals + dim + 2 > budget) {
      out.exhausted = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / static_cast<double>(dim);
    }

    const auto reflected = along(simplex[worst], -1.0);
    const double hr = -evaluate(reflected);
    if (hr < h[best]) {
      const auto expanded = along(simplex[worst], -2.0);
      const double he = -evaluate(expanded);
      if (he < hr) {
        simplex[worst] = expanded;
        h[worst] = he;
      } else {
        simplex[worst] = reflected;
        h[worst] = hr;
      }
      continue;
    }
    if (hr < h[second]) {
      simplex[worst] = reflected;
      h[worst] = hr;
      continue;
    }
    const bool outside = hr < h[worst];
    const auto contracted = along(outside ? reflected : simplex[worst], 0.5);
    const double hc = -evaluate(contracted);
    if (hc < std::min(hr, h[worst])) {
      simplex[worst] = contracted;
      h[worst] = hc;
      continue;
    }
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < dim; ++k)
        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      h[i] = -evaluate(simplex[i]);
    }
  }
  return out;
}

}  // namespace

void validate(const SearchConfig& cfg) {
  if (cfg.m < 1) throw ConfigError("supercharge: m must be >= 1");
  if (!(cfg.exclusion_margin > 0.0)) throw ConfigError("supercharge: exclusion_margin must be positive");
  if (cfg.restarts < 1) throw ConfigError("supercharge: restarts must be >= 1");
  const std::size_t per = cfg.budget / static_cast<std::size_t>(cfg.restarts);
  if (per < 2 * static_cast<std::size_t>(cfg.m) + 3)
    throw ConfigError("supercharge: budget too small for one simplex per restart");
  if (!cfg.curve.conjecture_normalized(1e-9))
    throw ConfigError("supercharge: curve must run from 0 to 1");
}

double violation_depth(const ChargeSet& c, const Curve& gamma, double margin) noexcept {
  double depth = 0.0;
  for (const Complex z : c.charges) depth += std::max(0.0, margin - gamma.distance_to(z));
  return depth;
}

ChargeSet enforce_clearance(const ChargeSet& c, const Curve& gamma, double margin) {
  std::vector<Complex> out = c.charges;
  for (Complex& z : out) {
    for (int iter = 0; iter < 64; ++iter) {
      const Curve::Closest cl = gamma.closest(z);
      if (cl.distance >= margin) break;
      const Complex dir = cl.distance > 0.0 ? (z - cl.point) / cl.distance : cl.normal;
      // grows slowly so that pushes between nearby segments terminate
      z = cl.point + dir * (margin * (1.0 + 1e-12 + 0.05 * iter));
    }
    if (gamma.distance_to(z) < margin) throw ProjectionDegenerate("charge could not be moved off the curve");
  }
  return ChargeSet(std::move(out));
}

double objective(const ChargeSet& c, const SearchConfig& cfg, double current_best) {
  const double depth = violation_depth(c, cfg.curve, cfg.exclusion_margin);
  if (depth == 0.0) return search_value(c, cfg);
  const ChargeSet feasible = enforce_clearance(c, cfg.curve, cfg.exclusion_margin);
  return search_value(feasible, cfg) - kPenaltyScale * std::max(current_best, 1.0) * depth;
}

SearchResult optimize(const SearchConfig& cfg) {
  validate(cfg);
  const std::size_t per = cfg.budget / static_cast<std::size_t>(cfg.restarts);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  detail::parallel_for(outcomes.size(), cfg.jobs, [&](std::size_t i) {
    outcomes[i] = run_restart(cfg, static_cast<int>(i), per);
  });

  SearchResult res;
  std::size_t winner = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    res.history.push_back(outcomes[i].value);
    res.evals_used += outcomes[i].evals;
    res.budget_exhausted = res.budget_exhausted || outcomes[i].exhausted;
    if (outcomes[i].value > outcomes[winner].value) winner = i;
  }
  res.best_charges = outcomes[winner].best;

  const CurveMin cert = curve_min(res.best_charges, cfg.curve, PotentialMode::field);
  res.achieved = cert.value;
  res.t = cert.t;
  res.certified = cert.certified;
  res.certificate_value = cert.certificate_value;

  const LemmaBound lb = lemma1_curve_bound(res.best_charges, cfg.curve);
  res.lemma_point_value = lb.value / lb.scale;
  res.lemma_ceiling = lb.torus_value / lb.scale;
  return res;
}

std::vector<SweepRow> conjecture_sweep(const Curve& curve, std::span<const int> ms,
                                       std::span<const double> margins, const SearchConfig& base) {
  std::vector<SweepRow> rows;
  for (const int m : ms) {
    for (const double margin : margins) {
      SearchConfig cfg = base;
      cfg.curve = curve;
      cfg.m = m;
      cfg.exclusion_margin = margin;
      const SearchResult r = optimize(cfg);
      SweepRow row;
      row.m = m;
      row.margin = margin;
      row.achieved = r.achieved;
      row.ratio_linear = r.achieved / m;
      row.ratio_logcorrected = m > 1 ? r.achieved / (m * std::log(static_cast<double>(m)))
                                     : std::numeric_limits<double>::quiet_NaN();
      row.evals = r.evals_used;
      row.seed = cfg.seed;
      row.certified = r.certified;
      row.lemma_ceiling = r.lemma_ceiling;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  const auto num = [](double v) {
    if (std::isnan(v)) return std::string("nan");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  os << "m,margin,achieved,ratio_linear,ratio_logcorrected,evals,seed\n";
  for (const SweepRow& r : rows) {
    os << r.m << ',' << num(r.margin) << ',' << num(r.achieved) << ',' << num(r.ratio_linear) << ','
       << num(r.ratio_logcorrected) << ',' << r.evals << ',' << r.seed << '\n';
  }
}

}  // namespace gllab
