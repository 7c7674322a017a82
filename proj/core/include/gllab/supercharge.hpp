#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gllab/charges.hpp"

namespace gllab {

struct SearchConfig {
  /// gamma(0) = 0, gamma(1) = 1
  Curve curve = Curve::segment(0.0, 1.0);
  int m = 1;
  int restarts = 8;
  /// objective evaluations across all restarts
  std::size_t budget = 4000;
  /// every charge keeps at least this distance from the curve
  double exclusion_margin = 1e-2;
  std::uint64_t seed = 0;
  /// curve samples per objective evaluation, before the clearance floor
  std::size_t search_samples = 256;
  /// worker threads for the restarts
  int jobs = 1;
};

/// Throws ConfigError on m < 1, margin <= 0, restarts < 1, budget too small
/// for one simplex, or a curve that is not conjecture-normalized.
void validate(const SearchConfig& cfg);

struct SearchResult {
  ChargeSet best_charges;
  /// certified field-mode curve minimum of best_charges
  double achieved = 0.0;
  double t = 0.0;
  bool certified = false;
  double certificate_value = 0.0;
  std::vector<double> history;  // best search value per restart
  std::size_t evals_used = 0;
  /// some restart stopped on its share of the budget
  bool budget_exhausted = false;
  /// modulus potential at the lemma point and the torus certificate for
  /// best_charges; achieved <= lemma_point_value <= lemma_ceiling
  double lemma_point_value = 0.0;
  double lemma_ceiling = 0.0;
};

/// Pushes every charge closer than `margin` to the curve out to the margin.
ChargeSet enforce_clearance(const ChargeSet& c, const Curve& gamma, double margin);

/// Total depth of margin violations, sum_l max(0, margin - dist(z_l, gamma)).
double violation_depth(const ChargeSet& c, const Curve& gamma, double margin) noexcept;

/// Search-grade field minimum. Infeasible sets are scored at their projection
/// minus 1e3 * max(current_best, 1) * violation depth.
double objective(const ChargeSet& c, const SearchConfig& cfg, double current_best = 1.0);

/// Multi-restart Nelder-Mead ascent over the 2m charge coordinates. Bitwise
/// deterministic for a fixed config, independent of `jobs`.
SearchResult optimize(const SearchConfig& cfg);

struct SweepRow {
  int m = 0;
  double margin = 0.0;
  double achieved = 0.0;
  double ratio_linear = 0.0;
  /// NaN for m = 1
  double ratio_logcorrected = 0.0;
  std::size_t evals = 0;
  std::uint64_t seed = 0;
  bool certified = false;
  double lemma_ceiling = 0.0;
};

/// One optimize() per (m, margin) pair, using `base` for everything else.
std::vector<SweepRow> conjecture_sweep(const Curve& curve, std::span<const int> ms,
                                       std::span<const double> margins, const SearchConfig& base);

/// Columns: m, margin, achieved, ratio_linear, ratio_logcorrected, evals, seed.
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

}  // namespace gllab
