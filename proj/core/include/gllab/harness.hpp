#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gllab/adelta.hpp"
#include "gllab/geometry.hpp"
#include "gllab/polynomial.hpp"

namespace gllab {

/// Library version string.
const char* version() noexcept;

struct RootSampler {
  enum class Kind { uniform, boundary_biased, explicit_list };
  Kind kind = Kind::uniform;
  std::vector<Complex> roots;
};

struct OutsideSampler {
  enum class Kind { annulus, explicit_list };
  Kind kind = Kind::annulus;
  /// radii around the centroid of K, in units of diam K
  double radius_lo = 1.0;
  double radius_hi = 2.0;
  std::vector<Complex> roots;
};

struct ExperimentConfig {
  ConvexDomain domain = ConvexDomain::disk(0.0, 1.0);
  double epsilon = 0.25;
  int n = 2;
  int m = 0;
  RootSampler root_sampler;
  OutsideSampler outside_sampler;
  std::vector<double> delta_sweep;
  double resolution = 50.0;
  std::uint64_t seed = 0;
  /// Padding of the A_delta box around K_eps and all roots; unset means
  /// default_bbox(). The box grows automatically when A_delta reaches it.
  std::optional<double> bbox_padding;
  int jobs = 1;
};

/// Parses and validates a JSON config. Throws ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);
/// Throws ConfigError when an invariant of the config is violated.
void validate(const ExperimentConfig& cfg);

/// Roots drawn for a config: n inside K followed by m outside.
struct SampledRoots {
  std::vector<Complex> inside;
  std::vector<Complex> outside;
};
SampledRoots sample_roots(const ExperimentConfig& cfg);

struct StageError {
  std::string stage;
  std::string type;
  std::string message;
};

struct DeltaReport {
  /// delta actually used; below requested_delta when A_delta had to shrink
  double delta = 0.0;
  double requested_delta = 0.0;
  Box bbox;
  int nx = 0;
  int ny = 0;
  std::vector<ComponentReport> components;
  BridgeVerdict bridging;
  /// boundary loops per component; not serialised
  std::vector<std::vector<std::vector<Complex>>> boundaries;
  bool ok = false;
};

struct TheoremReport {
  ExperimentConfig config;
  std::string version;
  std::vector<Complex> inside;
  std::vector<Complex> outside;
  std::vector<Complex> critical_points;
  std::size_t jittered = 0;
  double jitter_magnitude = 0.0;

  int roots_in_K = 0;
  int roots_outside = 0;
  int crit_in_Keps = 0;
  int crit_elsewhere = 0;
  /// #{p' = 0 in K_eps} >= #{p = 0 in K} - 1
  bool verdict = false;
  /// min over critical points of the signed distance to the complement of
  /// K_eps; negative when some critical point lies outside K_eps
  double min_crit_clearance = 0.0;

  std::vector<DeltaReport> adelta;
  std::vector<StageError> errors;
  /// every stage ran without error
  bool complete() const noexcept { return errors.empty(); }
};

/// Runs the full pipeline. Module errors are recorded with their stage and
/// the partial report is returned; only ConfigError propagates.
TheoremReport run_theorem_experiment(const ExperimentConfig& cfg);

/// Signed distance from z to the complement of K_eps (positive inside).
double keps_clearance(const ConvexDomain& k, double eps, Complex z);

std::string report_to_json(const TheoremReport& report, int indent = 2);

struct SweepMRow {
  int n = 0;
  int m = 0;
  double ratio = 0.0;  // m log n / n
  bool verdict = false;
  double min_crit_clearance = 0.0;
  std::string error;
};

/// One counts-only run per m (delta_sweep is ignored); rows run in parallel
/// up to cfg.jobs.
std::vector<SweepMRow> sweep_m(const ExperimentConfig& base, std::span<const int> m_values);
/// Columns: n, m, m_log_n_over_n, verdict, min_crit_distance, error.
void write_sweep_m_csv(std::ostream& os, std::span<const SweepMRow> rows);

struct LemmaViolation {
  std::string kind;
  std::string instance;  // JSON dump for reproduction
};

struct SharpRow {
  int m = 0;
  double value = 0.0;
  double ratio = 0.0;
  double lower_bound = 0.0;
  bool certified = false;
};

struct LemmaSuiteReport {
  int torus_trials = 0;
  int curve_trials = 0;
  double worst_torus_ratio = 0.0;  // max value / bound
  std::vector<LemmaViolation> violations;
  std::vector<SharpRow> sharp;
};

struct LemmaSuiteOptions {
  int trials = 1000;
  int m_lo = 5;
  int m_hi = 200;
  std::uint64_t seed = 0;
  std::vector<int> sharp_ms = {10, 100, 1000};
  int jobs = 1;
};

/// Random torus configurations and random curve/charge instances checked
/// against every certificate, plus the sharp-example table.
LemmaSuiteReport run_lemma_suite(const LemmaSuiteOptions& opts);
std::string lemma_report_to_json(const LemmaSuiteReport& report, int indent = 2);

}  // namespace gllab
