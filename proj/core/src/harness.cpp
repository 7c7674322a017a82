#include "gllab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include <json.hpp>

#include "gllab/charges.hpp"
#include "gllab/errors.hpp"
#include "parallel.hpp"

#ifndef GLLAB_VERSION
#define GLLAB_VERSION "0.0.0"
#endif

namespace gllab {

using json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxCells = 40'000'000;
constexpr int kMaxGrow = 4;
constexpr int kMaxShrink = 3;

std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

json point(Complex z) { return json::array({z.real(), z.imag()}); }

json points(std::span<const Complex> zs) {
  json a = json::array();
  for (const Complex z : zs) a.push_back(point(z));
  return a;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Complex parse_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(std::string(what) + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Complex> parse_points(const json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected a list of [x, y]");
  std::vector<Complex> out;
  for (const auto& e : j) out.push_back(parse_point(e, what));
  return out;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

ConvexDomain parse_domain(const json& j) {
  const auto kind = required<std::string>(j, "kind");
  try {
    if (kind == "disk") {
      check_keys(j, {"kind", "center", "radius"}, "domain");
      return ConvexDomain::disk(parse_point(j.at("center"), "domain.center"), required<double>(j, "radius"));
    }
    if (kind == "polygon") {
      check_keys(j, {"kind", "vertices"}, "domain");
      return ConvexDomain::polygon(parse_points(required<json>(j, "vertices"), "domain.vertices"));
    }
  } catch (const InvalidDomain& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
  throw ConfigError("domain.kind must be 'disk' or 'polygon'");
}

json domain_json(const ConvexDomain& k) {
  if (k.kind() == ConvexDomain::Kind::disk)
    return {{"kind", "disk"}, {"center", point(k.center())}, {"radius", k.radius()}};
  return {{"kind", "polygon"}, {"vertices", points(k.vertices())}};
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const GrowBBox*>(&e)) return "GrowBBox";
  if (dynamic_cast<const SingularPoint*>(&e)) return "SingularPoint";
  if (dynamic_cast<const NoConvergence*>(&e)) return "NoConvergence";
  if (dynamic_cast<const InvalidDomain*>(&e)) return "InvalidDomain";
  if (dynamic_cast<const DegenerateHull*>(&e)) return "DegenerateHull";
  if (dynamic_cast<const InvalidEpsilon*>(&e)) return "InvalidEpsilon";
  if (dynamic_cast<const RootOnContour*>(&e)) return "RootOnContour";
  if (dynamic_cast<const NonIntegerWinding*>(&e)) return "NonIntegerWinding";
  if (dynamic_cast<const SearchExhausted*>(&e)) return "SearchExhausted";
  if (dynamic_cast<const SingularCurve*>(&e)) return "SingularCurve";
  if (dynamic_cast<const ProjectionDegenerate*>(&e)) return "ProjectionDegenerate";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "InvalidArgument";
  return "Error";
}

Box tight_bbox(const ConvexDomain& k, double eps, std::span<const Complex> roots, double pad) {
  Box b = k.bounds().inflated(eps);
  for (const Complex z : roots) b = b.expanded_to(z);
  return b.inflated(pad);
}

void run_adelta(const ExperimentConfig& cfg, const RootSplit& split, TheoremReport& report) {
  const auto all = split.all_roots();
  const Box start = cfg.bbox_padding ? tight_bbox(cfg.domain, cfg.epsilon, all, *cfg.bbox_padding)
                                     : default_bbox(split, cfg.domain, cfg.epsilon);
  std::vector<double> deltas = cfg.delta_sweep;
  std::vector<RegionMask> masks;
  // with one outside root A_delta is bounded only for small delta: shrink and retry
  for (int shrink = 0;; ++shrink) {
    Box bbox = start;
    try {
      for (int attempt = 0;; ++attempt) {
        const double cells = bbox.width() * bbox.height() * cfg.resolution * cfg.resolution;
        if (cells > static_cast<double>(kMaxCells))
          throw Error("A_delta grid would exceed " + std::to_string(kMaxCells) + " cells");
        try {
          masks = build_masks(split, deltas, bbox, cfg.resolution, report.critical_points);
          break;
        } catch (const GrowBBox& g) {
          if (attempt + 1 >= kMaxGrow) throw;
          bbox = g.suggested();
        }
      }
      break;
    } catch (const GrowBBox&) {
      if (split.outside().size() != 1 || shrink >= kMaxShrink) throw;
      for (double& d : deltas) d *= 0.1;
    }
  }

  report.adelta.resize(masks.size());
  std::vector<StageError> errors(masks.size());
  detail::parallel_for(masks.size(), cfg.jobs, [&](std::size_t i) {
    DeltaReport& d = report.adelta[i];
    const RegionMask& mask = masks[i];
    d.requested_delta = cfg.delta_sweep[i];
    d.delta = mask.delta;
    d.bbox = mask.bbox;
    d.nx = mask.nx;
    d.ny = mask.ny;
    try {
      d.components = classify_components(mask, split, cfg.domain, cfg.epsilon);
      d.bridging = bridging_check(split, mask.delta, cfg.domain, cfg.epsilon, mask);
      d.boundaries = trace_boundaries(mask);
      d.ok = true;
    } catch (const std::exception& e) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "adelta[%g]", mask.delta);
      errors[i] = {buf, error_type(e), e.what()};
    }
  });
  for (auto& e : errors)
    if (!e.stage.empty()) report.errors.push_back(std::move(e));
}

}  // namespace

const char* version() noexcept { return GLLAB_VERSION; }

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"domain", "epsilon", "n", "m", "root_sampler", "outside_sampler", "delta_sweep",
                 "resolution", "seed", "bbox_padding", "jobs"},
             "config");

  ExperimentConfig cfg;
  cfg.domain = parse_domain(required<json>(j, "domain"));
  cfg.epsilon = required<double>(j, "epsilon");
  cfg.n = required<int>(j, "n");
  cfg.m = j.contains("m") ? required<int>(j, "m") : 0;

  if (j.contains("root_sampler")) {
    const json& rs = j.at("root_sampler");
    check_keys(rs, {"kind", "roots"}, "root_sampler");
    const auto kind = required<std::string>(rs, "kind");
    if (kind == "uniform") {
      cfg.root_sampler.kind = RootSampler::Kind::uniform;
    } else if (kind == "boundary_biased") {
      cfg.root_sampler.kind = RootSampler::Kind::boundary_biased;
    } else if (kind == "explicit") {
      cfg.root_sampler.kind = RootSampler::Kind::explicit_list;
      cfg.root_sampler.roots = parse_points(required<json>(rs, "roots"), "root_sampler.roots");
    } else {
      throw ConfigError("root_sampler.kind must be uniform, boundary_biased or explicit");
    }
  }
  if (j.contains("outside_sampler")) {
    const json& os = j.at("outside_sampler");
    check_keys(os, {"kind", "radius_range", "roots"}, "outside_sampler");
    const auto kind = required<std::string>(os, "kind");
    if (kind == "annulus") {
      cfg.outside_sampler.kind = OutsideSampler::Kind::annulus;
      if (os.contains("radius_range")) {
        const auto range = required<std::vector<double>>(os, "radius_range");
        if (range.size() != 2) throw ConfigError("outside_sampler.radius_range must have two entries");
        cfg.outside_sampler.radius_lo = range[0];
        cfg.outside_sampler.radius_hi = range[1];
      }
    } else if (kind == "explicit") {
      cfg.outside_sampler.kind = OutsideSampler::Kind::explicit_list;
      cfg.outside_sampler.roots = parse_points(required<json>(os, "roots"), "outside_sampler.roots");
    } else {
      throw ConfigError("outside_sampler.kind must be annulus or explicit");
    }
  }
  if (j.contains("delta_sweep")) cfg.delta_sweep = required<std::vector<double>>(j, "delta_sweep");
  if (j.contains("resolution")) cfg.resolution = required<double>(j, "resolution");
  if (j.contains("seed")) cfg.seed = required<std::uint64_t>(j, "seed");
  if (j.contains("bbox_padding")) cfg.bbox_padding = required<double>(j, "bbox_padding");
  if (j.contains("jobs")) cfg.jobs = required<int>(j, "jobs");
  validate(cfg);
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["domain"] = domain_json(cfg.domain);
  j["epsilon"] = cfg.epsilon;
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  switch (cfg.root_sampler.kind) {
    case RootSampler::Kind::uniform:
      j["root_sampler"] = {{"kind", "uniform"}};
      break;
    case RootSampler::Kind::boundary_biased:
      j["root_sampler"] = {{"kind", "boundary_biased"}};
      break;
    case RootSampler::Kind::explicit_list:
      j["root_sampler"] = {{"kind", "explicit"}, {"roots", points(cfg.root_sampler.roots)}};
      break;
  }
  if (cfg.outside_sampler.kind == OutsideSampler::Kind::annulus) {
    j["outside_sampler"] = {{"kind", "annulus"},
                            {"radius_range", {cfg.outside_sampler.radius_lo, cfg.outside_sampler.radius_hi}}};
  } else {
    j["outside_sampler"] = {{"kind", "explicit"}, {"roots", points(cfg.outside_sampler.roots)}};
  }
  j["delta_sweep"] = cfg.delta_sweep;
  j["resolution"] = cfg.resolution;
  j["seed"] = cfg.seed;
  if (cfg.bbox_padding) j["bbox_padding"] = *cfg.bbox_padding;
  j["jobs"] = cfg.jobs;
  return j.dump(2);
}

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) throw ConfigError("epsilon must be positive");
  if (cfg.n < 1 || cfg.m < 0) throw ConfigError("n must be >= 1 and m >= 0");
  if (cfg.n + cfg.m < 2) throw ConfigError("n + m must be at least 2");
  if (!(cfg.resolution > 0.0)) throw ConfigError("resolution must be positive");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (cfg.bbox_padding && !(*cfg.bbox_padding >= 0.0)) throw ConfigError("bbox_padding must be >= 0");
  for (const double d : cfg.delta_sweep)
    if (!(d > 0.0)) throw ConfigError("delta_sweep entries must be positive");

  if (cfg.root_sampler.kind == RootSampler::Kind::explicit_list) {
    if (static_cast<int>(cfg.root_sampler.roots.size()) != cfg.n)
      throw ConfigError("root_sampler.roots must list exactly n roots");
    for (const Complex z : cfg.root_sampler.roots)
      if (!cfg.domain.contains(z)) throw ConfigError("explicit inside root lies outside K");
  }
  if (cfg.outside_sampler.kind == OutsideSampler::Kind::explicit_list) {
    if (static_cast<int>(cfg.outside_sampler.roots.size()) != cfg.m)
      throw ConfigError("outside_sampler.roots must list exactly m roots");
    for (const Complex z : cfg.outside_sampler.roots)
      if (cfg.domain.contains(z)) throw ConfigError("explicit outside root lies in K");
  } else if (!(cfg.outside_sampler.radius_lo >= 0.0) ||
             !(cfg.outside_sampler.radius_hi > cfg.outside_sampler.radius_lo)) {
    throw ConfigError("outside_sampler.radius_range must satisfy 0 <= lo < hi");
  }
}

SampledRoots sample_roots(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(mix(cfg.seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ConvexDomain& k = cfg.domain;
  SampledRoots out;

  switch (cfg.root_sampler.kind) {
    case RootSampler::Kind::explicit_list:
      out.inside = cfg.root_sampler.roots;
      break;
    case RootSampler::Kind::uniform: {
      const Box b = k.bounds();
      while (static_cast<int>(out.inside.size()) < cfg.n) {
        const Complex z{b.xmin + unit(rng) * b.width(), b.ymin + unit(rng) * b.height()};
        if (k.contains(z)) out.inside.push_back(z);
      }
      break;
    }
    case RootSampler::Kind::boundary_biased: {
      // within the outer tenth of the segment from the centroid to the boundary
      const Complex c = k.centroid();
      for (int i = 0; i < cfg.n; ++i) {
        const Complex b = k.boundary_point(unit(rng));
        const double u = unit(rng);
        out.inside.push_back(c + (b - c) * (1.0 - 0.1 * u * u));
      }
      break;
    }
  }

  if (cfg.outside_sampler.kind == OutsideSampler::Kind::explicit_list) {
    out.outside = cfg.outside_sampler.roots;
  } else {
    const Complex c = k.centroid();
    const double diam = k.diameter();
    const double lo = cfg.outside_sampler.radius_lo * diam;
    const double hi = cfg.outside_sampler.radius_hi * diam;
    int rejected = 0;
    while (static_cast<int>(out.outside.size()) < cfg.m) {
      const double rad = lo + (hi - lo) * unit(rng);
      const Complex z = c + std::polar(rad, 2.0 * std::numbers::pi * unit(rng));
      if (!k.contains(z)) {
        out.outside.push_back(z);
      } else if (++rejected > 100000) {
        throw ConfigError("outside_sampler annulus lies inside K");
      }
    }
  }
  return out;
}

double keps_clearance(const ConvexDomain& k, double eps, Complex z) {
  const double d = k.distance(z);
  if (d > 0.0) return eps - d;
  if (k.kind() == ConvexDomain::Kind::disk) return eps + (k.radius() - std::abs(z - k.center()));
  const auto& v = k.vertices();
  double inner = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex e = v[(i + 1) % v.size()] - v[i];
    inner = std::min(inner, cross(e, z - v[i]) / std::abs(e));
  }
  return eps + inner;
}

TheoremReport run_theorem_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  TheoremReport report;
  report.config = cfg;
  report.version = version();
  const auto fail = [&](const char* stage, const std::exception& e) {
    report.errors.push_back({stage, error_type(e), e.what()});
    return report;
  };

  SampledRoots roots = sample_roots(cfg);
  const std::size_t n = roots.inside.size();
  std::vector<Complex> all = roots.inside;
  all.insert(all.end(), roots.outside.begin(), roots.outside.end());
  const JitteredRoots jit = separate_repeated_roots(all, tolerance::multiplicity_jitter, mix(cfg.seed + 1));
  report.jittered = jit.perturbed;
  report.jitter_magnitude = jit.magnitude;
  report.inside.assign(jit.roots.begin(), jit.roots.begin() + static_cast<std::ptrdiff_t>(n));
  report.outside.assign(jit.roots.begin() + static_cast<std::ptrdiff_t>(n), jit.roots.end());

  std::optional<RootSplit> split;
  try {
    split.emplace(cfg.domain, report.inside, report.outside);
  } catch (const std::exception& e) {
    return fail("split", e);
  }
  report.roots_in_K = static_cast<int>(report.inside.size());
  report.roots_outside = static_cast<int>(report.outside.size());

  try {
    report.critical_points = critical_points(split->p());
  } catch (const std::exception& e) {
    return fail("critical_points", e);
  }
  report.min_crit_clearance = std::numeric_limits<double>::infinity();
  for (const Complex z : report.critical_points) {
    const double c = keps_clearance(cfg.domain, cfg.epsilon, z);
    report.min_crit_clearance = std::min(report.min_crit_clearance, c);
    if (c >= 0.0) {
      ++report.crit_in_Keps;
    } else {
      ++report.crit_elsewhere;
    }
  }
  report.verdict = report.crit_in_Keps >= report.roots_in_K - 1;

  if (!cfg.delta_sweep.empty()) {
    try {
      run_adelta(cfg, *split, report);
    } catch (const std::exception& e) {
      report.errors.push_back({"adelta", error_type(e), e.what()});
    }
  }
  return report;
}

std::string report_to_json(const TheoremReport& r, int indent) {
  json j;
  j["version"] = r.version;
  j["config"] = json::parse(config_to_json(r.config));
  j["roots"] = {{"inside", points(r.inside)}, {"outside", points(r.outside)}};
  j["critical_points"] = points(r.critical_points);
  j["jitter"] = {{"perturbed", r.jittered}, {"magnitude", r.jitter_magnitude}};
  j["counts"] = {{"roots_in_K", r.roots_in_K},
                 {"roots_outside", r.roots_outside},
                 {"crit_in_Keps", r.crit_in_Keps},
                 {"crit_elsewhere", r.crit_elsewhere}};
  j["verdict"] = r.verdict;
  j["min_crit_clearance"] = number_or_null(r.min_crit_clearance);

  json adelta = json::array();
  for (const DeltaReport& d : r.adelta) {
    json comps = json::array();
    for (const ComponentReport& c : d.components) {
      comps.push_back({{"id", c.id},
                       {"cells", c.cells},
                       {"touches_K", c.touches_K},
                       {"escapes_Keps", c.escapes_Keps},
                       {"r_roots_inside", c.r_roots_inside},
                       {"crit_points_inside", c.crit_points_inside ? json(*c.crit_points_inside) : json(nullptr)},
                       {"winding_raw", number_or_null(c.winding_raw)},
                       {"rouche_margin", number_or_null(c.rouche_margin)},
                       {"count_error", c.count_error}});
    }
    adelta.push_back({{"delta", d.delta},
                      {"requested_delta", d.requested_delta},
                      {"ok", d.ok},
                      {"bbox", {d.bbox.xmin, d.bbox.xmax, d.bbox.ymin, d.bbox.ymax}},
                      {"nx", d.nx},
                      {"ny", d.ny},
                      {"components", comps},
                      {"bridging",
                       {{"bridge", d.bridging.bridge},
                        {"component", d.bridging.component},
                        {"witness", points(d.bridging.witness)}}}});
  }
  j["adelta"] = adelta;

  json errors = json::array();
  for (const StageError& e : r.errors) errors.push_back({{"stage", e.stage}, {"type", e.type}, {"message", e.message}});
  j["errors"] = errors;
  j["complete"] = r.complete();
  return j.dump(indent);
}

std::vector<SweepMRow> sweep_m(const ExperimentConfig& base, std::span<const int> m_values) {
  std::vector<SweepMRow> rows(m_values.size());
  detail::parallel_for(rows.size(), base.jobs, [&](std::size_t i) {
    SweepMRow& row = rows[i];
    row.n = base.n;
    row.m = m_values[i];
    row.ratio = row.m * std::log(static_cast<double>(row.n)) / row.n;
    ExperimentConfig cfg = base;
    cfg.m = row.m;
    cfg.delta_sweep.clear();
    cfg.jobs = 1;
    try {
      const TheoremReport r = run_theorem_experiment(cfg);
      row.verdict = r.verdict;
      row.min_crit_clearance = r.min_crit_clearance;
      if (!r.complete()) row.error = r.errors.front().stage + ": " + r.errors.front().message;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

void write_sweep_m_csv(std::ostream& os, std::span<const SweepMRow> rows) {
  os << "n,m,m_log_n_over_n,verdict,min_crit_distance,error\n";
  char buf[64];
  for (const SweepMRow& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    os << r.n << ',' << r.m << ',';
    std::snprintf(buf, sizeof buf, "%.10g", r.ratio);
    os << buf << ',' << (r.verdict ? "true" : "false") << ',';
    std::snprintf(buf, sizeof buf, "%.10g", r.min_crit_clearance);
    os << buf << ",\"" << err << "\"\n";
  }
}

namespace {

struct TrialOutcome {
  double torus_ratio = 0.0;
  std::vector<LemmaViolation> violations;
};

TrialOutcome torus_trial(const LemmaSuiteOptions& opts, int trial) {
  std::mt19937_64 rng(mix(opts.seed ^ mix(static_cast<std::uint64_t>(trial))));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_m(opts.m_lo, opts.m_hi);
  const int m = pick_m(rng);
  std::vector<double> x(static_cast<std::size_t>(m));
  switch (trial % 3) {
    case 0:
      for (double& v : x) v = unit(rng);
      break;
    case 1: {  // clustered
      const double c = unit(rng);
      const double w = 0.05 * unit(rng);
      for (double& v : x) v = c + w * unit(rng);
      break;
    }
    default: {  // on the search grid
      std::uniform_int_distribution<int> cell(0, 100 * m - 1);
      for (double& v : x) v = cell(rng) / (100.0 * m);
      break;
    }
  }
  const TorusConfig cfg(x);
  TrialOutcome out;
  const auto dump = [&] { return json{{"m", m}, {"points", cfg.points}}.dump(); };
  try {
    const TorusPoint p = torus_low_potential_point(cfg);
    out.torus_ratio = p.value / p.bound;
    if (p.min_distance < 1.0 / (10.0 * m)) out.violations.push_back({"torus_min_distance", dump()});
    if (p.value > 20.0 * m * std::log(20.0 * m)) out.violations.push_back({"torus_bound", dump()});
    if (m >= 5 && p.value > 60.0 * m * std::log(static_cast<double>(m)))
      out.violations.push_back({"torus_60mlogm", dump()});
  } catch (const std::exception& e) {
    out.violations.push_back({std::string("torus_exception: ") + e.what(), dump()});
  }
  return out;
}

TrialOutcome curve_trial(const LemmaSuiteOptions& opts, int trial) {
  std::mt19937_64 rng(mix(~opts.seed ^ mix(static_cast<std::uint64_t>(trial))));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_m(1, 20);
  std::uniform_int_distribution<int> pick_v(0, 4);
  const int m = pick_m(rng);

  std::vector<Complex> verts{Complex{0.0}};
  const int inner = pick_v(rng);
  for (int i = 0; i < inner; ++i) verts.emplace_back(2.0 * unit(rng) - 0.5, 2.0 * unit(rng) - 1.0);
  verts.push_back(std::polar(1.0, 2.0 * std::numbers::pi * unit(rng)));
  const Curve curve(verts);
  std::vector<Complex> z;
  while (static_cast<int>(z.size()) < m) {
    const Complex c{3.0 * unit(rng) - 1.5, 3.0 * unit(rng) - 1.5};
    if (curve.distance_to(c) > 1e-6) z.push_back(c);
  }
  const ChargeSet charges(z);

  TrialOutcome out;
  const auto dump = [&] {
    json j{{"curve", points(curve.vertices())}, {"charges", points(charges.charges)}};
    return j.dump();
  };
  try {
    const LemmaBound lb = lemma1_curve_bound(charges, curve);
    if (lb.value > lb.projected * (1.0 + 1e-9) || lb.projected > lb.torus_value * (1.0 + 1e-9) ||
        lb.torus_value > lb.bound)
      out.violations.push_back({"curve_chain", dump()});
    const double direct = modulus_potential(charges, lb.point) * lb.scale;
    if (std::abs(direct - lb.value) > 1e-6 * lb.value) out.violations.push_back({"curve_frame", dump()});
  } catch (const std::exception& e) {
    out.violations.push_back({std::string("curve_exception: ") + e.what(), dump()});
  }
  return out;
}

}  // namespace

LemmaSuiteReport run_lemma_suite(const LemmaSuiteOptions& opts) {
  if (opts.trials < 1) throw ConfigError("lemma suite: trials must be >= 1");
  if (opts.m_lo < 1 || opts.m_hi < opts.m_lo) throw ConfigError("lemma suite: invalid m range");
  const std::size_t trials = static_cast<std::size_t>(opts.trials);
  std::vector<TrialOutcome> torus(trials);
  std::vector<TrialOutcome> curves(trials);
  detail::parallel_for(trials, opts.jobs, [&](std::size_t i) {
    torus[i] = torus_trial(opts, static_cast<int>(i));
    curves[i] = curve_trial(opts, static_cast<int>(i));
  });

  LemmaSuiteReport rep;
  rep.torus_trials = opts.trials;
  rep.curve_trials = opts.trials;
  for (auto* set : {&torus, &curves}) {
    for (auto& t : *set) {
      rep.worst_torus_ratio = std::max(rep.worst_torus_ratio, t.torus_ratio);
      for (auto& v : t.violations) rep.violations.push_back(std::move(v));
    }
  }

  rep.sharp.resize(opts.sharp_ms.size());
  detail::parallel_for(rep.sharp.size(), opts.jobs, [&](std::size_t i) {
    const SharpExample ex = sharp_example(opts.sharp_ms[i]);
    rep.sharp[i] = {opts.sharp_ms[i], ex.min.value, ex.ratio, ex.lower_bound, ex.min.certified};
  });
  for (const SharpRow& s : rep.sharp) {
    if (s.value < s.lower_bound) rep.violations.push_back({"sharp_lower_bound", json{{"m", s.m}}.dump()});
  }
  return rep;
}

std::string lemma_report_to_json(const LemmaSuiteReport& r, int indent) {
  json j;
  j["version"] = version();
  j["torus_trials"] = r.torus_trials;
  j["curve_trials"] = r.curve_trials;
  j["worst_torus_ratio"] = r.worst_torus_ratio;
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"kind", x.kind}, {"instance", json::parse(x.instance)}});
  j["violations"] = v;
  json s = json::array();
  for (const auto& row : r.sharp) {
    s.push_back({{"m", row.m},
                 {"value", row.value},
                 {"ratio", row.ratio},
                 {"lower_bound", row.lower_bound},
                 {"certified", row.certified}});
  }
  j["sharp"] = s;
  return j.dump(indent);
}

}  // namespace gllab
