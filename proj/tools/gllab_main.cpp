#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gllab/charges.hpp"
#include "gllab/errors.hpp"
#include "gllab/harness.hpp"
#include "gllab/supercharge.hpp"
#include "gllab/svg.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kAssertion = 1;
constexpr int kConfig = 2;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
  std::optional<double> resolution;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gllab::ConfigError("cannot read config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

gllab::ExperimentConfig load_config(const Globals& g) {
  if (g.config.empty()) throw gllab::ConfigError("--config is required for this subcommand");
  gllab::ExperimentConfig cfg = gllab::parse_config(read_file(g.config));
  if (g.seed) cfg.seed = *g.seed;
  if (g.resolution) cfg.resolution = *g.resolution;
  cfg.jobs = g.jobs;
  gllab::validate(cfg);
  return cfg;
}

// Writes to <out>/<name>, or to stdout when no --out was given.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(g.out);
  const auto path = std::filesystem::path(g.out) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw gllab::Error("cannot write " + path.string());
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
  std::cerr << "wrote " << path.string() << '\n';
}

int cmd_theorem(const Globals& g) {
  const auto cfg = load_config(g);
  const auto report = gllab::run_theorem_experiment(cfg);
  emit(g, "theorem_report.json", gllab::report_to_json(report));
  std::fprintf(stderr, "roots in K %d, outside %d, critical points in K_eps %d, elsewhere %d: verdict %s\n",
               report.roots_in_K, report.roots_outside, report.crit_in_Keps, report.crit_elsewhere,
               report.verdict ? "true" : "false");
  for (const auto& e : report.errors)
    std::fprintf(stderr, "stage %s failed (%s): %s\n", e.stage.c_str(), e.type.c_str(), e.message.c_str());
  return report.verdict ? kOk : kAssertion;
}

int cmd_sweep_m(const Globals& g, const std::vector<int>& ms) {
  const auto cfg = load_config(g);
  const auto rows = gllab::sweep_m(cfg, ms);
  std::ostringstream csv;
  gllab::write_sweep_m_csv(csv, rows);
  emit(g, "sweep_m.csv", csv.str());
  return kOk;
}

int cmd_lemma(const Globals& g, int trials, const std::vector<int>& m_range, const std::vector<int>& sharp_ms) {
  gllab::LemmaSuiteOptions opts;
  opts.trials = trials;
  opts.m_lo = m_range.at(0);
  opts.m_hi = m_range.at(1);
  opts.seed = g.seed.value_or(0);
  opts.sharp_ms = sharp_ms;
  opts.jobs = g.jobs;
  const auto report = gllab::run_lemma_suite(opts);
  emit(g, "lemma_report.json", gllab::lemma_report_to_json(report));
  std::fprintf(stderr, "%d torus and %d curve trials, %zu violations, worst value/bound %.4f\n",
               report.torus_trials, report.curve_trials, report.violations.size(), report.worst_torus_ratio);
  return report.violations.empty() ? kOk : kAssertion;
}

int cmd_sharp(const Globals& g, const std::vector<int>& ms) {
  std::ostringstream csv;
  csv << "m,value,ratio,lower_bound,t,certified\n";
  bool ok = true;
  for (const int m : ms) {
    const auto ex = gllab::sharp_example(m);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.10g,%.12g,%.10g,%s\n", m, ex.min.value, ex.ratio, ex.lower_bound,
                  ex.min.t, ex.min.certified ? "true" : "false");
    csv << buf;
    ok = ok && ex.min.certified && ex.min.value >= ex.lower_bound;
  }
  emit(g, "sharp.csv", csv.str());
  return ok ? kOk : kAssertion;
}

int cmd_supercharge(const Globals& g, const std::vector<int>& ms, const std::vector<double>& margins,
                    int restarts, std::size_t budget) {
  gllab::SearchConfig base;
  base.restarts = restarts;
  base.budget = budget;
  base.seed = g.seed.value_or(0);
  base.jobs = g.jobs;
  for (const int m : ms) {
    base.m = m;
    gllab::validate(base);
  }
  for (const double margin : margins) {
    base.exclusion_margin = margin;
    gllab::validate(base);
  }
  const auto rows = gllab::conjecture_sweep(base.curve, ms, margins, base);
  std::ostringstream csv;
  gllab::write_sweep_csv(csv, rows);
  emit(g, "supercharge.csv", csv.str());
  bool ok = true;
  for (const auto& r : rows) {
    if (!r.certified || r.achieved > r.lemma_ceiling) {
      std::fprintf(stderr, "m=%d margin=%g: certified=%d achieved=%g ceiling=%g\n", r.m, r.margin,
                   static_cast<int>(r.certified), r.achieved, r.lemma_ceiling);
      ok = false;
    }
  }
  return ok ? kOk : kAssertion;
}

int cmd_render(const Globals& g, std::size_t delta_index) {
  const auto cfg = load_config(g);
  const auto report = gllab::run_theorem_experiment(cfg);
  std::ostringstream svg;
  gllab::emit_svg(gllab::scene_from_report(report, delta_index), svg);
  emit(g, "adelta.svg", svg.str());
  for (const auto& e : report.errors)
    std::fprintf(stderr, "stage %s failed (%s): %s\n", e.stage.c_str(), e.type.c_str(), e.message.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on critical points of polynomials with a few outside roots"};
  app.set_version_flag("--version", std::string(gllab::version()));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "experiment config (JSON)");
  app.add_option("--seed", g.seed, "override the config seed");
  app.add_option("--out", g.out, "output directory (default: stdout)");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--resolution", g.resolution, "A_delta grid cells per unit length")->check(CLI::PositiveNumber);

  auto* theorem = app.add_subcommand("theorem", "count critical points near K and analyse A_delta");

  std::vector<int> sweep_ms{1, 5, 10, 50, 100, 250};
  auto* sweep = app.add_subcommand("sweep-m", "verdict as the number of outside roots grows");
  sweep->add_option("--m-values", sweep_ms, "outside root counts")->delimiter(',');

  int trials = 1000;
  std::vector<int> m_range{5, 200};
  std::vector<int> lemma_sharp{10, 100, 1000};
  auto* lemma = app.add_subcommand("lemma", "random checks of the low-potential certificate");
  lemma->add_option("--trials", trials)->check(CLI::PositiveNumber);
  lemma->add_option("--m-range", m_range)->expected(2);
  lemma->add_option("--sharp", lemma_sharp)->delimiter(',');

  std::vector<int> sharp_ms{10, 50, 100, 500, 1000};
  auto* sharp = app.add_subcommand("sharp", "minimum potential of the extremal configuration");
  sharp->add_option("--m", sharp_ms)->delimiter(',');

  std::vector<int> sc_ms{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> margins{1e-3};
  int restarts = 8;
  std::size_t budget = 4000;
  auto* supercharge = app.add_subcommand("supercharge", "maximise the minimum field along the unit segment");
  supercharge->add_option("--m", sc_ms)->delimiter(',');
  supercharge->add_option("--margin", margins)->delimiter(',');
  supercharge->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  supercharge->add_option("--budget", budget)->check(CLI::PositiveNumber);

  std::size_t delta_index = 0;
  auto* render = app.add_subcommand("render", "draw K, K_eps, roots, critical points and A_delta as SVG");
  render->add_option("--delta-index", delta_index, "which entry of delta_sweep to draw");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (theorem->parsed()) return cmd_theorem(g);
    if (sweep->parsed()) return cmd_sweep_m(g, sweep_ms);
    if (m_range.size() != 2 || m_range[0] < 1 || m_range[1] < m_range[0])
      throw gllab::ConfigError("--m-range needs 1 <= lo <= hi");
    if (lemma->parsed()) return cmd_lemma(g, trials, m_range, lemma_sharp);
    if (sharp->parsed()) return cmd_sharp(g, sharp_ms);
    if (supercharge->parsed()) return cmd_supercharge(g, sc_ms, margins, restarts, budget);
    if (render->parsed()) return cmd_render(g, delta_index);
  } catch (const gllab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAssertion;
  }
  return kConfig;
}
