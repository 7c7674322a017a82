#include "gllab/adelta.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <ostream>
#include <cstdio>
#include <stdexcept>

#include "gllab/contour.hpp"

namespace gllab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// delta-independent part of the indicator: g = excess - delta * inv_r
struct FieldTerms {
  double excess = 0.0;
  double inv_r = 0.0;
  double q_field = 0.0;
  double r_field = 0.0;
  bool singular = false;
};

FieldTerms field_terms(std::span<const Complex> inside, std::span<const Complex> outside, Complex z) {
  FieldTerms t;
  Complex qs{0.0};
  for (const Complex a : inside) {
    const Complex d = z - a;
    const double n2 = std::norm(d);
    if (n2 <= tolerance::singular_guard * tolerance::singular_guard) {
      t.singular = true;
      return t;
    }
    qs += std::conj(d) / n2;
  }
  Complex rs{0.0};
  double log_r = 0.0;
  for (const Complex b : outside) {
    const Complex d = z - b;
    const double n2 = std::norm(d);
    if (n2 <= tolerance::singular_guard * tolerance::singular_guard) {
      t.singular = true;
      return t;
    }
    rs += std::conj(d) / n2;
    log_r += 0.5 * std::log(n2);
  }
  t.q_field = std::abs(qs);
  t.r_field = std::abs(rs);
  t.excess = t.q_field - t.r_field;
  t.inv_r = std::exp(-log_r);
  return t;
}

struct FieldGrid {
  Box bbox;
  double resolution = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> excess;
  std::vector<double> inv_r;
  struct Witness {
    std::size_t cell;
    double excess;
    double inv_r;
  };
  std::vector<Witness> witnesses;
};

FieldGrid evaluate_grid(const RootSplit& split, const Box& bbox, double resolution,
                        std::span<const Complex> witnesses) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0)) throw std::invalid_argument("empty bbox");
  FieldGrid g;
  g.resolution = resolution;
  const double h = 1.0 / resolution;
  g.nx = std::max(1, static_cast<int>(std::ceil(bbox.width() * resolution - 1e-9)));
  g.ny = std::max(1, static_cast<int>(std::ceil(bbox.height() * resolution - 1e-9)));
  g.bbox = {bbox.xmin, bbox.xmin + g.nx * h, bbox.ymin, bbox.ymin + g.ny * h};

  for (const Complex w : witnesses) {
    if (!g.bbox.contains(w)) {
      throw GrowBBox("bbox does not contain every witness point",
                     g.bbox.expanded_to(w).inflated(0.25 * std::max(g.bbox.width(), g.bbox.height())));
    }
  }

  const auto& inside = split.inside();
  const auto& outside = split.outside();
  const std::size_t cells = static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
  g.excess.resize(cells);
  g.inv_r.resize(cells);
  for (int iy = 0; iy < g.ny; ++iy) {
    const double y = g.bbox.ymin + (iy + 0.5) * h;
    for (int ix = 0; ix < g.nx; ++ix) {
      const Complex z{g.bbox.xmin + (ix + 0.5) * h, y};
      FieldTerms t = field_terms(inside, outside, z);
      if (t.singular) {
        // one subdivision; the first regular sub-centre decides the cell
        for (const Complex off : {Complex{-0.25, -0.25}, Complex{0.25, -0.25},
                                  Complex{-0.25, 0.25}, Complex{0.25, 0.25}}) {
          t = field_terms(inside, outside, z + off * h);
          if (!t.singular) break;
        }
      }
      const std::size_t idx = static_cast<std::size_t>(iy) * g.nx + ix;
      g.excess[idx] = t.singular ? kInf : t.excess;
      g.inv_r[idx] = t.singular ? 0.0 : t.inv_r;
    }
  }

  for (const Complex w : witnesses) {
    const FieldTerms t = field_terms(inside, outside, w);
    if (t.singular) continue;
    const int ix = std::clamp(static_cast<int>(std::floor((w.real() - g.bbox.xmin) * resolution)), 0, g.nx - 1);
    const int iy = std::clamp(static_cast<int>(std::floor((w.imag() - g.bbox.ymin) * resolution)), 0, g.ny - 1);
    g.witnesses.push_back({static_cast<std::size_t>(iy) * g.nx + ix, t.excess, t.inv_r});
  }
  return g;
}

void label_components(RegionMask& m, double equality_tol) {
  const std::size_t cells = m.indicator.size();
  m.labels.assign(cells, -1);
  std::vector<char> inside(cells);
  for (std::size_t i = 0; i < cells; ++i) inside[i] = m.indicator[i] <= equality_tol;

  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < cells; ++start) {
    if (!inside[start] || m.labels[start] >= 0) continue;
    m.labels[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const int ix = static_cast<int>(c % m.nx);
      const int iy = static_cast<int>(c / m.nx);
      const auto visit = [&](int jx, int jy) {
        if (jx < 0 || jy < 0 || jx >= m.nx || jy >= m.ny) return;
        const std::size_t n = m.index(jx, jy);
        if (inside[n] && m.labels[n] < 0) {
          m.labels[n] = next;
          stack.push_back(n);
        }
      };
      visit(ix - 1, iy);
      visit(ix + 1, iy);
      visit(ix, iy - 1);
      visit(ix, iy + 1);
    }
    ++next;
  }
  m.components = next;
}

RegionMask mask_from_grid(const FieldGrid& g, double delta, const MaskOptions& opts) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  RegionMask m;
  m.bbox = g.bbox;
  m.resolution = g.resolution;
  m.nx = g.nx;
  m.ny = g.ny;
  m.delta = delta;
  m.indicator.resize(g.excess.size());
  for (std::size_t i = 0; i < g.excess.size(); ++i) m.indicator[i] = g.excess[i] - delta * g.inv_r[i];
  for (const auto& w : g.witnesses)
    m.indicator[w.cell] = std::min(m.indicator[w.cell], w.excess - delta * w.inv_r);

  const auto edge_inside = [&](int ix, int iy) { return m.indicator[m.index(ix, iy)] <= opts.equality_tol; };
  bool touches = false;
  for (int ix = 0; ix < m.nx && !touches; ++ix) touches = edge_inside(ix, 0) || edge_inside(ix, m.ny - 1);
  for (int iy = 0; iy < m.ny && !touches; ++iy) touches = edge_inside(0, iy) || edge_inside(m.nx - 1, iy);
  if (touches) {
    throw GrowBBox("A_delta reaches the bbox boundary",
                   m.bbox.inflated(0.5 * std::max(m.bbox.width(), m.bbox.height())));
  }
  label_components(m, opts.equality_tol);
  return m;
}

std::vector<Complex> merge_collinear(const std::vector<Complex>& loop) {
  // loop is closed; drop corners where the direction does not change
  if (loop.size() < 4) return loop;
  std::vector<Complex> open(loop.begin(), loop.end() - 1);
  std::vector<Complex> out;
  const std::size_t n = open.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex prev = open[(i + n - 1) % n];
    const Complex next = open[(i + 1) % n];
    if (std::abs(cross(open[i] - prev, next - open[i])) > 0.0) out.push_back(open[i]);
  }
  if (out.empty()) return loop;
  out.push_back(out.front());
  return out;
}

}  // namespace

RootSplit::RootSplit(const ConvexDomain& k, std::vector<Complex> inside, std::vector<Complex> outside)
    : inside_(std::move(inside)), outside_(std::move(outside)) {
  for (const Complex a : inside_)
    if (!k.contains(a)) throw std::invalid_argument("RootSplit: inside root not in K");
  for (const Complex b : outside_)
    if (k.contains(b)) throw std::invalid_argument("RootSplit: outside root lies in K");
}

RootSplit RootSplit::classify(const ConvexDomain& k, std::span<const Complex> roots) {
  RootSplit s;
  for (const Complex a : roots) (k.contains(a) ? s.inside_ : s.outside_).push_back(a);
  return s;
}

std::vector<Complex> RootSplit::all_roots() const {
  std::vector<Complex> all = inside_;
  all.insert(all.end(), outside_.begin(), outside_.end());
  return all;
}

double adelta_indicator(const RootSplit& split, double delta, Complex z) {
  const FieldTerms t = field_terms(split.inside(), split.outside(), z);
  if (t.singular) throw SingularPoint("adelta_indicator: point within guard of a root");
  return t.excess - delta * t.inv_r;
}

Complex RegionMask::cell_center(int ix, int iy) const noexcept {
  const double h = cell_size();
  return {bbox.xmin + (ix + 0.5) * h, bbox.ymin + (iy + 0.5) * h};
}

Complex RegionMask::cell_center(std::size_t idx) const noexcept {
  return cell_center(static_cast<int>(idx % nx), static_cast<int>(idx / nx));
}

std::optional<std::size_t> RegionMask::cell_of(Complex z) const noexcept {
  if (!bbox.contains(z)) return std::nullopt;
  const int ix = std::clamp(static_cast<int>(std::floor((z.real() - bbox.xmin) * resolution)), 0, nx - 1);
  const int iy = std::clamp(static_cast<int>(std::floor((z.imag() - bbox.ymin) * resolution)), 0, ny - 1);
  return index(ix, iy);
}

int RegionMask::label_at(Complex z) const noexcept {
  const auto c = cell_of(z);
  return c ? labels[*c] : -1;
}

std::vector<std::size_t> RegionMask::cell_count_per_component() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(components), 0);
  for (const int l : labels)
    if (l >= 0) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

RegionMask build_mask(const RootSplit& split, double delta, const Box& bbox, double resolution,
                      std::span<const Complex> witnesses, const MaskOptions& opts) {
  return mask_from_grid(evaluate_grid(split, bbox, resolution, witnesses), delta, opts);
}

std::vector<RegionMask> build_masks(const RootSplit& split, std::span<const double> deltas,
                                    const Box& bbox, double resolution,
                                    std::span<const Complex> witnesses, const MaskOptions& opts) {
  const FieldGrid g = evaluate_grid(split, bbox, resolution, witnesses);
  std::vector<RegionMask> out;
  out.reserve(deltas.size());
  for (const double d : deltas) out.push_back(mask_from_grid(g, d, opts));
  return out;
}

void write_mask_csv(const RegionMask& mask, std::ostream& os) {
  os << "x,y,g,label\n";
  char buf[128];
  for (std::size_t i = 0; i < mask.indicator.size(); ++i) {
    const Complex z = mask.cell_center(i);
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%d\n", z.real(), z.imag(), mask.indicator[i], mask.labels[i]);
    os << buf;
  }
}

Box default_bbox(const RootSplit& split, const ConvexDomain& k, double eps) {
  Box b = k.bounds();
  for (const Complex z : split.inside()) b = b.expanded_to(z);
  for (const Complex z : split.outside()) b = b.expanded_to(z);
  return b.inflated(2.0 * (eps + k.diameter()));
}

std::vector<std::vector<std::vector<Complex>>> trace_boundaries(const RegionMask& mask) {
  using Vertex = long long;
  const long long stride = mask.nx + 1;
  const auto vid = [stride](int ix, int iy) { return static_cast<Vertex>(iy) * stride + ix; };
  struct Edge {
    Vertex from;
    Vertex to;
    std::size_t in;   // cell of the component
    int out_x;        // 4-neighbour across the edge, possibly off the grid
    int out_y;
  };
  std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(mask.components));

  const auto label = [&](int ix, int iy) {
    if (ix < 0 || iy < 0 || ix >= mask.nx || iy >= mask.ny) return -1;
    return mask.labels[mask.index(ix, iy)];
  };
  for (int iy = 0; iy < mask.ny; ++iy) {
    for (int ix = 0; ix < mask.nx; ++ix) {
      const int l = label(ix, iy);
      if (l < 0) continue;
      auto& e = edges[static_cast<std::size_t>(l)];
      // counterclockwise around the cell, so the component is on the left
      const std::size_t in = mask.index(ix, iy);
      if (label(ix, iy - 1) != l) e.push_back({vid(ix, iy), vid(ix + 1, iy), in, ix, iy - 1});
      if (label(ix + 1, iy) != l) e.push_back({vid(ix + 1, iy), vid(ix + 1, iy + 1), in, ix + 1, iy});
      if (label(ix, iy + 1) != l) e.push_back({vid(ix + 1, iy + 1), vid(ix, iy + 1), in, ix, iy + 1});
      if (label(ix - 1, iy) != l) e.push_back({vid(ix, iy + 1), vid(ix, iy), in, ix - 1, iy});
    }
  }

  const double h = mask.cell_size();
  // zero of the indicator on the segment between the two cell centres; the
  // edge midpoint when there is no sign change (forced witness cells)
  const auto crossing = [&](const Edge& edge) {
    const Complex a = mask.cell_center(edge.in);
    const Complex b = a + h * Complex{static_cast<double>(edge.out_x - static_cast<int>(edge.in % mask.nx)),
                                      static_cast<double>(edge.out_y - static_cast<int>(edge.in / mask.nx))};
    double t = 0.5;
    if (edge.out_x >= 0 && edge.out_y >= 0 && edge.out_x < mask.nx && edge.out_y < mask.ny) {
      const double ga = mask.indicator[edge.in];
      const double gb = mask.indicator[mask.index(edge.out_x, edge.out_y)];
      if (ga <= 0.0 && gb > 0.0 && std::isfinite(ga) && std::isfinite(gb)) t = std::clamp(ga / (ga - gb), 1e-3, 1.0 - 1e-3);
    }
    return a + t * (b - a);
  };
  const auto dir = [stride](Vertex a, Vertex b) {
    return std::pair<long long, long long>{b % stride - a % stride, b / stride - a / stride};
  };

  std::vector<std::vector<std::vector<Complex>>> out(static_cast<std::size_t>(mask.components));
  for (std::size_t c = 0; c < edges.size(); ++c) {
    const auto& e = edges[c];
    std::multimap<Vertex, std::size_t> from;
    for (std::size_t i = 0; i < e.size(); ++i) from.emplace(e[i].from, i);
    std::vector<char> used(e.size(), 0);
    for (std::size_t start = 0; start < e.size(); ++start) {
      if (used[start]) continue;
      std::vector<Complex> loop{crossing(e[start])};
      std::size_t cur = start;
      used[cur] = 1;
      while (true) {
        if (e[cur].to == e[start].from) {
          loop.push_back(loop.front());
          break;
        }
        const auto [in_dx, in_dy] = dir(e[cur].from, e[cur].to);
        std::size_t pick = e.size();
        int best_rank = 3;
        const auto range = from.equal_range(e[cur].to);
        for (auto it = range.first; it != range.second; ++it) {
          if (used[it->second]) continue;
          const auto [dx, dy] = dir(e[it->second].from, e[it->second].to);
          // prefer left turn, then straight, then right
          const int rank = (dx == -in_dy && dy == in_dx) ? 0 : (dx == in_dx && dy == in_dy) ? 1 : 2;
          if (rank < best_rank) {
            best_rank = rank;
            pick = it->second;
          }
        }
        if (pick == e.size()) break;  // unreachable for a valid edge set
        used[pick] = 1;
        cur = pick;
        loop.push_back(crossing(e[cur]));
      }
      out[c].push_back(merge_collinear(loop));
    }
  }
  return out;
}

std::vector<int> count_by_component(const RegionMask& mask, std::span<const Complex> points) {
  std::vector<int> counts(static_cast<std::size_t>(mask.components), 0);
  for (const Complex z : points) {
    const int l = mask.label_at(z);
    if (l >= 0) ++counts[static_cast<std::size_t>(l)];
  }
  return counts;
}

std::vector<ComponentReport> classify_components(const RegionMask& mask, const RootSplit& split,
                                                 const ConvexDomain& k, double eps,
                                                 const ClassifyOptions& opts) {
  if (!(eps > 0.0)) throw InvalidEpsilon("epsilon must be positive");
  std::vector<ComponentReport> reports(static_cast<std::size_t>(mask.components));
  for (std::size_t c = 0; c < reports.size(); ++c) reports[c].id = static_cast<int>(c);

  for (std::size_t idx = 0; idx < mask.labels.size(); ++idx) {
    const int l = mask.labels[idx];
    if (l < 0) continue;
    auto& rep = reports[static_cast<std::size_t>(l)];
    ++rep.cells;
    const Complex z = mask.cell_center(idx);
    const double d = k.distance(z);
    if (d == 0.0) rep.touches_K = true;
    if (d > eps) rep.escapes_Keps = true;
  }

  const auto r_counts = count_by_component(mask, split.outside());
  const auto boundaries = trace_boundaries(mask);
  const auto all = split.all_roots();
  const HolomorphicFn dp = derivative_of_product(all);
  const double refinement = opts.samples_per_cell * mask.resolution;

  for (std::size_t c = 0; c < reports.size(); ++c) {
    auto& rep = reports[c];
    rep.r_roots_inside = r_counts[c];
    const Contour contour = Contour::grid_boundary(boundaries[c], refinement);

    try {
      const WindingCount w = count_zeros(dp, contour);
      rep.crit_points_inside = w.count;
      rep.winding_raw = w.raw;
    } catch (const Error& err) {
      rep.count_error = err.what();
    }

    // |q' r| - |q r'| = |q r| (|q'/q| - |r'/r|), magnitudes in log form
    double margin = kInf;
    for (const auto& loop : sample_loops(contour)) {
      for (const Complex z : loop) {
        const FieldTerms t = field_terms(split.inside(), split.outside(), z);
        if (t.singular) {
          margin = std::min(margin, 0.0);
          continue;
        }
        double log_qr = 0.0;
        for (const Complex a : all) log_qr += std::log(std::abs(z - a));
        margin = std::min(margin, std::exp(log_qr) * t.excess);
      }
    }
    rep.rouche_margin = margin;
  }
  return reports;
}

BridgeVerdict bridging_check(const RootSplit& split, double delta, const ConvexDomain& k,
                             double eps, const RegionMask& mask) {
  if (delta != mask.delta) throw std::invalid_argument("bridging_check: mask built for another delta");
  if (!(eps > 0.0)) throw InvalidEpsilon("epsilon must be positive");
  BridgeVerdict out;
  const std::size_t comps = static_cast<std::size_t>(mask.components);
  std::vector<char> touches(comps, 0);
  std::vector<char> escapes(comps, 0);
  for (std::size_t idx = 0; idx < mask.labels.size(); ++idx) {
    const int l = mask.labels[idx];
    if (l < 0) continue;
    const double d = k.distance(mask.cell_center(idx));
    if (d == 0.0) touches[static_cast<std::size_t>(l)] = 1;
    if (d > eps) escapes[static_cast<std::size_t>(l)] = 1;
  }
  int comp = -1;
  for (std::size_t c = 0; c < comps; ++c) {
    if (touches[c] && escapes[c]) {
      comp = static_cast<int>(c);
      break;
    }
  }
  if (comp < 0) return out;

  out.bridge = true;
  out.component = comp;
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(mask.labels.size(), none);
  std::deque<std::size_t> queue;
  for (std::size_t idx = 0; idx < mask.labels.size(); ++idx) {
    if (mask.labels[idx] == comp && k.distance(mask.cell_center(idx)) == 0.0) {
      parent[idx] = idx;
      queue.push_back(idx);
    }
  }
  std::size_t goal = none;
  while (!queue.empty() && goal == none) {
    const std::size_t c = queue.front();
    queue.pop_front();
    if (k.distance(mask.cell_center(c)) > eps) {
      goal = c;
      break;
    }
    const int ix = static_cast<int>(c % mask.nx);
    const int iy = static_cast<int>(c / mask.nx);
    const int nbr[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
    for (const auto& nb : nbr) {
      if (nb[0] < 0 || nb[1] < 0 || nb[0] >= mask.nx || nb[1] >= mask.ny) continue;
      const std::size_t n = mask.index(nb[0], nb[1]);
      if (mask.labels[n] == comp && parent[n] == none) {
        parent[n] = c;
        queue.push_back(n);
      }
    }
  }
  std::vector<std::size_t> path;
  for (std::size_t c = goal; c != none; c = (parent[c] == c ? none : parent[c])) path.push_back(c);
  std::reverse(path.begin(), path.end());
  for (const std::size_t c : path) {
    const Complex z = mask.cell_center(c);
    out.witness.push_back(z);
    const FieldTerms t = field_terms(split.inside(), split.outside(), z);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.outside_field.push_back(t.singular ? nan : t.r_field);
    out.inside_field.push_back(t.singular ? nan : t.q_field);
  }
  return out;
}

double field_lower_bound(int n, double d, double diam) {
  if (n < 1) throw std::invalid_argument("field_lower_bound: n must be >= 1");
  if (!(diam > 0.0)) throw std::invalid_argument("field_lower_bound: diam must be positive");
  if (d < 0.0) throw std::invalid_argument("field_lower_bound: d must be nonnegative");
  return n * d / ((d + diam) * (d + diam));
}

}  // namespace gllab
