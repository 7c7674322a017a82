#include "gllab/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "gllab/errors.hpp"

namespace gllab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Complex> close_loop(std::span<const Complex> v) {
  std::vector<Complex> loop(v.begin(), v.end());
  if (!loop.empty() && loop.front() != loop.back()) loop.push_back(loop.front());
  return loop;
}

std::vector<Complex> resample(const std::vector<Complex>& loop, double refinement) {
  std::vector<Complex> out;
  if (loop.empty()) return out;
  out.push_back(loop.front());
  for (std::size_t i = 1; i < loop.size(); ++i) {
    const Complex a = loop[i - 1];
    const Complex b = loop[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) * refinement)));
    for (int k = 1; k <= pieces; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
  }
  return out;
}

struct Winder {
  const HolomorphicFn& f;
  const Contour& contour;
  const CountOptions& opts;
  int deepest = 0;

  Complex sample(Complex z) const {
    const Complex v = f.value(z);
    if (v == Complex{0.0} || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw RootOnContour("zero of the function on the contour");
    if (f.zero_radius && f.zero_radius(z) < contour.clearance())
      throw RootOnContour("zero closer than the contour clearance");
    return v;
  }

  double segment(Complex a, Complex fa, Complex b, Complex fb, int depth) {
    const double inc = std::arg(fb * std::conj(fa));
    if (std::abs(inc) <= 0.5 * std::numbers::pi) {
      deepest = std::max(deepest, depth);
      return inc;
    }
    if (depth >= opts.max_refine)
      throw NonIntegerWinding("argument increment above pi/2 after refinement", kInf);
    const Complex m = contour.midpoint(a, b);
    const Complex fm = sample(m);
    return segment(a, fa, m, fm, depth + 1) + segment(m, fm, b, fb, depth + 1);
  }
};

}  // namespace

Contour Contour::circle(Complex center, double radius, double refinement) {
  Contour c;
  c.kind = Kind::circle;
  c.center = center;
  c.radius = radius;
  c.refinement = refinement;
  const int n = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * radius * refinement)));
  std::vector<Complex> loop(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) loop[k] = center + std::polar(radius, 2.0 * std::numbers::pi * k / n);
  loop[n] = loop[0];
  c.loops.push_back(std::move(loop));
  return c;
}

Contour Contour::polygon_loop(std::span<const Complex> vertices, double refinement) {
  Contour c;
  c.kind = Kind::polygon_loop;
  c.refinement = refinement;
  c.loops.push_back(close_loop(vertices));
  return c;
}

Contour Contour::grid_boundary(std::vector<std::vector<Complex>> loops, double refinement) {
  Contour c;
  c.kind = Kind::grid_boundary;
  c.refinement = refinement;
  for (auto& l : loops) c.loops.push_back(close_loop(l));
  return c;
}

double Contour::length() const noexcept {
  double len = 0.0;
  for (const auto& loop : loops)
    for (std::size_t i = 1; i < loop.size(); ++i) len += std::abs(loop[i] - loop[i - 1]);
  return len;
}

Complex Contour::midpoint(Complex a, Complex b) const noexcept {
  const Complex m = 0.5 * (a + b);
  if (kind != Kind::circle) return m;
  const Complex off = m - center;
  const double r = std::abs(off);
  if (r == 0.0) return m;
  return center + off * (radius / r);
}

std::vector<std::vector<Complex>> sample_loops(const Contour& c) {
  if (c.kind == Contour::Kind::circle) return c.loops;
  std::vector<std::vector<Complex>> out;
  out.reserve(c.loops.size());
  for (const auto& loop : c.loops) out.push_back(resample(loop, c.refinement));
  return out;
}

HolomorphicFn holomorphic(const Polynomial& p) {
  HolomorphicFn f;
  f.value = [p](Complex z) { return p(z); };
  f.zero_radius = [p](Complex z) {
    const auto& c = p.coeffs();
    Complex v = c.back();
    Complex dv{0.0};
    for (std::size_t k = c.size() - 1; k-- > 0;) {
      dv = dv * z + v;
      v = v * z + c[k];
    }
    if (v == Complex{0.0}) return 0.0;
    if (dv == Complex{0.0}) return kInf;
    return static_cast<double>(p.degree()) * std::abs(v / dv);
  };
  return f;
}

HolomorphicFn derivative_of_product(std::span<const Complex> roots_in) {
  auto roots = std::make_shared<std::vector<Complex>>(roots_in.begin(), roots_in.end());

  // Splits off the nearest root a*: p' = P*(z) (1 + (z - a*) S) with
  // P* = prod_{j != *} (z - a_j) and S = sum_{j != *} 1/(z - a_j).
  struct Split {
    Complex phase;  // unit-modulus argument of P*
    Complex d;
    Complex s;
    Complex t;  // sum_{j != *} 1/(z - a_j)^2
  };
  const auto split = [roots](Complex z) {
    const auto& a = *roots;
    std::size_t near = 0;
    double best = kInf;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double dist = std::abs(z - a[j]);
      if (dist < best) {
        best = dist;
        near = j;
      }
    }
    Split out{Complex{1.0}, z - a[near], Complex{0.0}, Complex{0.0}};
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j == near) continue;
      const Complex w = z - a[j];
      out.phase *= w / std::abs(w);
      const Complex inv = 1.0 / w;
      out.s += inv;
      out.t += inv * inv;
    }
    out.phase /= std::abs(out.phase);
    return out;
  };

  HolomorphicFn f;
  f.value = [split, roots](Complex z) {
    if (roots->empty()) return Complex{0.0};
    const Split sp = split(z);
    const Complex tail = 1.0 + sp.d * sp.s;
    const double mag = std::abs(tail);
    if (mag == 0.0) return Complex{0.0};
    return sp.phase * (tail / mag);
  };
  f.zero_radius = [split, roots](Complex z) {
    if (roots->size() < 2) return kInf;
    const Split sp = split(z);
    const Complex num = 1.0 + sp.s * sp.d;
    const Complex den = 2.0 * sp.s + (sp.s * sp.s - sp.t) * sp.d;
    if (den == Complex{0.0}) return kInf;
    return static_cast<double>(roots->size() - 1) * std::abs(num / den);
  };
  return f;
}

WindingCount count_zeros(const HolomorphicFn& f, const Contour& c, const CountOptions& opts) {
  Winder w{f, c, opts};
  double total = 0.0;
  for (const auto& loop : sample_loops(c)) {
    if (loop.size() < 2) continue;
    Complex prev = loop.front();
    Complex fprev = w.sample(prev);
    for (std::size_t i = 1; i < loop.size(); ++i) {
      const Complex cur = loop[i];
      const Complex fcur = w.sample(cur);
      total += w.segment(prev, fprev, cur, fcur, 0);
      prev = cur;
      fprev = fcur;
    }
  }
  WindingCount out;
  out.raw = total / (2.0 * std::numbers::pi);
  out.count = static_cast<int>(std::lround(out.raw));
  out.refinements = w.deepest;
  if (std::abs(out.raw - out.count) > opts.winding_tol)
    throw NonIntegerWinding("winding " + std::to_string(out.raw) + " is not near an integer", out.raw);
  return out;
}

int count_roots_in(const Polynomial& p, const Contour& c, const CountOptions& opts) {
  return count_zeros(holomorphic(p), c, opts).count;
}

Dominance rouche_dominates(const std::function<double(Complex)>& abs_f,
                           const std::function<double(Complex)>& abs_g, const Contour& c) {
  double margin = kInf;
  for (const auto& loop : sample_loops(c))
    for (const Complex z : loop) margin = std::min(margin, abs_f(z) - abs_g(z));
  return {margin > 0.0, margin};
}

Dominance rouche_dominates(const Polynomial& f, const Polynomial& g, const Contour& c) {
  return rouche_dominates([&f](Complex z) { return std::abs(f(z)); },
                          [&g](Complex z) { return std::abs(g(z)); }, c);
}

}  // namespace gllab
