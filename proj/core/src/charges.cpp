#include "gllab/charges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gllab/errors.hpp"
#include "gllab/geometry.hpp"

namespace gllab {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

double potential_at(std::span<const Complex> charges, Complex z, PotentialMode mode) noexcept {
  // complex<double> is layout-compatible with double[2]
  const double* xy = reinterpret_cast<const double*>(charges.data());
  const std::size_t m = charges.size();
  const double zx = z.real();
  const double zy = z.imag();
  if (mode == PotentialMode::modulus) {
    double s = 0.0;
#pragma omp simd reduction(+ : s)
    for (std::size_t l = 0; l < m; ++l) {
      const double dx = zx - xy[2 * l];
      const double dy = zy - xy[2 * l + 1];
      s += 1.0 / std::sqrt(dx * dx + dy * dy);
    }
    return s;
  }
  double re = 0.0;
  double im = 0.0;
#pragma omp simd reduction(+ : re, im)
  for (std::size_t l = 0; l < m; ++l) {
    const double dx = zx - xy[2 * l];
    const double dy = zy - xy[2 * l + 1];
    const double inv = 1.0 / (dx * dx + dy * dy);
    re += dx * inv;
    im -= dy * inv;
  }
  return std::hypot(re, im);
}

struct RawMin {
  double t;
  double value;
};

RawMin sampled_min(const ChargeSet& c, const Curve& gamma, PotentialMode mode, std::size_t n) {
  const auto pts = gamma.sample(n);
  std::size_t best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double v = potential_at(c.charges, pts[k], mode);
    if (v < best_v) {
      best_v = v;
      best = k;
    }
  }
  const double step = 1.0 / static_cast<double>(n - 1);
  const double t_best = static_cast<double>(best) * step;

  // golden-section search on the bracket around the best sample
  double lo = std::max(0.0, t_best - step);
  double hi = std::min(1.0, t_best + step);
  const auto f = [&](double t) { return potential_at(c.charges, gamma.at(t), mode); };
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  RawMin out{t_best, best_v};
  const double t_gold = f1 <= f2 ? x1 : x2;
  const double v_gold = std::min(f1, f2);
  if (v_gold < out.value || (v_gold == out.value && t_gold < out.t)) out = {t_gold, v_gold};
  return out;
}

}  // namespace

ChargeSet::ChargeSet(std::vector<Complex> z) : charges(std::move(z)) {}

Curve::Curve(std::vector<Complex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw std::invalid_argument("Curve needs at least two vertices");
  cumulative_.assign(vertices_.size(), 0.0);
  for (std::size_t i = 1; i < vertices_.size(); ++i)
    cumulative_[i] = cumulative_[i - 1] + std::abs(vertices_[i] - vertices_[i - 1]);
  if (!(cumulative_.back() > 0.0)) throw std::invalid_argument("Curve has zero length");
}

Complex Curve::at(double t) const noexcept {
  const double s = std::clamp(t, 0.0, 1.0) * length();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  if (i >= vertices_.size()) return vertices_.back();
  if (i == 0) i = 1;
  const double seg = cumulative_[i] - cumulative_[i - 1];
  if (seg <= 0.0) return vertices_[i];
  return vertices_[i - 1] + (vertices_[i] - vertices_[i - 1]) * ((s - cumulative_[i - 1]) / seg);
}

std::vector<Complex> Curve::sample(std::size_t n) const {
  n = std::max<std::size_t>(n, 2);
  std::vector<Complex> out(n);
  const double total = length();
  std::size_t seg = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 1 < vertices_.size() && cumulative_[seg] < s) ++seg;
    const double len = cumulative_[seg] - cumulative_[seg - 1];
    const double u = len > 0.0 ? std::clamp((s - cumulative_[seg - 1]) / len, 0.0, 1.0) : 1.0;
    out[k] = vertices_[seg - 1] + (vertices_[seg] - vertices_[seg - 1]) * u;
  }
  return out;
}

Curve::Closest Curve::closest(Complex z) const noexcept {
  Closest best{0.0, vertices_.front(), std::numeric_limits<double>::infinity(), Complex{0.0, 1.0}};
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const Complex a = vertices_[i - 1];
    const Complex ab = vertices_[i] - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) continue;
    const double u = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    const Complex p = a + u * ab;
    const double d = std::abs(z - p);
    if (d < best.distance) {
      const double len = std::sqrt(len2);
      best = {(cumulative_[i - 1] + u * len) / length(), p, d, Complex{0.0, 1.0} * ab / len};
    }
  }
  return best;
}

bool Curve::conjecture_normalized(double tol) const noexcept {
  return std::abs(start()) <= tol && std::abs(end() - 1.0) <= tol;
}

bool Curve::lemma_normalized(double tol) const noexcept {
  return std::abs(std::abs(end() - start()) - 1.0) <= tol;
}

Complex complex_field(const ChargeSet& c, Complex z) {
  Complex sum{0.0};
  for (const Complex w : c.charges) {
    const Complex d = z - w;
    if (std::abs(d) <= kChargeGuard) throw SingularPoint("complex_field: point on a charge");
    sum += 1.0 / d;
  }
  return sum;
}

double modulus_potential(const ChargeSet& c, Complex z) {
  double sum = 0.0;
  for (const Complex w : c.charges) {
    const double d = std::abs(z - w);
    if (d <= kChargeGuard) throw SingularPoint("modulus_potential: point on a charge");
    sum += 1.0 / d;
  }
  return sum;
}

std::size_t curve_min_samples(const ChargeSet& c, const Curve& gamma, std::size_t requested) {
  double clearance = std::numeric_limits<double>::infinity();
  for (const Complex z : c.charges) clearance = std::min(clearance, gamma.distance_to(z));
  if (clearance <= kChargeGuard) throw SingularCurve("a charge lies on the curve");
  const std::size_t m = c.m();
  std::size_t n = requested == 0 ? std::max<std::size_t>(10000, 100 * m) : requested;
  const double density = std::ceil(2.0 * static_cast<double>(m) * gamma.length() / clearance);
  if (density > static_cast<double>(n)) n = static_cast<std::size_t>(density);
  return std::max<std::size_t>(n, 2);
}

CurveMin curve_min(const ChargeSet& c, const Curve& gamma, PotentialMode mode,
                   const CurveMinOptions& opts) {
  if (c.m() == 0) throw std::invalid_argument("curve_min: empty charge set");
  std::size_t n = curve_min_samples(c, gamma, opts.samples);

  CurveMin out;
  for (int attempt = 0;; ++attempt) {
    const RawMin primary = sampled_min(c, gamma, mode, n);
    out.t = primary.t;
    out.value = primary.value;
    out.samples = n;
    if (!opts.certify) return out;
    const RawMin check = sampled_min(c, gamma, mode, 4 * n - 3);
    out.certificate_value = check.value;
    const double scale = std::max(std::abs(primary.value), std::abs(check.value));
    out.certified = std::abs(primary.value - check.value) <= opts.agree_tol * scale;
    if (out.certified || attempt >= opts.max_retries) return out;
    n *= 2;
  }
}

SharpExample sharp_example(int m) {
  if (m < 2) throw std::invalid_argument("sharp_example: m must be >= 2");
  std::vector<Complex> z;
  z.reserve(static_cast<std::size_t>(m));
  double harmonic = 0.0;
  for (int j = 1; j <= m; ++j) {
    z.emplace_back(static_cast<double>(j) / m, 1.0 / m);
    harmonic += 1.0 / j;
  }
  SharpExample ex{ChargeSet(std::move(z)), Curve::segment(0.0, 1.0), {}, 0.0, 0.0};
  ex.min = curve_min(ex.charges, ex.curve, PotentialMode::modulus);
  ex.lower_bound = m * harmonic / (2.0 * std::numbers::sqrt2);
  ex.ratio = ex.min.value / (m * std::log(static_cast<double>(m)));
  return ex;
}

double torus_distance(double a, double b) noexcept {
  double w = std::fmod(std::abs(a - b), 1.0);
  return std::min(w, 1.0 - w);
}

double truncated_kernel(int m, double x) {
  if (m < 1) throw std::invalid_argument("truncated_kernel: m must be >= 1");
  const double d = torus_distance(x, 0.0);
  const double cutoff = 1.0 / (20.0 * m);
  return d >= cutoff ? 1.0 / d : 20.0 * m;
}

TorusConfig::TorusConfig(std::vector<double> x) : points(std::move(x)) {
  for (double& v : points) {
    v -= std::floor(v);
    if (v >= 1.0) v = 0.0;
  }
}

double lemma_certificate_bound(std::size_t m) noexcept {
  const double mm = static_cast<double>(m);
  return 20.0 * mm * std::log(20.0 * mm);
}

TorusPoint torus_low_potential_point(const TorusConfig& t) {
  const std::size_t m = t.m();
  if (m == 0) throw std::invalid_argument("torus_low_potential_point: empty configuration");
  const std::size_t grid = 100 * m;
  const double floor_dist = 1.0 / (10.0 * static_cast<double>(m));

  TorusPoint best;
  best.value = std::numeric_limits<double>::infinity();
  best.bound = lemma_certificate_bound(m);
  bool found = false;
  for (std::size_t k = 0; k < grid; ++k) {
    const double y = static_cast<double>(k) / static_cast<double>(grid);
    double min_d = 1.0;
    double sum = 0.0;
    for (const double x : t.points) {
      double w = std::abs(y - x);
      if (w > 0.5) w = 1.0 - w;
      min_d = std::min(min_d, w);
      sum += 1.0 / w;
    }
    if (min_d < floor_dist) continue;
    if (sum < best.value) {
      best.y = y;
      best.value = sum;
      best.min_distance = min_d;
      found = true;
    }
  }
  if (!found || !(best.value <= best.bound))
    throw SearchExhausted("no grid point meets the low-potential certificate");
  return best;
}

LemmaBound lemma1_curve_bound(const ChargeSet& c, const Curve& gamma) {
  if (c.m() == 0) throw std::invalid_argument("lemma1_curve_bound: empty charge set");
  const Complex origin = gamma.start();
  const double scale = std::abs(gamma.end() - origin);
  if (!(scale > 0.0)) throw std::invalid_argument("lemma1_curve_bound: curve endpoints coincide");
  const Complex rot = std::conj(gamma.end() - origin) / (scale * scale);
  const auto to_frame = [&](Complex z) { return (z - origin) * rot; };

  std::vector<Complex> verts;
  for (const Complex v : gamma.vertices()) verts.push_back(to_frame(v));
  verts.back() = Complex{1.0, verts.back().imag()};
  verts.front() = Complex{0.0};
  const Curve frame(verts);
  std::vector<Complex> charges;
  for (const Complex z : c.charges) charges.push_back(to_frame(z));
  const ChargeSet framed(charges);
  for (const Complex z : charges)
    if (frame.distance_to(z) <= kChargeGuard) throw SingularCurve("a charge lies on the curve");

  std::vector<double> x;
  for (const Complex z : charges) x.push_back(z.real());
  const TorusPoint tp = torus_low_potential_point(TorusConfig(x));

  // first parameter with Re gamma(t) = y; exists since Re runs from 0 to 1
  double t = 0.0;
  double s = 0.0;
  bool hit = false;
  for (std::size_t i = 1; i < verts.size() && !hit; ++i) {
    const Complex a = verts[i - 1];
    const Complex b = verts[i];
    const double len = std::abs(b - a);
    const double lo = std::min(a.real(), b.real());
    const double hi = std::max(a.real(), b.real());
    if (tp.y >= lo && tp.y <= hi) {
      const double u = (b.real() == a.real()) ? 0.0 : (tp.y - a.real()) / (b.real() - a.real());
      t = (s + u * len) / frame.length();
      hit = true;
    }
    s += len;
  }
  if (!hit) throw ProjectionDegenerate("projection of the curve misses the torus point");

  LemmaBound out;
  out.t = t;
  out.point = gamma.at(t);
  const Complex zf = frame.at(t);
  out.value = modulus_potential(framed, zf);
  double projected = 0.0;
  for (const Complex z : charges) {
    const double d = std::abs(tp.y - z.real());
    if (d <= kChargeGuard) throw ProjectionDegenerate("a projected charge coincides with the point");
    projected += 1.0 / d;
  }
  out.projected = projected;
  out.torus_value = tp.value;
  out.bound = tp.bound;
  out.scale = scale;
  const double slack = 1.0 + 1e-9;
  if (out.value > out.projected * slack || out.projected > out.torus_value * slack)
    throw ProjectionDegenerate("projection chain inequality failed");
  return out;
}

}  // namespace gllab
