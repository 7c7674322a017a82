#include "gllab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "gllab/errors.hpp"

namespace gllab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void trim(std::vector<Complex>& c) {
  while (c.size() > 1 && c.back() == Complex{0.0}) c.pop_back();
  if (c.empty()) c.push_back(Complex{0.0});
}

// Newton correction p/p' and relative residual |p| / sum |c_k||z|^k at z.
// For |z| > 1 the reversed polynomial is evaluated at 1/z so that nothing
// overflows for large degree.
struct NewtonStep {
  Complex ratio;
  double rel_residual;
  bool ok;
};

NewtonStep newton_step(const std::vector<Complex>& c, Complex z) {
  const std::size_t n = c.size() - 1;
  if (std::abs(z) <= 1.0) {
    Complex p = c[n];
    Complex dp{0.0};
    double s = std::abs(c[n]);
    const double az = std::abs(z);
    for (std::size_t k = n; k-- > 0;) {
      dp = dp * z + p;
      p = p * z + c[k];
      s = s * az + std::abs(c[k]);
    }
    const double rel = s > 0 ? std::abs(p) / s : 0.0;
    if (p == Complex{0.0}) return {Complex{0.0}, 0.0, true};
    if (dp == Complex{0.0}) return {Complex{0.0}, rel, false};
    return {p / dp, rel, true};
  }
  const Complex w = 1.0 / z;
  const double aw = std::abs(w);
  Complex r = c[0];
  Complex dr{0.0};
  double s = std::abs(c[0]);
  for (std::size_t k = 1; k <= n; ++k) {
    dr = dr * w + r;
    r = r * w + c[k];
    s = s * aw + std::abs(c[k]);
  }
  const double rel = s > 0 ? std::abs(r) / s : 0.0;
  if (r == Complex{0.0}) return {Complex{0.0}, 0.0, true};
  const Complex den = w * (static_cast<double>(n) * r - w * dr);
  if (den == Complex{0.0}) return {Complex{0.0}, rel, false};
  return {r / den, rel, true};
}

double initial_radius(const std::vector<Complex>& c) {
  const std::size_t n = c.size() - 1;
  const double lead = std::abs(c[n]);
  double upper = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double term = std::pow(std::abs(c[k]) / lead,
                                 1.0 / static_cast<double>(n - k));
    upper = std::max(upper, term);
  }
  upper = std::max(2.0 * upper, std::numeric_limits<double>::min());
  const double geo = std::pow(std::abs(c[0]) / lead, 1.0 / static_cast<double>(n));
  return std::clamp(geo, 1e-3 * upper, upper);
}

std::vector<Complex> circle_start(std::size_t count, Complex center,
                                  double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  std::vector<Complex> z(count);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < count; ++i) {
    const double angle =
        two_pi * (static_cast<double>(i) + 0.5 + jitter(rng)) /
            static_cast<double>(count) +
        0.4;
    const double rad = radius * (1.0 + jitter(rng));
    z[i] = center + std::polar(rad, angle);
  }
  return z;
}

Complex aberth_sum(const std::vector<Complex>& z, std::size_t i) {
  Complex sum{0.0};
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j != i) sum += 1.0 / (z[i] - z[j]);
  }
  return sum;
}

Complex nudge(Complex z, double size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  return z + std::polar(size, angle(rng));
}

}  // namespace

Polynomial::Polynomial() : coeffs_{Complex{1.0}}, has_roots_(true) {}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
  std::vector<Complex> order(roots.begin(), roots.end());
  // ascending magnitude limits cancellation in the running product
  std::stable_sort(order.begin(), order.end(), [](Complex a, Complex b) {
    return std::abs(a) < std::abs(b);
  });
  // extended-precision accumulation keeps each coefficient within a few ulps
  using Wide = std::complex<long double>;
  std::vector<Wide> w{Wide{1.0L}};
  w.reserve(order.size() + 1);
  for (const Complex z : order) {
    const Wide a{z.real(), z.imag()};
    w.push_back(Wide{0.0L});
    for (std::size_t k = w.size() - 1; k > 0; --k) w[k] = w[k - 1] - a * w[k];
    w[0] = -a * w[0];
  }
  std::vector<Complex> c;
  c.reserve(w.size());
  for (const Wide v : w) c.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  Polynomial p;
  p.coeffs_ = std::move(c);
  p.roots_.assign(roots.begin(), roots.end());
  p.has_roots_ = true;
  return p;
}

Polynomial Polynomial::from_coeffs(std::vector<Complex> coeffs) {
  trim(coeffs);
  Polynomial p;
  p.coeffs_ = std::move(coeffs);
  p.roots_.clear();
  p.has_roots_ = false;
  return p;
}

bool Polynomial::is_zero() const noexcept {
  return coeffs_.size() == 1 && coeffs_[0] == Complex{0.0};
}

double Polynomial::scale() const noexcept {
  double s = 0.0;
  for (const Complex c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

Complex Polynomial::operator()(Complex z) const noexcept {
  Complex acc{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial derivative(const Polynomial& p) {
  if (p.degree() == 0) return Polynomial::zero();
  const auto& c = p.coeffs();
  std::vector<Complex> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
  return Polynomial::from_coeffs(std::move(d));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.has_roots() && b.has_roots()) {
    std::vector<Complex> roots = a.roots();
    roots.insert(roots.end(), b.roots().begin(), b.roots().end());
    return Polynomial::from_roots(roots);
  }
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<Complex> c(x.size() + y.size() - 1, Complex{0.0});
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) c[i + j] += x[i] * y[j];
  return Polynomial::from_coeffs(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<Complex> c(std::max(x.size(), y.size()), Complex{0.0});
  for (std::size_t i = 0; i < x.size(); ++i) c[i] += x[i];
  for (std::size_t i = 0; i < y.size(); ++i) c[i] += y[i];
  return Polynomial::from_coeffs(std::move(c));
}

double evaluation_scale(const Polynomial& p, Complex z) noexcept {
  const double az = std::abs(z);
  double s = 0.0;
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * az + std::abs(*it);
  return s;
}

Complex log_derivative(const Polynomial& p, Complex z) {
  if (p.has_roots()) {
    Complex sum{0.0};
    for (const Complex a : p.roots()) {
      const Complex d = z - a;
      if (std::abs(d) <= tolerance::singular_guard)
        throw SingularPoint("log_derivative: point within guard of a root");
      sum += 1.0 / d;
    }
    return sum;
  }
  if (p.is_zero()) throw SingularPoint("log_derivative: zero polynomial");
  const auto& c = p.coeffs();
  Complex v = c.back();
  Complex dv{0.0};
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dv = dv * z + v;
    v = v * z + c[k];
  }
  if (std::abs(v) <= tolerance::singular_guard * evaluation_scale(p, z))
    throw SingularPoint("log_derivative: polynomial vanishes at point");
  return dv / v;
}

std::vector<Complex> find_roots(const Polynomial& p, const RootFinderOptions& opts) {
  if (p.degree() < 1) throw std::invalid_argument("find_roots: degree must be >= 1");

  // exact zero roots are split off so that the iteration sees c_0 != 0
  std::vector<Complex> c = p.coeffs();
  std::size_t zeros = 0;
  while (zeros < c.size() - 1 && c[zeros] == Complex{0.0}) ++zeros;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));

  std::vector<Complex> out(zeros, Complex{0.0});
  const std::size_t n = c.size() - 1;
  if (n == 0) return out;
  if (n == 1) {
    out.push_back(-c[0] / c[1]);
    return out;
  }

  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  const double radius = initial_radius(c);
  std::vector<Complex> z = circle_start(n, Complex{0.0}, radius, opts.seed);
  std::vector<bool> done(n, false);
  std::size_t remaining = n;

  for (int it = 0; it < opts.max_iters && remaining > 0; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const NewtonStep step = newton_step(c, z[i]);
      if (!step.ok) {
        z[i] = nudge(z[i], 1e-6 * std::max(1.0, std::abs(z[i])), rng);
        continue;
      }
      const Complex ratio = step.ratio;
      const Complex denom = 1.0 - ratio * aberth_sum(z, i);
      const Complex corr = (denom == Complex{0.0}) ? ratio : ratio / denom;
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) {
        z[i] = nudge(z[i], 1e-6 * std::max(1.0, std::abs(z[i])), rng);
        continue;
      }
      z[i] -= corr;
      if (step.rel_residual <= 8.0 * kEps ||
          std::abs(corr) <= 2.0 * kEps * std::abs(z[i])) {
        done[i] = true;
        --remaining;
      }
    }
  }

  double worst = 0.0;
  for (const Complex root : z) worst = std::max(worst, newton_step(c, root).rel_residual);
  if (worst > opts.tol) {
    throw NoConvergence("find_roots: residual above tolerance after " +
                            std::to_string(opts.max_iters) + " iterations",
                        worst);
  }
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

std::vector<Complex> log_derivative_zeros(std::span<const Complex> points,
                                          std::span<const int> weights,
                                          const RootFinderOptions& opts) {
  const std::size_t d = points.size();
  if (weights.size() != d) throw std::invalid_argument("log_derivative_zeros: weight count");
  if (d < 2) return {};

  double total = 0.0;
  Complex center{0.0};
  for (std::size_t j = 0; j < d; ++j) {
    if (weights[j] <= 0) throw std::invalid_argument("log_derivative_zeros: weights must be positive");
    total += weights[j];
    center += static_cast<double>(weights[j]) * points[j];
  }
  center /= total;
  double spread = 0.0;
  for (const Complex b : points) spread = std::max(spread, std::abs(b - center));
  spread = std::max(spread, std::numeric_limits<double>::min());

  const std::size_t count = d - 1;
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);

  // start next to each point at the zero of w_j/(z - b_j) + S_j, S_j the
  // rest of the sum, capped at half the nearest-neighbour distance; the
  // point whose estimate reaches furthest relative to that cap is dropped
  std::vector<Complex> start(d);
  std::vector<double> reach(d);
  for (std::size_t j = 0; j < d; ++j) {
    Complex rest{0.0};
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < d; ++k) {
      if (k == j) continue;
      rest += static_cast<double>(weights[k]) / (points[j] - points[k]);
      nearest = std::min(nearest, std::abs(points[j] - points[k]));
    }
    const double cap = 0.5 * nearest;
    Complex step = std::abs(rest) > 0.0 ? -static_cast<double>(weights[j]) / rest : Complex{cap};
    reach[j] = std::abs(step) / cap;
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    // off the segment between neighbours, where the iteration can stall
    start[j] = points[j] + step * std::polar(1.0, 0.05);
  }
  const std::size_t dropped =
      static_cast<std::size_t>(std::max_element(reach.begin(), reach.end()) - reach.begin());
  std::vector<Complex> z;
  z.reserve(count);
  for (std::size_t j = 0; j < d; ++j)
    if (j != dropped) z.push_back(start[j]);

  // Newton ratio L/L' for the zeros of L = sum w_j/(z - b_j), written with
  // the nearest point b* split off and numerator and denominator multiplied
  // by (z - b*)^2 so nothing blows up as z approaches b*.
  struct Eval {
    Complex ratio;
    double rel_residual;
    bool ok;
  };
  const auto eval = [&](Complex x) -> Eval {
    std::size_t near = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < d; ++j) {
      const double dist = std::abs(x - points[j]);
      if (dist < best) {
        best = dist;
        near = j;
      }
    }
    const Complex dz = x - points[near];
    const double k = weights[near];
    Complex s{0.0};
    Complex t{0.0};
    double abs_sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == near) continue;
      const Complex inv = 1.0 / (x - points[j]);
      s += static_cast<double>(weights[j]) * inv;
      t += static_cast<double>(weights[j]) * inv * inv;
      abs_sum += weights[j] * std::abs(inv);
    }
    const Complex num = dz * (k + s * dz);
    const Complex den = k * (k - 1.0) + 2.0 * k * s * dz + (s * s - t) * dz * dz;
    const double rel = std::abs(k + s * dz) / (k + std::abs(dz) * abs_sum);
    if (den == Complex{0.0}) return {Complex{0.0}, rel, false};
    return {num / den, rel, true};
  };

  std::vector<bool> done(count, false);
  std::size_t remaining = count;
  for (int it = 0; it < opts.max_iters && remaining > 0; ++it) {
    for (std::size_t i = 0; i < count; ++i) {
      if (done[i]) continue;
      const Eval e = eval(z[i]);
      if (!e.ok) {
        z[i] = nudge(z[i], 1e-7 * spread, rng);
        continue;
      }
      const Complex denom = 1.0 - e.ratio * aberth_sum(z, i);
      const Complex corr = (denom == Complex{0.0}) ? e.ratio : e.ratio / denom;
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) {
        z[i] = nudge(z[i], 1e-7 * spread, rng);
        continue;
      }
      z[i] -= corr;
      if (e.rel_residual <= 8.0 * kEps ||
          std::abs(corr) <= 2.0 * kEps * (std::abs(z[i]) + spread)) {
        done[i] = true;
        --remaining;
      }
    }
  }

  double worst = 0.0;
  for (const Complex x : z) worst = std::max(worst, eval(x).rel_residual);
  if (worst > opts.tol) {
    throw NoConvergence("log_derivative_zeros: residual above tolerance", worst);
  }
  return z;
}

std::vector<Complex> critical_points(const Polynomial& p, const RootFinderOptions& opts) {
  if (p.degree() < 2) throw std::invalid_argument("critical_points: degree must be >= 2");
  if (!p.has_roots()) return find_roots(derivative(p), opts);

  const auto& roots = p.roots();
  double mag = 1.0;
  for (const Complex a : roots) mag = std::max(mag, std::abs(a));
  const double same = 1e-12 * mag;

  std::vector<Complex> distinct;
  std::vector<int> weight;
  for (const Complex a : roots) {
    bool merged = false;
    for (std::size_t j = 0; j < distinct.size(); ++j) {
      if (std::abs(a - distinct[j]) <= same) {
        ++weight[j];
        merged = true;
        break;
      }
    }
    if (!merged) {
      distinct.push_back(a);
      weight.push_back(1);
    }
  }

  std::vector<Complex> out;
  for (std::size_t j = 0; j < distinct.size(); ++j)
    for (int k = 1; k < weight[j]; ++k) out.push_back(distinct[j]);
  const auto rest = log_derivative_zeros(distinct, weight, opts);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

JitteredRoots separate_repeated_roots(std::span<const Complex> roots, double rel,
                                      std::uint64_t seed) {
  JitteredRoots out;
  double mag = 1.0;
  for (const Complex a : roots) mag = std::max(mag, std::abs(a));
  out.magnitude = rel * mag;
  const double same = 1e-12 * mag;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  out.roots.reserve(roots.size());
  for (const Complex a : roots) {
    Complex b = a;
    const auto clash = [&](Complex x) {
      return std::any_of(out.roots.begin(), out.roots.end(),
                         [&](Complex y) { return std::abs(x - y) <= same; });
    };
    if (clash(b)) {
      do {
        b = a + std::polar(out.magnitude, angle(rng));
      } while (clash(b));
      ++out.perturbed;
    }
    out.roots.push_back(b);
  }
  return out;
}

}  // namespace gllab
