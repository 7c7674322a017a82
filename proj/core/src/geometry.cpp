#include "gllab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gllab/errors.hpp"

namespace gllab {

namespace {

double polygon_diameter(const std::vector<Complex>& v) {
  const std::size_t n = v.size();
  if (n <= 3) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, std::abs(v[i] - v[j]));
    return best;
  }
  // rotating calipers over antipodal vertex pairs
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ni = (i + 1) % n;
    const Complex edge = v[ni] - v[i];
    while (std::abs(cross(edge, v[(j + 1) % n] - v[i])) >
           std::abs(cross(edge, v[j] - v[i]))) {
      j = (j + 1) % n;
    }
    best = std::max({best, std::abs(v[i] - v[j]), std::abs(v[ni] - v[j])});
  }
  return best;
}

}  // namespace

double cross(Complex a, Complex b) noexcept {
  return a.real() * b.imag() - a.imag() * b.real();
}

double segment_distance(Complex z, Complex a, Complex b) noexcept {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

Box Box::expanded_to(Complex z) const noexcept {
  return {std::min(xmin, z.real()), std::max(xmax, z.real()),
          std::min(ymin, z.imag()), std::max(ymax, z.imag())};
}

Box Box::around(std::span<const Complex> points) {
  Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
        std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Complex z : points) b = b.expanded_to(z);
  return b;
}

ConvexDomain ConvexDomain::disk(Complex center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidDomain("disk radius must be positive and finite");
  ConvexDomain k;
  k.kind_ = Kind::disk;
  k.center_ = center;
  k.radius_ = radius;
  k.diameter_ = 2.0 * radius;
  return k;
}

ConvexDomain ConvexDomain::polygon(std::vector<Complex> v) {
  double mag = 0.0;
  for (const Complex z : v) mag = std::max(mag, std::abs(z));
  const double same = 1e-14 * std::max(1.0, mag);

  std::vector<Complex> u;
  for (const Complex z : v)
    if (u.empty() || std::abs(z - u.back()) > same) u.push_back(z);
  while (u.size() > 1 && std::abs(u.front() - u.back()) <= same) u.pop_back();
  if (u.size() < 3) throw InvalidDomain("polygon needs at least three distinct vertices");

  double area2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) area2 += cross(u[i], u[(i + 1) % u.size()]);
  if (area2 < 0.0) std::reverse(u.begin(), u.end());

  // merge collinear triples
  bool changed = true;
  while (changed && u.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Complex prev = u[(i + u.size() - 1) % u.size()];
      const Complex next = u[(i + 1) % u.size()];
      const Complex e1 = u[i] - prev;
      const Complex e2 = next - u[i];
      const double c = cross(e1, e2);
      if (std::abs(c) <= 1e-12 * std::abs(e1) * std::abs(e2) &&
          (e1 * std::conj(e2)).real() > 0.0) {
        u.erase(u.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (u.size() < 3) throw InvalidDomain("polygon is degenerate (collinear vertices)");

  double turning = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Complex e1 = u[(i + 1) % u.size()] - u[i];
    const Complex e2 = u[(i + 2) % u.size()] - u[(i + 1) % u.size()];
    if (cross(e1, e2) <= 0.0) throw InvalidDomain("polygon is not strictly convex");
    turning += std::arg(e2 / e1);
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6)
    throw InvalidDomain("polygon is self-intersecting");

  ConvexDomain k;
  k.kind_ = Kind::polygon;
  k.vertices_ = std::move(u);
  k.diameter_ = polygon_diameter(k.vertices_);
  return k;
}

bool ConvexDomain::contains(Complex z) const noexcept {
  if (kind_ == Kind::disk) return std::abs(z - center_) <= radius_;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(vertices_[(i + 1) % n] - vertices_[i], z - vertices_[i]) < 0.0) return false;
  }
  return true;
}

double ConvexDomain::distance(Complex z) const noexcept {
  if (kind_ == Kind::disk) return std::max(0.0, std::abs(z - center_) - radius_);
  if (contains(z)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, segment_distance(z, vertices_[i], vertices_[(i + 1) % n]));
  return best;
}

double ConvexDomain::diameter() const noexcept { return diameter_; }

double ConvexDomain::support(double theta) const noexcept {
  const Complex dir = std::polar(1.0, -theta);
  if (kind_ == Kind::disk) return (center_ * dir).real() + radius_;
  double best = -std::numeric_limits<double>::infinity();
  for (const Complex v : vertices_) best = std::max(best, (v * dir).real());
  return best;
}

Box ConvexDomain::bounds() const noexcept {
  if (kind_ == Kind::disk) {
    return {center_.real() - radius_, center_.real() + radius_,
            center_.imag() - radius_, center_.imag() + radius_};
  }
  return Box::around(vertices_);
}

Complex ConvexDomain::centroid() const noexcept {
  if (kind_ == Kind::disk) return center_;
  Complex sum{0.0};
  for (const Complex v : vertices_) sum += v;
  return sum / static_cast<double>(vertices_.size());
}

double ConvexDomain::perimeter() const noexcept {
  if (kind_ == Kind::disk) return 2.0 * std::numbers::pi * radius_;
  double len = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    len += std::abs(vertices_[(i + 1) % vertices_.size()] - vertices_[i]);
  return len;
}

Complex ConvexDomain::boundary_point(double s) const noexcept {
  s -= std::floor(s);
  if (kind_ == Kind::disk) return center_ + std::polar(radius_, 2.0 * std::numbers::pi * s);
  double target = s * perimeter();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = vertices_[i];
    const Complex b = vertices_[(i + 1) % n];
    const double len = std::abs(b - a);
    if (target <= len) return a + (b - a) * (target / len);
    target -= len;
  }
  return vertices_.front();
}

std::vector<Complex> ConvexDomain::outline(double eps, int arc_samples) const {
  std::vector<Complex> out;
  if (kind_ == Kind::disk) {
    const int count = 4 * arc_samples;
    for (int k = 0; k <= count; ++k)
      out.push_back(center_ + std::polar(radius_ + eps, 2.0 * std::numbers::pi * k / count));
    return out;
  }
  const std::size_t n = vertices_.size();
  if (eps <= 0.0) {
    out = vertices_;
    out.push_back(vertices_.front());
    return out;
  }
  const auto outward = [](Complex a, Complex b) {
    const Complex e = b - a;
    return Complex{e.imag(), -e.real()} / std::abs(e);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Complex prev = vertices_[(i + n - 1) % n];
    const Complex v = vertices_[i];
    const Complex next = vertices_[(i + 1) % n];
    const double a0 = std::arg(outward(prev, v));
    double a1 = std::arg(outward(v, next));
    while (a1 < a0) a1 += 2.0 * std::numbers::pi;
    const int steps = std::max(1, static_cast<int>(std::ceil(arc_samples * (a1 - a0) /
                                                             (2.0 * std::numbers::pi))));
    for (int k = 0; k <= steps; ++k)
      out.push_back(v + std::polar(eps, a0 + (a1 - a0) * k / steps));
  }
  out.push_back(out.front());
  return out;
}

Neighborhood::Neighborhood(ConvexDomain k, double eps) : base(std::move(k)), epsilon(eps) {
  if (!(eps > 0.0)) throw InvalidEpsilon("epsilon must be positive");
}

bool neighborhood_contains(const ConvexDomain& k, double eps, Complex z) {
  if (!(eps > 0.0)) throw InvalidEpsilon("epsilon must be positive");
  return k.distance(z) <= eps;
}

ConvexDomain convex_hull(std::span<const Complex> points) {
  std::vector<Complex> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) throw DegenerateHull("convex hull needs three non-collinear points");

  std::vector<Complex> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) throw DegenerateHull("points are collinear");

  ConvexDomain out;
  out.kind_ = ConvexDomain::Kind::polygon;
  out.vertices_ = std::move(h);
  out.diameter_ = polygon_diameter(out.vertices_);
  return out;
}

}  // namespace gllab
