#pragma once

#include <complex>
#include <span>
#include <vector>

namespace gllab {

using Complex = std::complex<double>;

/// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Box {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  double width() const noexcept { return xmax - xmin; }
  double height() const noexcept { return ymax - ymin; }
  Complex center() const noexcept { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  bool contains(Complex z) const noexcept {
    return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin && z.imag() <= ymax;
  }
  Box inflated(double pad) const noexcept {
    return {xmin - pad, xmax + pad, ymin - pad, ymax + pad};
  }
  Box expanded_to(Complex z) const noexcept;
  static Box around(std::span<const Complex> points);
};

/// Bounded convex domain K: a strictly convex CCW polygon or a closed disk.
class ConvexDomain {
 public:
  enum class Kind { disk, polygon };

  /// Throws InvalidDomain unless radius > 0.
  static ConvexDomain disk(Complex center, double radius);

  /// Accepts either orientation; merges collinear vertices and rejects
  /// non-convex or degenerate (fewer than three non-collinear) input with
  /// InvalidDomain.
  static ConvexDomain polygon(std::vector<Complex> vertices);

  Kind kind() const noexcept { return kind_; }
  Complex center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  const std::vector<Complex>& vertices() const noexcept { return vertices_; }

  /// Closed-set membership.
  bool contains(Complex z) const noexcept;
  double distance(Complex z) const noexcept;
  double diameter() const noexcept;
  /// Support function h(theta) = max_{w in K} Re(w e^{-i theta}).
  double support(double theta) const noexcept;
  Box bounds() const noexcept;
  /// Disk center or vertex average; always an interior point.
  Complex centroid() const noexcept;
  double perimeter() const noexcept;
  /// Point on the boundary at arclength fraction s in [0, 1).
  Complex boundary_point(double s) const noexcept;
  /// Closed polyline approximating the boundary of K_eps (eps = 0 gives K).
  std::vector<Complex> outline(double eps, int arc_samples = 64) const;

 private:
  ConvexDomain() = default;
  friend ConvexDomain convex_hull(std::span<const Complex> points);

  Kind kind_ = Kind::disk;
  Complex center_{0.0};
  double radius_ = 0.0;
  std::vector<Complex> vertices_;
  double diameter_ = 0.0;
};

/// K_eps = {z : distance(K, z) <= eps}, kept implicit.
struct Neighborhood {
  ConvexDomain base;
  double epsilon;

  Neighborhood(ConvexDomain k, double eps);
  bool contains(Complex z) const noexcept { return base.distance(z) <= epsilon; }
};

inline bool contains(const ConvexDomain& k, Complex z) { return k.contains(z); }
inline double distance(const ConvexDomain& k, Complex z) { return k.distance(z); }
inline double diameter(const ConvexDomain& k) { return k.diameter(); }

/// Throws InvalidEpsilon for eps <= 0.
bool neighborhood_contains(const ConvexDomain& k, double eps, Complex z);

/// Strictly convex CCW hull (monotone chain). Throws DegenerateHull when
/// fewer than three non-collinear points are given.
ConvexDomain convex_hull(std::span<const Complex> points);

double cross(Complex a, Complex b) noexcept;
double segment_distance(Complex z, Complex a, Complex b) noexcept;

}  // namespace gllab
