#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "gllab/polynomial.hpp"

namespace gllab {

/// Closed counterclockwise curve (or union of closed loops for grid-component
/// boundaries, where holes run clockwise). Every loop repeats its first
/// sample at the end.
struct Contour {
  enum class Kind { circle, polygon_loop, grid_boundary };

  Kind kind = Kind::circle;
  std::vector<std::vector<Complex>> loops;
  /// Samples per unit length; spacing never exceeds 1/refinement.
  double refinement = 64.0;
  Complex center{0.0};
  double radius = 0.0;

  static Contour circle(Complex center, double radius, double refinement = 64.0);
  static Contour polygon_loop(std::span<const Complex> vertices, double refinement = 64.0);
  /// Loops are polylines of cell corners; they are resampled to refinement.
  static Contour grid_boundary(std::vector<std::vector<Complex>> loops, double refinement);

  double clearance() const noexcept { return 2.0 / refinement; }
  double length() const noexcept;
  /// Point between two consecutive samples (arc midpoint for circles).
  Complex midpoint(Complex a, Complex b) const noexcept;
};

/// A function holomorphic near the contour, described by what the winding
/// count needs: a value with the correct argument, and an upper bound on the
/// distance from z to its nearest zero (infinity when unknown).
struct HolomorphicFn {
  std::function<Complex(Complex)> value;
  std::function<double(Complex)> zero_radius;
};

/// Horner evaluation with the Newton radius degree * |p / p'|.
HolomorphicFn holomorphic(const Polynomial& p);

/// p' for p = prod (z - a_k), evaluated as p(z) * sum 1/(z - a_k) with every
/// factor normalised to unit modulus. Stable for degree in the thousands.
HolomorphicFn derivative_of_product(std::span<const Complex> roots);

struct CountOptions {
  double winding_tol = 0.2;
  int max_refine = 6;
};

struct WindingCount {
  int count = 0;
  /// total argument change / 2 pi, before rounding
  double raw = 0.0;
  /// deepest local subdivision used
  int refinements = 0;
};

/// Argument-principle zero count. Throws RootOnContour when a zero is
/// certainly closer than contour.clearance() to a sample, NonIntegerWinding
/// when a single increment still exceeds pi/2 after max_refine subdivisions
/// or the total is farther than winding_tol from an integer.
WindingCount count_zeros(const HolomorphicFn& f, const Contour& c, const CountOptions& opts = {});

int count_roots_in(const Polynomial& p, const Contour& c, const CountOptions& opts = {});

struct Dominance {
  bool dominates = false;
  /// min over samples of |f| - |g|
  double margin = 0.0;
};

Dominance rouche_dominates(const Polynomial& f, const Polynomial& g, const Contour& c);

/// Same test with |f| and |g| supplied as functions.
Dominance rouche_dominates(const std::function<double(Complex)>& abs_f,
                           const std::function<double(Complex)>& abs_g, const Contour& c);

/// Samples of every loop at the contour's refinement (closed polylines).
std::vector<std::vector<Complex>> sample_loops(const Contour& c);

}  // namespace gllab
