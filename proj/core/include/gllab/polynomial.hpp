#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gllab {

using Complex = std::complex<double>;

namespace tolerance {
inline constexpr double root = 1e-10;
inline constexpr double log_derivative = 1e-9;
inline constexpr double singular_guard = 1e-12;
inline constexpr double multiplicity_jitter = 1e-9;
}  // namespace tolerance

/// Complex polynomial stored by ascending coefficients.
///
/// A polynomial built with from_roots() also remembers its root list; the
/// coefficients are then derived data and the roots are used wherever an
/// evaluation in product form is better conditioned than Horner's scheme.
/// Values are immutable after construction.
class Polynomial {
 public:
  /// The constant polynomial 1.
  Polynomial();

  /// Monic polynomial with exactly the given roots (with multiplicity).
  static Polynomial from_roots(std::span<const Complex> roots);

  /// Trailing zero coefficients are trimmed; an all-zero input yields the
  /// zero polynomial (degree 0, coefficient 0).
  static Polynomial from_coeffs(std::vector<Complex> coeffs);

  static Polynomial zero() { return from_coeffs({Complex{0.0}}); }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept;
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  Complex leading() const noexcept { return coeffs_.back(); }

  bool has_roots() const noexcept { return has_roots_; }
  /// Stored roots; empty unless has_roots().
  const std::vector<Complex>& roots() const noexcept { return roots_; }

  /// max_k |c_k|
  double scale() const noexcept;

  /// Horner evaluation.
  Complex operator()(Complex z) const noexcept;

 private:
  std::vector<Complex> coeffs_;
  std::vector<Complex> roots_;
  bool has_roots_ = false;
};

Polynomial derivative(const Polynomial& p);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator+(const Polynomial& a, const Polynomial& b);

inline Complex evaluate(const Polynomial& p, Complex z) { return p(z); }

/// Sum_k |c_k| |z|^k, the natural scale for the rounding error of Horner's
/// scheme at z.
double evaluation_scale(const Polynomial& p, Complex z) noexcept;

/// p'(z)/p(z). Uses sum 1/(z - a_k) when roots are stored, Horner otherwise.
/// Throws SingularPoint within tolerance::singular_guard of a root.
Complex log_derivative(const Polynomial& p, Complex z);

struct RootFinderOptions {
  int max_iters = 1000;
  double tol = tolerance::root;
  std::uint64_t seed = 0x243f6a8885a308d3ULL;
};

/// Aberth-Ehrlich simultaneous iteration on the coefficients.
///
/// Every returned root satisfies |p(z)| <= tol * evaluation_scale(p, z).
/// Throws NoConvergence with the worst residual otherwise, and
/// std::invalid_argument for constant polynomials.
std::vector<Complex> find_roots(const Polynomial& p,
                                const RootFinderOptions& opts = {});

/// Zeros of sum_j w_j / (z - b_j) for distinct points b_j with positive
/// integer weights w_j, i.e. the critical points of prod (z - b_j)^{w_j}
/// that are not roots themselves. Returns (#points - 1) zeros.
std::vector<Complex> log_derivative_zeros(std::span<const Complex> points,
                                          std::span<const int> weights,
                                          const RootFinderOptions& opts = {});

/// Roots of p'. When p carries its roots, repeated roots contribute their
/// (multiplicity - 1) copies directly and the remaining critical points
/// come from log_derivative_zeros(); otherwise find_roots(derivative(p)).
/// Requires degree >= 2.
std::vector<Complex> critical_points(const Polynomial& p,
                                     const RootFinderOptions& opts = {});

struct JitteredRoots {
  std::vector<Complex> roots;
  std::size_t perturbed = 0;
  double magnitude = 0.0;
};

/// Moves repeated roots apart by rel * max(1, max|a|) in a seeded random
/// direction so that all roots are distinct.
JitteredRoots separate_repeated_roots(std::span<const Complex> roots,
                                      double rel = tolerance::multiplicity_jitter,
                                      std::uint64_t seed = 1);

}  // namespace gllab
