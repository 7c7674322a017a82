#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gllab {

using Complex = std::complex<double>;

inline constexpr double kChargeGuard = 1e-12;

/// Point charges z_1..z_m (m >= 1, duplicates allowed).
struct ChargeSet {
  std::vector<Complex> charges;

  ChargeSet() = default;
  explicit ChargeSet(std::vector<Complex> z);
  std::size_t m() const noexcept { return charges.size(); }
};

/// Polyline gamma: [0, 1] -> C parameterised proportionally to arclength.
class Curve {
 public:
  /// Needs at least two vertices and positive length.
  explicit Curve(std::vector<Complex> vertices);

  static Curve segment(Complex a, Complex b) { return Curve({a, b}); }

  const std::vector<Complex>& vertices() const noexcept { return vertices_; }
  double length() const noexcept { return cumulative_.back(); }
  Complex start() const noexcept { return vertices_.front(); }
  Complex end() const noexcept { return vertices_.back(); }

  Complex at(double t) const noexcept;
  /// N >= 2 arclength-uniform points t_k = k / (N - 1).
  std::vector<Complex> sample(std::size_t n) const;

  struct Closest {
    double t;
    Complex point;
    double distance;
    /// unit normal to the left of the segment carrying the closest point
    Complex normal;
  };
  Closest closest(Complex z) const noexcept;
  double distance_to(Complex z) const noexcept { return closest(z).distance; }

  /// gamma(0) = 0 and gamma(1) = 1
  bool conjecture_normalized(double tol = 1e-12) const noexcept;
  /// |gamma(0) - gamma(1)| = 1
  bool lemma_normalized(double tol = 1e-12) const noexcept;

 private:
  std::vector<Complex> vertices_;
  std::vector<double> cumulative_;
};

/// sum 1/(z - z_l); throws SingularPoint within kChargeGuard of a charge.
Complex complex_field(const ChargeSet& c, Complex z);
/// sum 1/|z - z_l|; same guard.
double modulus_potential(const ChargeSet& c, Complex z);

enum class PotentialMode { field, modulus };

struct CurveMinOptions {
  /// 0 selects certificate grade: max(1e4, 100 m) samples. Either way the
  /// count is raised to at least 2 m length / clearance.
  std::size_t samples = 0;
  bool certify = true;
  /// relative agreement demanded from the 4x-density resample
  double agree_tol = 0.01;
  /// density doublings tried before giving up on certification
  int max_retries = 3;
};

struct CurveMin {
  double t = 0.0;
  double value = 0.0;
  std::size_t samples = 0;
  bool certified = false;
  double certificate_value = 0.0;
};

/// Minimum of the potential along the curve: dense arclength sampling, then
/// golden-section refinement on the best bracket. Ties go to the smaller t.
/// Throws SingularCurve when a charge is within kChargeGuard of the curve.
CurveMin curve_min(const ChargeSet& c, const Curve& gamma, PotentialMode mode,
                   const CurveMinOptions& opts = {});

/// Sample count curve_min() uses for the given request.
std::size_t curve_min_samples(const ChargeSet& c, const Curve& gamma, std::size_t requested);

struct SharpExample {
  ChargeSet charges;
  Curve curve;
  CurveMin min;
  /// m H_m / (2 sqrt 2), a proven lower bound for min.value
  double lower_bound;
  /// min.value / (m ln m)
  double ratio;
};

/// Charges j/m + i/m (j = 1..m) against the unit segment. Requires m >= 2.
SharpExample sharp_example(int m);

/// Toroidal distance on the unit-length circle.
double torus_distance(double a, double b) noexcept;

/// f_m(x) = 1/|x| for |x| >= 1/(20 m), 20 m otherwise, |x| toroidal.
double truncated_kernel(int m, double x);

struct TorusConfig {
  std::vector<double> points;  // reduced into [0, 1)
  TorusConfig() = default;
  explicit TorusConfig(std::vector<double> x);
  std::size_t m() const noexcept { return points.size(); }
};

struct TorusPoint {
  double y = 0.0;
  double value = 0.0;         // sum 1/|y - x_l|
  double min_distance = 0.0;  // min_l |y - x_l|
  double bound = 0.0;         // 20 m log(20 m)
};

/// 20 m ln(20 m)
double lemma_certificate_bound(std::size_t m) noexcept;

/// Scans the 100 m grid points k/(100 m), keeps those at distance at least
/// 1/(10 m) from every x_l and returns the one of least potential. Throws
/// SearchExhausted if none meets the certificate bound.
TorusPoint torus_low_potential_point(const TorusConfig& t);

struct LemmaBound {
  double t = 0.0;
  Complex point{0.0};  // gamma(t), original coordinates
  /// values below are in the frame where gamma(0) = 0, gamma(1) = 1
  double value = 0.0;      // 2-D modulus potential at gamma(t)
  double projected = 0.0;  // sum 1/|Re gamma(t) - Re z_l|
  double torus_value = 0.0;
  double bound = 0.0;  // 20 m log(20 m)
  /// |gamma(1) - gamma(0)|; original-frame potentials are value / scale
  double scale = 1.0;
};

/// Low-potential point on the curve obtained by projecting onto the real
/// axis and wrapping onto the torus. Throws SingularCurve, or
/// ProjectionDegenerate if the projected chain does not hold.
LemmaBound lemma1_curve_bound(const ChargeSet& c, const Curve& gamma);

}  // namespace gllab
