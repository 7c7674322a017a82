#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gllab/errors.hpp"
#include "gllab/geometry.hpp"
#include "gllab/polynomial.hpp"

namespace gllab {

/// p = q * r with q carrying the roots in K and r the roots outside K.
class RootSplit {
 public:
  /// Throws std::invalid_argument when an inside root is not in K or an
  /// outside root is.
  RootSplit(const ConvexDomain& k, std::vector<Complex> inside, std::vector<Complex> outside);

  /// Sorts roots by membership in K.
  static RootSplit classify(const ConvexDomain& k, std::span<const Complex> roots);

  const std::vector<Complex>& inside() const noexcept { return inside_; }
  const std::vector<Complex>& outside() const noexcept { return outside_; }
  std::vector<Complex> all_roots() const;

  Polynomial q() const { return Polynomial::from_roots(inside_); }
  Polynomial r() const { return Polynomial::from_roots(outside_); }
  Polynomial p() const { return Polynomial::from_roots(all_roots()); }

 private:
  RootSplit() = default;
  std::vector<Complex> inside_;
  std::vector<Complex> outside_;
};

/// g(z) = |q'/q| - |r'/r| - delta/|r|; z is in A_delta iff g(z) <= 0.
/// Throws SingularPoint within the guard of a root of q or r.
double adelta_indicator(const RootSplit& split, double delta, Complex z);

/// Grid-sampled A_delta with 4-connected component labels.
struct RegionMask {
  Box bbox;
  double resolution = 0.0;  // cells per unit length
  int nx = 0;
  int ny = 0;
  double delta = 0.0;
  std::vector<double> indicator;  // per cell, row-major (iy * nx + ix)
  std::vector<int> labels;        // component id or -1
  int components = 0;

  double cell_size() const noexcept { return 1.0 / resolution; }
  std::size_t index(int ix, int iy) const noexcept {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix);
  }
  Complex cell_center(int ix, int iy) const noexcept;
  Complex cell_center(std::size_t idx) const noexcept;
  /// Cell containing z, if z lies in the bbox.
  std::optional<std::size_t> cell_of(Complex z) const noexcept;
  /// Label of the cell containing z, or -1.
  int label_at(Complex z) const noexcept;
  std::vector<std::size_t> cell_count_per_component() const;
};

struct MaskOptions {
  /// Cells whose indicator satisfies |g| <= equality_tol count as inside.
  double equality_tol = 1e-14;
};

/// Raised when A_delta reaches the bbox edge.
class GrowBBox : public Error {
 public:
  GrowBBox(const std::string& what, Box suggested) : Error(what), suggested_(suggested) {}
  Box suggested() const noexcept { return suggested_; }

 private:
  Box suggested_;
};

/// Builds the mask for one delta. Points in `witnesses` (typically the
/// critical points of p, which always lie in A_delta) are sampled in addition
/// to cell centres: a cell is inside when any of its samples has g <= 0.
RegionMask build_mask(const RootSplit& split, double delta, const Box& bbox, double resolution,
                      std::span<const Complex> witnesses = {}, const MaskOptions& opts = {});

/// One mask per delta; the delta-independent field terms are evaluated once.
std::vector<RegionMask> build_masks(const RootSplit& split, std::span<const double> deltas,
                                    const Box& bbox, double resolution,
                                    std::span<const Complex> witnesses = {},
                                    const MaskOptions& opts = {});

/// One row per cell: x, y, g, label.
void write_mask_csv(const RegionMask& mask, std::ostream& os);

/// Bounding box of all roots and K, inflated by 2 (eps + diam K).
Box default_bbox(const RootSplit& split, const ConvexDomain& k, double eps);

/// Closed boundary loops of every component, indexed by component id, with
/// the component on the left. Vertices are the zeros of the indicator,
/// linearly interpolated between 4-adjacent cell centres (marching squares,
/// saddles resolved by 4-connectivity).
std::vector<std::vector<std::vector<Complex>>> trace_boundaries(const RegionMask& mask);

/// Number of points falling in cells of each component.
std::vector<int> count_by_component(const RegionMask& mask, std::span<const Complex> points);

struct ComponentReport {
  int id = 0;
  std::size_t cells = 0;
  bool touches_K = false;
  bool escapes_Keps = false;
  int r_roots_inside = 0;
  /// Zeros of p' inside, by the argument principle on the traced boundary;
  /// empty when the count failed (see count_error).
  std::optional<int> crit_points_inside;
  double winding_raw = 0.0;
  /// min over boundary samples of |q' r| - |q r'|
  double rouche_margin = 0.0;
  std::string count_error;
};

struct ClassifyOptions {
  /// Boundary samples per cell edge for the winding count.
  int samples_per_cell = 16;
};

std::vector<ComponentReport> classify_components(const RegionMask& mask, const RootSplit& split,
                                                 const ConvexDomain& k, double eps,
                                                 const ClassifyOptions& opts = {});

struct BridgeVerdict {
  bool bridge = false;
  int component = -1;
  /// Cell-centre path from a cell in K to a cell outside K_eps.
  std::vector<Complex> witness;
  /// |r'/r| along the witness
  std::vector<double> outside_field;
  /// |q'/q| along the witness
  std::vector<double> inside_field;
};

BridgeVerdict bridging_check(const RootSplit& split, double delta, const ConvexDomain& k,
                             double eps, const RegionMask& mask);

/// n d / (d + diam)^2, the lower bound for |sum 1/(z - a_k)| over n roots in
/// K at distance d from K.
double field_lower_bound(int n, double d, double diam);

}  // namespace gllab
