#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gllab/geometry.hpp"
#include "gllab/harness.hpp"

namespace gllab {

struct SvgScene {
  ConvexDomain domain = ConvexDomain::disk(0.0, 1.0);
  double epsilon = 0.25;
  std::vector<Complex> inside_roots;
  std::vector<Complex> outside_roots;
  std::vector<Complex> critical_points;
  /// per component, closed loops (holes included)
  std::vector<std::vector<std::vector<Complex>>> components;
  std::vector<Complex> witness;
  /// drawing window; unset means everything above plus a margin
  std::optional<Box> view;
  double width_px = 800.0;
};

/// Scene for one delta of a report; delta_index past the end draws no A_delta.
SvgScene scene_from_report(const TheoremReport& report, std::size_t delta_index = 0);

/// Layers in order: K, K_eps, adelta, roots, critical_points, witness.
/// Output depends only on the scene.
void emit_svg(const SvgScene& scene, std::ostream& os);
/// Throws Error when the file cannot be written.
void emit_svg(const SvgScene& scene, const std::string& path);

}  // namespace gllab
