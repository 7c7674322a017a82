#include "gllab/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gllab/errors.hpp"

namespace gllab {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  if (std::string_view(buf) == "-0.0000") return "0.0000";
  return buf;
}

struct Frame {
  Box view;
  double scale;
  double x(Complex z) const { return (z.real() - view.xmin) * scale; }
  double y(Complex z) const { return (view.ymax - z.imag()) * scale; }
  std::string xy(Complex z) const { return fmt(x(z)) + ' ' + fmt(y(z)); }
};

Box auto_view(const SvgScene& s) {
  Box b = s.domain.bounds().inflated(s.epsilon);
  const auto grow = [&b](const std::vector<Complex>& zs) {
    for (const Complex z : zs) b = b.expanded_to(z);
  };
  grow(s.inside_roots);
  grow(s.outside_roots);
  grow(s.critical_points);
  grow(s.witness);
  for (const auto& comp : s.components)
    for (const auto& loop : comp) grow(loop);
  return b.inflated(0.05 * std::max(b.width(), b.height()));
}

void polyline_path(std::ostream& os, const Frame& f, const std::vector<Complex>& loop, bool close) {
  for (std::size_t i = 0; i < loop.size(); ++i) os << (i == 0 ? "M" : " L") << f.xy(loop[i]);
  if (close) os << " Z";
}

}  // namespace

SvgScene scene_from_report(const TheoremReport& r, std::size_t delta_index) {
  SvgScene s;
  s.domain = r.config.domain;
  s.epsilon = r.config.epsilon;
  s.inside_roots = r.inside;
  s.outside_roots = r.outside;
  s.critical_points = r.critical_points;
  if (delta_index < r.adelta.size()) {
    s.components = r.adelta[delta_index].boundaries;
    s.witness = r.adelta[delta_index].bridging.witness;
  }
  return s;
}

void emit_svg(const SvgScene& s, std::ostream& os) {
  const Box view = s.view ? *s.view : auto_view(s);
  const Frame f{view, s.width_px / view.width()};
  const double height = view.height() * f.scale;

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(s.width_px) << "\" height=\"" << fmt(height)
     << "\" viewBox=\"0 0 " << fmt(s.width_px) << ' ' << fmt(height) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  os << "<g id=\"K\" fill=\"#dde6f0\" stroke=\"#1f3b5a\" stroke-width=\"1.5\">\n<path d=\"";
  polyline_path(os, f, s.domain.outline(0.0, 256), true);
  os << "\"/>\n</g>\n";

  os << "<g id=\"K_eps\" fill=\"none\" stroke=\"#1f3b5a\" stroke-width=\"1\" stroke-dasharray=\"6 4\">\n<path d=\"";
  polyline_path(os, f, s.domain.outline(s.epsilon, 256), true);
  os << "\"/>\n</g>\n";

  os << "<g id=\"adelta\" fill=\"#e8a33d\" fill-opacity=\"0.45\" stroke=\"#a0620c\" stroke-width=\"0.75\" "
        "fill-rule=\"evenodd\">\n";
  for (std::size_t c = 0; c < s.components.size(); ++c) {
    os << "<path data-component=\"" << c << "\" d=\"";
    for (std::size_t l = 0; l < s.components[c].size(); ++l) {
      if (l > 0) os << ' ';
      polyline_path(os, f, s.components[c][l], true);
    }
    os << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g id=\"roots\">\n";
  for (const Complex z : s.inside_roots)
    os << "<circle cx=\"" << fmt(f.x(z)) << "\" cy=\"" << fmt(f.y(z)) << "\" r=\"2.5\" fill=\"#1f3b5a\"/>\n";
  for (const Complex z : s.outside_roots)
    os << "<circle cx=\"" << fmt(f.x(z)) << "\" cy=\"" << fmt(f.y(z)) << "\" r=\"3.5\" fill=\"#b3261e\"/>\n";
  os << "</g>\n";

  os << "<g id=\"critical_points\" stroke=\"#2e7d32\" stroke-width=\"1.2\">\n";
  for (const Complex z : s.critical_points) {
    const double x = f.x(z);
    const double y = f.y(z);
    os << "<path d=\"M" << fmt(x - 3) << ' ' << fmt(y - 3) << " L" << fmt(x + 3) << ' ' << fmt(y + 3) << " M"
       << fmt(x - 3) << ' ' << fmt(y + 3) << " L" << fmt(x + 3) << ' ' << fmt(y - 3) << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g id=\"witness\" fill=\"none\" stroke=\"#6a1b9a\" stroke-width=\"2\">\n";
  if (s.witness.size() >= 2) {
    os << "<path d=\"";
    polyline_path(os, f, s.witness, false);
    os << "\"/>\n";
  }
  os << "</g>\n";
  os << "</svg>\n";
}

void emit_svg(const SvgScene& scene, const std::string& path) {
  std::ostringstream buf;
  emit_svg(scene, buf);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << buf.str();
  if (!out.flush()) throw Error("failed writing " + path);
}

}  // namespace gllab
