#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "trsco/cli.hpp"

namespace trsco {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
constexpr int kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string drone_color(int k) {
  if (k < 0) throw DomainError("drone_color: negative drone index");
  if (k < kPaletteSize) return kPalette[k];
  // Golden-angle hue steps never repeat a hue for integer k.
  const double hue = std::fmod(137.50776405003785 * (k - kPaletteSize) + 15.0, 360.0);
  char buf[48];
  std::snprintf(buf, sizeof buf, "hsl(%.4f,70%%,42%%)", hue);
  return buf;
}

std::string render_svg(const CityModel& city, const Trajectories& trajs, const FovParams& fov,
                       const SvgOptions& options) {
  const int s = city.grid_size();
  const double k = options.scale;
  const double side = s * k;
  // Arena [-0.5, S-0.5]^2 in metres; SVG y grows downwards.
  auto px = [&](double x) { return (x + 0.5) * k; };
  auto py = [&](double y) { return (s - 0.5 - y) * k; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(side) << "\" height=\"" << fmt(side)
      << "\" viewBox=\"0 0 " << fmt(side) << ' ' << fmt(side) << "\" data-scale-px-per-m=\"" << fmt(k) << "\">\n";
  out << "<!-- top-down view, " << fmt(k) << " px per m, origin at the centre of cell (0, 0) -->\n";
  out << "<polygon class=\"arena\" points=\"0,0 " << fmt(side) << ",0 " << fmt(side) << ',' << fmt(side) << " 0,"
      << fmt(side) << "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

  const double tallest = std::max(city.max_raw_height(), 1e-9);
  for (const auto& b : obstacle_blocks(city)) {
    const int shade = static_cast<int>(std::lround(215.0 - 150.0 * std::clamp(b.height / tallest, 0.0, 1.0)));
    out << "<rect class=\"building\" x=\"" << fmt(px(b.x0 - 0.5)) << "\" y=\"" << fmt(py(b.y0 + b.length - 0.5))
        << "\" width=\"" << fmt(b.width * k) << "\" height=\"" << fmt(b.length * k) << "\" fill=\"rgb(" << shade << ','
        << shade << ',' << shade << ")\"><title>" << fmt(b.height) << " m</title></rect>\n";
  }

  const double tan_half = std::tan(fov.half_angle * std::numbers::pi / 180.0);
  for (int d = 0; d < trajs.n_drones(); ++d) {
    const std::string color = drone_color(d);
    out << "<g class=\"drone\" data-drone=\"" << d << "\">\n";
    if (options.footprints) {
      for (int t = 0; t < trajs.n_waypoints(); ++t) {
        const Point3& p = trajs.at(d, t);
        out << "<circle class=\"footprint\" cx=\"" << fmt(px(p.x())) << "\" cy=\"" << fmt(py(p.y())) << "\" r=\""
            << fmt(std::max(0.0, p.z()) * tan_half * k) << "\" fill=\"" << color << "\" fill-opacity=\"0.1\"/>\n";
      }
    }
    out << "<polyline class=\"path\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (int t = 0; t < trajs.n_waypoints(); ++t) {
      const Point3& p = trajs.at(d, t);
      out << (t ? " " : "") << fmt(px(p.x())) << ',' << fmt(py(p.y()));
    }
    out << "\"/>\n";
    for (int t = 0; t < trajs.n_waypoints(); ++t) {
      const Point3& p = trajs.at(d, t);
      out << "<circle class=\"waypoint\" cx=\"" << fmt(px(p.x())) << "\" cy=\"" << fmt(py(p.y()))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace trsco
