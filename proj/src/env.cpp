#include "trsco/env.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace trsco {

namespace {

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

int uniform_int(std::mt19937_64& engine, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine() % span);
}

// Catmull-Rom weights for the four nodes around a fractional offset s in [0, 1].
std::array<double, 4> cubic_weights(double s) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return {0.5 * (-s3 + 2.0 * s2 - s), 0.5 * (3.0 * s3 - 5.0 * s2 + 2.0),
          0.5 * (-3.0 * s3 + 4.0 * s2 + s), 0.5 * (s3 - s2)};
}

std::array<double, 4> cubic_weight_derivatives(double s) {
  const double s2 = s * s;
  return {0.5 * (-3.0 * s2 + 4.0 * s - 1.0), 0.5 * (9.0 * s2 - 10.0 * s),
          0.5 * (-9.0 * s2 + 8.0 * s + 1.0), 0.5 * (3.0 * s2 - 2.0 * s)};
}

struct Stencil {
  std::array<int, 4> nodes;
  double s;
};

Stencil stencil(double coord, int grid_size) {
  int base = static_cast<int>(std::floor(coord));
  base = std::clamp(base, 0, std::max(0, grid_size - 2));
  Stencil st{};
  st.s = coord - base;
  for (int n = 0; n < 4; ++n) {
    st.nodes[n] = std::clamp(base - 1 + n, 0, grid_size - 1);
  }
  return st;
}

void check_inside(const CityModel& city, double x, double y, const char* what) {
  const double hi = city.grid_size() - 1;
  if (!(x >= 0.0 && x <= hi && y >= 0.0 && y <= hi)) {
    throw DomainError(std::string(what) + ": query (" + std::to_string(x) + ", " +
                      std::to_string(y) + ") outside [0, S-1]^2");
  }
}

}  // namespace

void CityParams::validate() const {
  if (grid_size < 4) throw DomainError("CityParams: grid_size must be >= 4");
  if (!(building_density >= 0.0 && building_density <= 1.0)) {
    throw DomainError("CityParams: building_density must lie in [0, 1]");
  }
  if (!(height_min >= 0.0 && height_min <= height_max)) {
    throw DomainError("CityParams: need 0 <= height_min <= height_max");
  }
  if (smoothing_radius < 0) throw DomainError("CityParams: smoothing_radius must be >= 0");
}

CityModel::CityModel(CityParams params, std::vector<double> raw_heights,
                     std::vector<Building> buildings)
    : params_(params), raw_(std::move(raw_heights)), buildings_(std::move(buildings)) {
  params_.validate();
  const auto cells = static_cast<std::size_t>(params_.grid_size) * params_.grid_size;
  if (raw_.size() != cells) throw DomainError("CityModel: raw height raster has wrong size");
  smooth_ = box_filter(raw_, params_.grid_size, params_.smoothing_radius);
  for (int i = 0; i < params_.grid_size; ++i) {
    for (int j = 0; j < params_.grid_size; ++j) {
      if (raw_[cell(i, j)] > 0.0) obstacle_cells_.push_back({i, j});
    }
  }
}

CityModel CityModel::with_smooth_field(CityParams params, std::vector<double> raw_heights,
                                       std::vector<double> smooth_heights) {
  CityModel city(params, std::move(raw_heights));
  if (smooth_heights.size() != city.raw_.size()) {
    throw DomainError("CityModel: smooth field has wrong size");
  }
  city.smooth_ = std::move(smooth_heights);
  return city;
}

std::size_t CityModel::cell(int i, int j) const {
  const int s = params_.grid_size;
  if (i < 0 || i >= s || j < 0 || j >= s) throw DomainError("CityModel: cell index out of range");
  return static_cast<std::size_t>(i) * s + j;
}

double CityModel::raw_at(double x, double y) const {
  const int hi = params_.grid_size - 1;
  const int i = std::clamp(static_cast<int>(std::lround(x)), 0, hi);
  const int j = std::clamp(static_cast<int>(std::lround(y)), 0, hi);
  return raw_[cell(i, j)];
}

double CityModel::max_raw_height() const {
  return raw_.empty() ? 0.0 : *std::max_element(raw_.begin(), raw_.end());
}

std::vector<double> box_filter(const std::vector<double>& field, int grid_size, int radius) {
  const int s = grid_size;
  std::vector<double> out(field.size());
  for (int i = 0; i < s; ++i) {
    const int i0 = std::max(0, i - radius);
    const int i1 = std::min(s - 1, i + radius);
    for (int j = 0; j < s; ++j) {
      const int j0 = std::max(0, j - radius);
      const int j1 = std::min(s - 1, j + radius);
      double sum = 0.0;
      double lo = field[static_cast<std::size_t>(i0) * s + j0];
      double hi = lo;
      for (int a = i0; a <= i1; ++a) {
        for (int b = j0; b <= j1; ++b) {
          const double v = field[static_cast<std::size_t>(a) * s + b];
          sum += v;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      const double count = static_cast<double>((i1 - i0 + 1) * (j1 - j0 + 1));
      // Clamping keeps constant windows exact under round-off.
      out[static_cast<std::size_t>(i) * s + j] = std::clamp(sum / count, lo, hi);
    }
  }
  return out;
}

CityModel city_from_buildings(const CityParams& params, const std::vector<Building>& buildings) {
  params.validate();
  const int s = params.grid_size;
  std::vector<double> raw(static_cast<std::size_t>(s) * s, 0.0);
  for (const auto& b : buildings) {
    if (b.width <= 0 || b.length <= 0 || b.x0 < 0 || b.y0 < 0 || b.x0 + b.width > s ||
        b.y0 + b.length > s || b.height < 0.0) {
      throw DomainError("city_from_buildings: building outside grid");
    }
    for (int i = b.x0; i < b.x0 + b.width; ++i) {
      for (int j = b.y0; j < b.y0 + b.length; ++j) {
        raw[static_cast<std::size_t>(i) * s + j] = b.height;
      }
    }
  }
  return CityModel(params, std::move(raw), buildings);
}

CityModel generate_city(const CityParams& params) {
  params.validate();
  const int s = params.grid_size;
  const long total = static_cast<long>(s) * s;
  const long target = std::lround(params.building_density * static_cast<double>(total));
  constexpr int kMinSide = 2;
  constexpr int kMaxSide = 6;
  const int max_side = std::min(kMaxSide, s);

  std::mt19937_64 engine(params.seed);
  std::vector<char> occupied(static_cast<std::size_t>(total), 0);
  std::vector<Building> buildings;
  long filled = 0;
  const long max_attempts = 10 * total;

  for (long attempt = 0; attempt < max_attempts && target - filled >= kMinSide * kMinSide; ++attempt) {
    const int w = uniform_int(engine, kMinSide, max_side);
    const int l = uniform_int(engine, kMinSide, max_side);
    const int x0 = uniform_int(engine, 0, s - w);
    const int y0 = uniform_int(engine, 0, s - l);
    const double height =
        params.height_min + (params.height_max - params.height_min) * uniform01(engine);
    if (filled + static_cast<long>(w) * l > target) continue;
    bool overlap = false;
    for (int i = x0; i < x0 + w && !overlap; ++i) {
      for (int j = y0; j < y0 + l; ++j) {
        if (occupied[static_cast<std::size_t>(i) * s + j]) {
          overlap = true;
          break;
        }
      }
    }
    if (overlap) continue;
    for (int i = x0; i < x0 + w; ++i) {
      for (int j = y0; j < y0 + l; ++j) occupied[static_cast<std::size_t>(i) * s + j] = 1;
    }
    filled += static_cast<long>(w) * l;
    buildings.push_back({x0, y0, w, l, height});
  }

  if (target > 0 && buildings.empty()) {
    throw GenerationError("generate_city: density " + std::to_string(params.building_density) +
                          " cannot place any building on a " + std::to_string(s) + "x" +
                          std::to_string(s) + " grid");
  }
  return city_from_buildings(params, buildings);
}

double smoothed_height(const CityModel& city, double x, double y) {
  check_inside(city, x, y, "smoothed_height");
  const int s = city.grid_size();
  const Stencil sx = stencil(x, s);
  const Stencil sy = stencil(y, s);
  const auto wx = cubic_weights(sx.s);
  const auto wy = cubic_weights(sy.s);
  double value = 0.0;
  for (int a = 0; a < 4; ++a) {
    double row = 0.0;
    for (int b = 0; b < 4; ++b) row += wy[b] * city.smooth(sx.nodes[a], sy.nodes[b]);
    value += wx[a] * row;
  }
  return value;
}

Point2 height_gradient(const CityModel& city, double x, double y) {
  check_inside(city, x, y, "height_gradient");
  const int s = city.grid_size();
  const Stencil sx = stencil(x, s);
  const Stencil sy = stencil(y, s);
  const auto wx = cubic_weights(sx.s);
  const auto wy = cubic_weights(sy.s);
  const auto dx = cubic_weight_derivatives(sx.s);
  const auto dy = cubic_weight_derivatives(sy.s);
  Point2 grad = Point2::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double h = city.smooth(sx.nodes[a], sy.nodes[b]);
      grad.x() += dx[a] * wy[b] * h;
      grad.y() += wx[a] * dy[b] * h;
    }
  }
  return grad;
}

double max_height_in_disk(const CityModel& city, double cx, double cy, double radius) {
  if (!(radius >= 0.0)) throw DomainError("max_height_in_disk: radius must be >= 0");
  const int s = city.grid_size();
  const int i0 = std::max(0, static_cast<int>(std::ceil(cx - radius)));
  const int i1 = std::min(s - 1, static_cast<int>(std::floor(cx + radius)));
  const int j0 = std::max(0, static_cast<int>(std::ceil(cy - radius)));
  const int j1 = std::min(s - 1, static_cast<int>(std::floor(cy + radius)));
  const double r2 = radius * radius;
  double best = 0.0;
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j <= j1; ++j) {
      const double dxv = i - cx;
      const double dyv = j - cy;
      if (dxv * dxv + dyv * dyv <= r2) best = std::max(best, city.raw(i, j));
    }
  }
  return best;
}

Footprint footprint(const Building& b, int grid_size) {
  constexpr double far = std::numeric_limits<double>::infinity();
  return {b.x0 == 0 ? -far : b.x0 - 0.5, b.x0 + b.width >= grid_size ? far : b.x0 + b.width - 0.5,
          b.y0 == 0 ? -far : b.y0 - 0.5, b.y0 + b.length >= grid_size ? far : b.y0 + b.length - 0.5};
}

double signed_distance(const Footprint& fp, double x, double y, Point2* gradient) {
  const double dx = x < fp.x_lo ? x - fp.x_lo : (x > fp.x_hi ? x - fp.x_hi : 0.0);
  const double dy = y < fp.y_lo ? y - fp.y_lo : (y > fp.y_hi ? y - fp.y_hi : 0.0);
  if (dx != 0.0 || dy != 0.0) {
    const double d = std::hypot(dx, dy);
    if (gradient) *gradient = Point2(dx / d, dy / d);
    return d;
  }
  // Inside or on the boundary: distance to the nearest face.
  const double faces[4] = {x - fp.x_lo, fp.x_hi - x, y - fp.y_lo, fp.y_hi - y};
  const Point2 normals[4] = {Point2(-1, 0), Point2(1, 0), Point2(0, -1), Point2(0, 1)};
  int best = 0;
  for (int f = 1; f < 4; ++f) {
    if (faces[f] < faces[best]) best = f;
  }
  if (gradient) *gradient = normals[best];
  return -faces[best];
}

void EnvelopeShape::validate() const {
  if (!(skirt > 0.0)) throw DomainError("EnvelopeShape: skirt must be > 0");
  if (!(slope >= 0.0 && slope * skirt <= 1.0)) {
    throw DomainError("EnvelopeShape: slope must lie in [0, 1 / skirt]");
  }
}

double envelope_profile(double height, double s, const EnvelopeShape& shape, bool rising_inside,
                        double* derivative) {
  double g = 0.0;
  double dg = 0.0;
  if (s <= 0.0) {
    // flat roof unless rising; s may be -inf when every face lies on the arena border
    g = rising_inside ? 1.0 - shape.slope * s : 1.0;
    dg = rising_inside ? -shape.slope : 0.0;
  } else {
    const double c = (1.0 - shape.slope * shape.skirt) / (shape.skirt * shape.skirt);
    g = 1.0 - shape.slope * s - c * s * s;
    dg = -shape.slope - 2.0 * c * s;
  }
  if (derivative) *derivative = height * dg;
  return height * g;
}

SurfaceSample building_profile(const Building& building, int grid_size, double x, double y,
                               const EnvelopeShape& shape, bool rising_inside) {
  Point2 n;
  const double s = signed_distance(footprint(building, grid_size), x, y, &n);
  double slope = 0.0;
  const double value = envelope_profile(building.height, s, shape, rising_inside, &slope);
  return {value, slope * n};
}

SurfaceSample face_profile(const Building& building, int grid_size, int face, double x, double y,
                           const EnvelopeShape& shape) {
  if (face < 0 || face > 3) throw DomainError("face_profile: face must be 0..3");
  const Footprint fp = footprint(building, grid_size);
  const double depth[4] = {x - fp.x_lo, fp.x_hi - x, y - fp.y_lo, fp.y_hi - y};
  const Point2 normals[4] = {Point2(-1, 0), Point2(1, 0), Point2(0, -1), Point2(0, 1)};
  const double h = building.height;
  return {h * (1.0 + shape.slope * depth[face]), -h * shape.slope * normals[face]};
}

std::vector<Building> obstacle_blocks(const CityModel& city) {
  if (!city.buildings().empty()) return city.buildings();
  std::vector<Building> blocks;
  for (const auto& c : city.obstacle_cells()) blocks.push_back({c.i, c.j, 1, 1, city.raw(c.i, c.j)});
  return blocks;
}

}  // namespace trsco
