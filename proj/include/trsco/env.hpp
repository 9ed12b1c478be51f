#pragma once

#include <cstdint>
#include <vector>

#include "trsco/types.hpp"

namespace trsco {

struct CityParams {
  int grid_size = 50;            // S, cells of 1 m
  double building_density = 0.25;
  double height_min = 10.0;      // m
  double height_max = 50.0;      // m
  int smoothing_radius = 2;      // cells
  std::uint64_t seed = 0;

  /// Throws DomainError on violated invariants.
  void validate() const;
};

/// Axis-aligned cuboid footprint in cell indices: cells [x0, x0+width) x [y0, y0+length).
struct Building {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int length = 0;
  double height = 0.0;
};

struct GridCell {
  int i = 0;
  int j = 0;
  bool operator==(const GridCell&) const = default;
};

/// Gridded obstacle field. Cell (i, j) has its center at (x, y) = (i, j) meters;
/// heights are stored with index i * S + j.
class CityModel {
 public:
  CityModel() = default;

  /// Builds a model from a raw height raster (size S*S); the smoothed field is derived.
  CityModel(CityParams params, std::vector<double> raw_heights, std::vector<Building> buildings = {});

  /// Builds a model with an explicitly provided smoothed field (synthetic fields in tests).
  static CityModel with_smooth_field(CityParams params, std::vector<double> raw_heights,
                                     std::vector<double> smooth_heights);

  const CityParams& params() const { return params_; }
  int grid_size() const { return params_.grid_size; }
  double raw(int i, int j) const { return raw_[cell(i, j)]; }
  double smooth(int i, int j) const { return smooth_[cell(i, j)]; }
  const std::vector<double>& raw_heights() const { return raw_; }
  const std::vector<double>& smooth_heights() const { return smooth_; }
  const std::vector<GridCell>& obstacle_cells() const { return obstacle_cells_; }
  const std::vector<Building>& buildings() const { return buildings_; }

  /// Raw height of the cell nearest to (x, y); the query is clamped into the grid.
  double raw_at(double x, double y) const;

  double max_raw_height() const;

 private:
  std::size_t cell(int i, int j) const;

  CityParams params_;
  std::vector<double> raw_;
  std::vector<double> smooth_;
  std::vector<GridCell> obstacle_cells_;
  std::vector<Building> buildings_;
};

/// Normalized box filter of the given radius; the window is clipped at the grid border.
std::vector<double> box_filter(const std::vector<double>& field, int grid_size, int radius);

/// Rasterizes non-overlapping buildings onto an S x S grid.
CityModel city_from_buildings(const CityParams& params, const std::vector<Building>& buildings);

/// Random city: non-overlapping w x l rectangles (w, l in {2..6}) placed by rejection
/// sampling until the target density is met or 10 S^2 attempts are exhausted.
CityModel generate_city(const CityParams& params);

/// C1 cubic-convolution interpolant of the smoothed field over [0, S-1]^2.
double smoothed_height(const CityModel& city, double x, double y);

/// Analytic gradient (dh/dx, dh/dy) of smoothed_height.
Point2 height_gradient(const CityModel& city, double x, double y);

/// Max raw height over cells whose centers lie within `radius` of (cx, cy); 0 if none.
double max_height_in_disk(const CityModel& city, double cx, double cy, double radius);

/// Footprint of a building in metres: the union of the nearest-point squares of its cells.
/// Faces on the arena border are pushed out to infinity: they cannot be passed, so they
/// must not attract an escape direction.
struct Footprint {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
};

Footprint footprint(const Building& building, int grid_size);

/// Signed distance to the footprint (negative inside). The gradient is the unit direction
/// away from the nearest boundary point; inside it is the outward normal of the nearest face.
double signed_distance(const Footprint& fp, double x, double y, Point2* gradient = nullptr);

/// Shape of the per-building clearance profile H * g(s), s = signed distance:
///   g(s) = 1 - slope_inside * s                 for s <= 0
///   g(s) = 1 - slope * s - c * s^2              for s > 0, with g(skirt) = 0.
/// g is concave and non-increasing on the whole line (slope_inside <= slope), so the profile
/// is a concave function of (x, y) and every tangent plane over-estimates it.
struct EnvelopeShape {
  double skirt = 2.0;  // m
  double slope = 0.25; // 1/m, outside slope of g at the footprint edge

  /// Throws DomainError unless skirt > 0 and 0 <= slope <= 1 / skirt.
  void validate() const;
};

struct SurfaceSample {
  double value = 0.0;
  Point2 gradient = Point2::Zero();
};

/// H * g(s) and optionally its derivative in s.
double envelope_profile(double height, double s, const EnvelopeShape& shape, bool rising_inside,
                        double* derivative = nullptr);

/// Profile of one building (the concave extension: negative beyond the skirt). When
/// `rising_inside` the profile keeps growing inwards with the edge slope, which gives
/// references inside a footprint a direction of escape.
SurfaceSample building_profile(const Building& building, int grid_size, double x, double y,
                               const EnvelopeShape& shape, bool rising_inside);

/// Affine profile H * (1 + slope * depth_f) with depth_f the distance to face f of the
/// footprint (0: x_lo, 1: x_hi, 2: y_lo, 3: y_hi). Because the signed distance is at least
/// -depth_f and g(s) <= 1 - slope * s, it bounds the rising profile from above for every f.
SurfaceSample face_profile(const Building& building, int grid_size, int face, double x, double y,
                           const EnvelopeShape& shape);

/// The city's building list, or one 1 x 1 block per raised cell when the model has none.
std::vector<Building> obstacle_blocks(const CityModel& city);

}  // namespace trsco
