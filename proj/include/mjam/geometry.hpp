#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mjam::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

// Normalize an angle to (-pi, pi].
double normalize_angle(double a);

// A planar pose. Heading is measured from the global +y axis toward +x
// (compass convention): heading 0 faces +y, heading pi/2 faces +x.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Pose2() = default;
  Pose2(double px, double py, double h) : x(px), y(py), heading(normalize_angle(h)) {}

  Vec2 position() const { return {x, y}; }
  // Unit vector along the heading.
  Vec2 ahead() const { return {std::sin(heading), std::cos(heading)}; }
  // Unit vector to the right of the heading (completes a right-handed frame
  // with y = ahead).
  Vec2 right() const { return {std::cos(heading), -std::sin(heading)}; }
};

// Map a global point into the target-centric frame: the target sits at the
// origin, +y points along its heading, +x to its right.
Vec2 to_target_frame(Vec2 p, const Pose2& target);
// Inverse of to_target_frame.
Vec2 from_target_frame(Vec2 p, const Pose2& target);

// Region around the target that bounds which agents and map content are
// considered. Axis-aligned in the target frame.
struct InteractionSpace {
  double lateral_extent = 25.0;  // each side
  double ahead_extent = 40.0;
  double behind_extent = 10.0;

  double lateral_span() const { return 2.0 * lateral_extent; }
  double longitudinal_span() const { return ahead_extent + behind_extent; }

  // Closed region: boundary points count as inside.
  bool contains(Vec2 target_frame_pt) const {
    return std::abs(target_frame_pt.x) <= lateral_extent &&
           target_frame_pt.y >= -behind_extent && target_frame_pt.y <= ahead_extent;
  }
};

enum class SemanticClass { kDrivable = 0, kLaneDivider = 1, kCrosswalk = 2, kSidewalk = 3 };
constexpr int kNumSemanticClasses = 4;

const char* to_string(SemanticClass c);
SemanticClass semantic_class_from_string(const std::string& s);

// One map element: a closed polygon (first point repeated last) or a
// polyline, in global-frame coordinates.
struct SceneElement {
  SemanticClass cls = SemanticClass::kDrivable;
  std::vector<Vec2> points;
  std::optional<double> lane_direction;

  bool is_polygon() const {
    return points.size() >= 4 && points.front().x == points.back().x &&
           points.front().y == points.back().y;
  }
};

struct VectorScene {
  std::vector<SceneElement> elements;
};

std::string scene_to_json(const VectorScene& scene);
VectorScene scene_from_json(const std::string& json_text);

// Multi-channel binary bird's-eye raster in the target frame. Row 0 is the
// far-ahead edge; column 0 is the far-left edge (negative x).
struct RasterMap {
  int width = 0;   // columns, lateral
  int height = 0;  // rows, longitudinal
  double resolution = 0.0;  // meters per pixel
  InteractionSpace space;
  // kNumSemanticClasses planes of height*width, values 0/1.
  std::vector<uint8_t> channels;

  uint8_t at(int c, int row, int col) const {
    return channels[(static_cast<size_t>(c) * height + row) * width + col];
  }
  uint8_t& at(int c, int row, int col) {
    return channels[(static_cast<size_t>(c) * height + row) * width + col];
  }

  // Target-frame coordinates of a pixel center.
  Vec2 pixel_center(int row, int col) const {
    return {-space.lateral_extent + (col + 0.5) * resolution,
            space.ahead_extent - (row + 0.5) * resolution};
  }
  // Continuous (possibly out-of-range) pixel coordinates of a target-frame
  // point; pixel centers land on integers.
  double col_coord(double x) const { return (x + space.lateral_extent) / resolution - 0.5; }
  double row_coord(double y) const { return (space.ahead_extent - y) / resolution - 0.5; }

  // Index of the pixel whose center is nearest to p, clamped to the raster.
  void nearest_pixel(Vec2 p, int* row, int* col) const;

  bool drivable_at_nearest(Vec2 p) const;
};

struct RasterizeStats {
  int degenerate_skipped = 0;
};

// Rasterize a global-frame scene into the target frame. Polygon channels are
// set exactly at pixels whose center lies inside or on the element; polylines
// get 1-pixel-wide traces. Degenerate (zero-area) polygons are skipped and
// counted in stats.
RasterMap rasterize(const VectorScene& scene, const Pose2& target, const InteractionSpace& space,
                    double resolution, RasterizeStats* stats = nullptr);

// Plain-text PGM (P2) dump of one channel for quick inspection.
void write_pgm(const RasterMap& raster, SemanticClass channel, const std::string& path);

// Exact Euclidean distance (meters) from each pixel center to the nearest
// drivable pixel center. Zero on drivable pixels.
struct DistanceField {
  int width = 0;
  int height = 0;
  double resolution = 0.0;
  InteractionSpace space;
  std::vector<double> d;  // height*width, row-major

  double at(int row, int col) const { return d[static_cast<size_t>(row) * width + col]; }
  double col_coord(double x) const { return (x + space.lateral_extent) / resolution - 0.5; }
  double row_coord(double y) const { return (space.ahead_extent - y) / resolution - 0.5; }
};

// Exact (not chamfer) Euclidean distance transform of the complement of the
// drivable set. Throws std::runtime_error if no drivable pixel is set.
DistanceField distance_field(const RasterMap& raster);

struct DistanceSample {
  double value = 0.0;  // meters
  double gx = 0.0;     // d value / d x
  double gy = 0.0;     // d value / d y
};

// Bilinear interpolation of the field at a target-frame point. Points outside
// the raster clamp to the border; the gradient is the analytic derivative of
// the bilinear form (zero in clamped directions).
DistanceSample sample_distance(const DistanceField& field, Vec2 p);

// Test support: point-in-polygon with boundary counted as inside, matching
// the rasterizer's ownership rule.
bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly);

}  // namespace mjam::geom
