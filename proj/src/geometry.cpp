#include "mjam/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace mjam::geom {

double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

Vec2 to_target_frame(Vec2 p, const Pose2& target) {
  Vec2 rel = p - target.position();
  return {dot(rel, target.right()), dot(rel, target.ahead())};
}

Vec2 from_target_frame(Vec2 p, const Pose2& target) {
  return target.position() + p.x * target.right() + p.y * target.ahead();
}

const char* to_string(SemanticClass c) {
  switch (c) {
    case SemanticClass::kDrivable: return "drivable";
    case SemanticClass::kLaneDivider: return "lane_divider";
    case SemanticClass::kCrosswalk: return "crosswalk";
    case SemanticClass::kSidewalk: return "sidewalk";
  }
  return "drivable";
}

SemanticClass semantic_class_from_string(const std::string& s) {
  if (s == "drivable") return SemanticClass::kDrivable;
  if (s == "lane_divider") return SemanticClass::kLaneDivider;
  if (s == "crosswalk") return SemanticClass::kCrosswalk;
  if (s == "sidewalk") return SemanticClass::kSidewalk;
  throw std::runtime_error("unknown semantic class: " + s);
}

std::string scene_to_json(const VectorScene& scene) {
  nlohmann::ordered_json j;
  j["elements"] = nlohmann::ordered_json::array();
  for (const auto& e : scene.elements) {
    nlohmann::ordered_json je;
    je["class"] = to_string(e.cls);
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : e.points) pts.push_back({p.x, p.y});
    je["points"] = std::move(pts);
    if (e.lane_direction) {
      je["lane_direction"] = *e.lane_direction;
    } else {
      je["lane_direction"] = nullptr;
    }
    j["elements"].push_back(std::move(je));
  }
  return j.dump();
}

VectorScene scene_from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  VectorScene scene;
  for (const auto& je : j.at("elements")) {
    SceneElement e;
    e.cls = semantic_class_from_string(je.at("class").get<std::string>());
    for (const auto& p : je.at("points")) {
      e.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    if (je.contains("lane_direction") && !je.at("lane_direction").is_null()) {
      e.lane_direction = je.at("lane_direction").get<double>();
    }
    scene.elements.push_back(std::move(e));
  }
  return scene;
}

void RasterMap::nearest_pixel(Vec2 p, int* row, int* col) const {
  double rf = row_coord(p.y);
  double cf = col_coord(p.x);
  int r = static_cast<int>(std::lround(rf));
  int c = static_cast<int>(std::lround(cf));
  *row = std::clamp(r, 0, height - 1);
  *col = std::clamp(c, 0, width - 1);
}

bool RasterMap::drivable_at_nearest(Vec2 p) const {
  int r, c;
  nearest_pixel(p, &r, &c);
  return at(static_cast<int>(SemanticClass::kDrivable), r, c) != 0;
}

namespace {

// True if p lies on the closed segment [a, b].
bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  if (cross(b - a, p - a) != 0.0) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

double polygon_area2(const std::vector<Vec2>& poly) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < poly.size(); ++i) s += cross(poly[i], poly[i + 1]);
  return s;
}

// Clip a segment to the rectangle [0,w]x[0,h] in continuous pixel space
// (Liang-Barsky). Returns false if fully outside.
bool clip_segment(double w, double h, Vec2& a, Vec2& b) {
  double t0 = 0.0, t1 = 1.0;
  double dx = b.x - a.x, dy = b.y - a.y;
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      if (r > t0) t0 = r;
    } else {
      if (r < t0) return false;
      if (r < t1) t1 = r;
    }
    return true;
  };
  if (!clip(-dx, a.x) || !clip(dx, w - a.x) || !clip(-dy, a.y) || !clip(dy, h - a.y)) {
    return false;
  }
  Vec2 na = {a.x + t0 * dx, a.y + t0 * dy};
  Vec2 nb = {a.x + t1 * dx, a.y + t1 * dy};
  a = na;
  b = nb;
  return true;
}

void draw_polyline(RasterMap& raster, int channel, const std::vector<Vec2>& pts_tf) {
  // Bresenham over pixel indices of the clipped segment endpoints.
  auto to_pix = [&](Vec2 p, int* row, int* col) {
    *col = std::clamp(static_cast<int>(std::floor((p.x + raster.space.lateral_extent) / raster.resolution)),
                      0, raster.width - 1);
    *row = std::clamp(static_cast<int>(std::floor((raster.space.ahead_extent - p.y) / raster.resolution)),
                      0, raster.height - 1);
  };
  for (size_t i = 0; i + 1 < pts_tf.size(); ++i) {
    // Work in raster-aligned coordinates so clipping matches pixel space.
    Vec2 a = {(pts_tf[i].x + raster.space.lateral_extent),
              (raster.space.ahead_extent - pts_tf[i].y)};
    Vec2 b = {(pts_tf[i + 1].x + raster.space.lateral_extent),
              (raster.space.ahead_extent - pts_tf[i + 1].y)};
    double w = raster.width * raster.resolution;
    double h = raster.height * raster.resolution;
    if (!clip_segment(w, h, a, b)) continue;
    Vec2 atf = {a.x - raster.space.lateral_extent, raster.space.ahead_extent - a.y};
    Vec2 btf = {b.x - raster.space.lateral_extent, raster.space.ahead_extent - b.y};
    int r0, c0, r1, c1;
    to_pix(atf, &r0, &c0);
    to_pix(btf, &r1, &c1);
    int dr = std::abs(r1 - r0), dc = std::abs(c1 - c0);
    int sr = r0 < r1 ? 1 : -1, sc = c0 < c1 ? 1 : -1;
    int err = dc - dr;
    int r = r0, c = c0;
    while (true) {
      raster.at(channel, r, c) = 1;
      if (r == r1 && c == c1) break;
      int e2 = 2 * err;
      if (e2 > -dr) {
        err -= dr;
        c += sc;
      }
      if (e2 < dc) {
        err += dc;
        r += sr;
      }
    }
  }
}

}  // namespace

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
  // Boundary counts as inside; interior by even-odd crossing.
  size_t n = poly.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    if (on_segment(p, poly[i], poly[i + 1])) return true;
  }
  bool inside = false;
  for (size_t i = 0; i + 1 < n; ++i) {
    Vec2 a = poly[i], b = poly[i + 1];
    if ((a.y > p.y) != (b.y > p.y)) {
      double x_int = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < x_int) inside = !inside;
    }
  }
  return inside;
}

RasterMap rasterize(const VectorScene& scene, const Pose2& target, const InteractionSpace& space,
                    double resolution, RasterizeStats* stats) {
  if (resolution <= 0.0) throw std::invalid_argument("rasterize: resolution must be > 0");
  RasterMap raster;
  raster.resolution = resolution;
  raster.space = space;
  raster.width = static_cast<int>(std::lround(space.lateral_span() / resolution));
  raster.height = static_cast<int>(std::lround(space.longitudinal_span() / resolution));
  raster.channels.assign(static_cast<size_t>(kNumSemanticClasses) * raster.height * raster.width, 0);

  RasterizeStats local;
  for (const auto& e : scene.elements) {
    int ch = static_cast<int>(e.cls);
    std::vector<Vec2> tf(e.points.size());
    for (size_t i = 0; i < e.points.size(); ++i) tf[i] = to_target_frame(e.points[i], target);
    if (e.is_polygon()) {
      if (polygon_area2(tf) == 0.0) {
        local.degenerate_skipped++;
        continue;
      }
      // Bounding box in pixel indices, then exact center containment.
      double min_x = tf[0].x, max_x = tf[0].x, min_y = tf[0].y, max_y = tf[0].y;
      for (const auto& p : tf) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
      }
      int c0 = std::max(0, static_cast<int>(std::floor(raster.col_coord(min_x))));
      int c1 = std::min(raster.width - 1, static_cast<int>(std::ceil(raster.col_coord(max_x))));
      int r0 = std::max(0, static_cast<int>(std::floor(raster.row_coord(max_y))));
      int r1 = std::min(raster.height - 1, static_cast<int>(std::ceil(raster.row_coord(min_y))));
      for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
          if (point_in_polygon(raster.pixel_center(r, c), tf)) raster.at(ch, r, c) = 1;
        }
      }
    } else {
      draw_polyline(raster, ch, tf);
    }
  }
  if (stats) *stats = local;
  return raster;
}

void write_pgm(const RasterMap& raster, SemanticClass channel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  out << "P2\n" << raster.width << " " << raster.height << "\n1\n";
  int ch = static_cast<int>(channel);
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      out << static_cast<int>(raster.at(ch, r, c));
      out << (c + 1 == raster.width ? '\n' : ' ');
    }
  }
}

namespace {

constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

// Lower envelope of parabolas f(q) = (q - i)^2 + g[i], exact in integers.
// Parabola intersections are kept as rationals and compared by
// cross-multiplication, so the selected minimum is exact.
void edt_1d(const std::vector<int64_t>& g, std::vector<int64_t>& out) {
  int n = static_cast<int>(g.size());
  std::vector<int> v(n);
  std::vector<int64_t> z_num(n + 1), z_den(n + 1);
  int k = 0;
  int first = 0;
  while (first < n && g[first] >= kInf) ++first;
  if (first == n) {
    std::fill(out.begin(), out.end(), kInf);
    return;
  }
  v[0] = first;
  z_num[0] = std::numeric_limits<int64_t>::min() / 4;
  z_den[0] = 1;
  z_num[1] = std::numeric_limits<int64_t>::max() / 4;
  z_den[1] = 1;
  for (int q = first + 1; q < n; ++q) {
    if (g[q] >= kInf) continue;
    while (true) {
      int p = v[k];
      // Intersection abscissa of parabolas rooted at q and p.
      int64_t num = (g[q] + static_cast<int64_t>(q) * q) - (g[p] + static_cast<int64_t>(p) * p);
      int64_t den = 2 * (static_cast<int64_t>(q) - p);  // > 0
      // s <= z[k]  <=>  num * z_den[k] <= z_num[k] * den
      if (k > 0 && num * z_den[k] <= z_num[k] * den) {
        --k;
        continue;
      }
      ++k;
      v[k] = q;
      z_num[k] = num;
      z_den[k] = den;
      z_num[k + 1] = std::numeric_limits<int64_t>::max() / 4;
      z_den[k + 1] = 1;
      break;
    }
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    // Advance while z[j+1] < q.
    while (z_num[j + 1] < static_cast<int64_t>(q) * z_den[j + 1]) ++j;
    int64_t dq = static_cast<int64_t>(q) - v[j];
    out[q] = dq * dq + g[v[j]];
  }
}

}  // namespace

DistanceField distance_field(const RasterMap& raster) {
  const int h = raster.height, w = raster.width;
  const int drivable = static_cast<int>(SemanticClass::kDrivable);
  bool any = false;
  for (int r = 0; r < h && !any; ++r)
    for (int c = 0; c < w; ++c)
      if (raster.at(drivable, r, c)) {
        any = true;
        break;
      }
  if (!any) throw std::runtime_error("distance_field: empty drivable area");

  // Pass 1: per column, squared distance along rows to the nearest set pixel.
  std::vector<int64_t> g(static_cast<size_t>(h) * w, kInf);
  for (int c = 0; c < w; ++c) {
    int64_t dist = kInf;
    for (int r = 0; r < h; ++r) {
      if (raster.at(drivable, r, c)) dist = 0;
      else if (dist < kInf) ++dist;
      g[static_cast<size_t>(r) * w + c] = dist;
    }
    dist = kInf;
    for (int r = h - 1; r >= 0; --r) {
      if (raster.at(drivable, r, c)) dist = 0;
      else if (dist < kInf) ++dist;
      g[static_cast<size_t>(r) * w + c] = std::min<int64_t>(g[static_cast<size_t>(r) * w + c], dist);
    }
    for (int r = 0; r < h; ++r) {
      auto& x = g[static_cast<size_t>(r) * w + c];
      if (x < kInf) x = x * x;
    }
  }

  // Pass 2: per row, lower envelope over columns.
  DistanceField field;
  field.width = w;
  field.height = h;
  field.resolution = raster.resolution;
  field.space = raster.space;
  field.d.resize(static_cast<size_t>(h) * w);
  std::vector<int64_t> row_in(w), row_out(w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) row_in[c] = g[static_cast<size_t>(r) * w + c];
    edt_1d(row_in, row_out);
    for (int c = 0; c < w; ++c) {
      field.d[static_cast<size_t>(r) * w + c] =
          std::sqrt(static_cast<double>(row_out[c])) * raster.resolution;
    }
  }
  return field;
}

DistanceSample sample_distance(const DistanceField& field, Vec2 p) {
  const int w = field.width, h = field.height;
  double cf = field.col_coord(p.x);
  double rf = field.row_coord(p.y);
  bool clamp_x = false, clamp_y = false;
  if (cf <= 0.0) {
    clamp_x = cf < 0.0;
    cf = 0.0;
  } else if (cf >= w - 1) {
    clamp_x = cf > w - 1;
    cf = w - 1;
  }
  if (rf <= 0.0) {
    clamp_y = rf < 0.0;
    rf = 0.0;
  } else if (rf >= h - 1) {
    clamp_y = rf > h - 1;
    rf = h - 1;
  }
  int c0 = std::min(static_cast<int>(std::floor(cf)), w - 2);
  int r0 = std::min(static_cast<int>(std::floor(rf)), h - 2);
  if (w == 1) c0 = 0;
  if (h == 1) r0 = 0;
  double u = cf - c0;
  double v = rf - r0;
  int c1 = std::min(c0 + 1, w - 1);
  int r1 = std::min(r0 + 1, h - 1);
  double f00 = field.at(r0, c0), f01 = field.at(r0, c1);
  double f10 = field.at(r1, c0), f11 = field.at(r1, c1);

  DistanceSample s;
  s.value = (1 - v) * ((1 - u) * f00 + u * f01) + v * ((1 - u) * f10 + u * f11);
  // d value / d cf and / d rf, then chain to meters. Column coordinate grows
  // with x, row coordinate decreases with y.
  double dv_dcf = (1 - v) * (f01 - f00) + v * (f11 - f10);
  double dv_drf = (1 - u) * (f10 - f00) + u * (f11 - f01);
  s.gx = clamp_x ? 0.0 : dv_dcf / field.resolution;
  s.gy = clamp_y ? 0.0 : -dv_drf / field.resolution;
  return s;
}

}  // namespace mjam::geom
