#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "svwb/balance.hpp"
#include "svwb/error.hpp"
#include "svwb/image.hpp"
#include "svwb/metrics.hpp"
#include "svwb/srgb.hpp"

namespace svwb {

// A spatial illuminant model applied as a per-pixel diagonal XYZ gain.
//
// two-source-blend composes the two source gains with the same
// inverse-distance weight rule the balancer uses, blending the per-channel
// attenuations (weighted harmonic blend of the gains). A scene lit this way
// is exactly recovered by spatially varying balancing anchored at the source
// coordinates, which is the strongest end-to-end check in the test suite.
struct IlluminantField {
  enum class Kind { kUniform, kTwoSourceBlend, kLinearGradient };

  Kind kind = Kind::kUniform;
  std::vector<Vec3> gains;         // 1 gain for uniform, 2 otherwise
  std::vector<PixelCoord> coords;  // source positions / gradient endpoints

  static IlluminantField uniform(const Vec3& gain) {
    return {Kind::kUniform, {gain}, {}};
  }
  static IlluminantField two_source(const Vec3& gain_a, const PixelCoord& at_a,
                                    const Vec3& gain_b, const PixelCoord& at_b) {
    return {Kind::kTwoSourceBlend, {gain_a, gain_b}, {at_a, at_b}};
  }
  static IlluminantField gradient(const Vec3& gain_from, const PixelCoord& from,
                                  const Vec3& gain_to, const PixelCoord& to) {
    return {Kind::kLinearGradient, {gain_from, gain_to}, {from, to}};
  }
};

inline void validate_field(const IlluminantField& field) {
  const size_t want_gains = field.kind == IlluminantField::Kind::kUniform ? 1 : 2;
  const size_t want_coords = field.kind == IlluminantField::Kind::kUniform ? 0 : 2;
  if (field.gains.size() != want_gains) {
    throw config_error("illuminant field: expected " + std::to_string(want_gains) +
                       " gain triple(s), got " + std::to_string(field.gains.size()));
  }
  if (field.coords.size() != want_coords) {
    throw config_error("illuminant field: expected " + std::to_string(want_coords) +
                       " coordinate(s), got " + std::to_string(field.coords.size()));
  }
  for (const auto& g : field.gains) {
    if (!(g.x > 0.0 && g.y > 0.0 && g.z > 0.0)) {
      throw config_error("illuminant field: gain components must be strictly positive");
    }
  }
  if (field.kind == IlluminantField::Kind::kLinearGradient &&
      field.coords[0] == field.coords[1]) {
    throw config_error("illuminant field: gradient endpoints coincide");
  }
}

inline Vec3 field_gain(const IlluminantField& field, const PixelCoord& p) {
  const size_t want = field.kind == IlluminantField::Kind::kUniform ? 1 : 2;
  if (field.gains.size() != want ||
      field.coords.size() != (field.kind == IlluminantField::Kind::kUniform ? 0 : 2)) {
    throw config_error("illuminant field: malformed gain/coordinate lists");
  }
  switch (field.kind) {
    case IlluminantField::Kind::kUniform:
      return field.gains[0];
    case IlluminantField::Kind::kTwoSourceBlend: {
      double k[2];
      inverse_distance_weights(p, field.coords, k);
      const Vec3& ga = field.gains[0];
      const Vec3& gb = field.gains[1];
      return {1.0 / (k[0] / ga.x + k[1] / gb.x), 1.0 / (k[0] / ga.y + k[1] / gb.y),
              1.0 / (k[0] / ga.z + k[1] / gb.z)};
    }
    case IlluminantField::Kind::kLinearGradient: {
      const Vec3 axis{field.coords[1].x - field.coords[0].x,
                      field.coords[1].y - field.coords[0].y, 0.0};
      const Vec3 rel{p.x - field.coords[0].x, p.y - field.coords[0].y, 0.0};
      double t = dot(rel, axis) / dot(axis, axis);
      t = std::min(1.0, std::max(0.0, t));
      return (1.0 - t) * field.gains[0] + t * field.gains[1];
    }
  }
  throw config_error("illuminant field: unknown kind");
}

struct ChartPatchDef {
  std::string label;
  RegionOfInterest roi;
  Tristimulus color;  // ground-truth XYZ before exposure scaling
  bool is_black = false;
  bool is_white = false;
};

struct ChartDefinition {
  int width = 0;
  int height = 0;
  Tristimulus background;
  std::vector<ChartPatchDef> patches;

  ChartLayout layout() const {
    ChartLayout l;
    for (const auto& p : patches) l.patches.push_back({p.label, p.roi, p.is_black});
    return l;
  }

  std::vector<PixelCoord> white_centers() const {
    std::vector<PixelCoord> centers;
    for (const auto& p : patches) {
      if (p.is_white) centers.push_back(p.roi.center());
    }
    return centers;
  }
};

namespace detail {

struct NamedSrgb {
  const char* label;
  double r, g, b;
  bool is_black;
  bool is_white;
};

// 24-patch chart: two white patches at opposite corners (anchor sites), a
// four-step gray ramp down to pure black, and 18 chromatic colors chosen to
// keep the chart's global mean near neutral. Values are encoded sRGB under
// D65; the XYZ forms ship in data/charts/default24.json.
inline constexpr NamedSrgb kDefault24[24] = {
    {"white-1", 0.95, 0.95, 0.95, false, true},
    {"red", 0.70, 0.12, 0.12, false, false},
    {"orange", 0.82, 0.45, 0.10, false, false},
    {"yellow", 0.90, 0.85, 0.15, false, false},
    {"green", 0.15, 0.62, 0.20, false, false},
    {"cyan", 0.10, 0.70, 0.75, false, false},
    {"blue", 0.15, 0.25, 0.75, false, false},
    {"magenta", 0.75, 0.15, 0.70, false, false},
    {"purple", 0.45, 0.18, 0.60, false, false},
    {"pink", 0.95, 0.60, 0.70, false, false},
    {"skin", 0.85, 0.62, 0.48, false, false},
    {"sky", 0.45, 0.68, 0.90, false, false},
    {"foliage", 0.35, 0.50, 0.18, false, false},
    {"teal", 0.10, 0.45, 0.45, false, false},
    {"olive", 0.45, 0.45, 0.15, false, false},
    {"maroon", 0.45, 0.10, 0.15, false, false},
    {"navy", 0.10, 0.12, 0.40, false, false},
    {"brown", 0.48, 0.30, 0.18, false, false},
    {"gray-62", 0.62, 0.62, 0.62, false, false},
    {"gray-42", 0.42, 0.42, 0.42, false, false},
    {"gray-26", 0.26, 0.26, 0.26, false, false},
    {"black", 0.00, 0.00, 0.00, true, false},
    {"lavender", 0.70, 0.65, 0.90, false, false},
    {"white-2", 0.95, 0.95, 0.95, false, true},
};

}  // namespace detail

inline constexpr int kChartRows = 4;
inline constexpr int kChartCols = 6;

// Lays the 24 default patches out on a rows x cols grid with a border margin
// and per-cell padding. Needs at least 48 pixels on the short side so every
// patch stays at least a few pixels wide.
inline ChartDefinition default_chart(int width, int height) {
  if (std::min(width, height) < 48) {
    throw config_error("default_chart: image must be at least 48px on the short side, got " +
                       std::to_string(width) + "x" + std::to_string(height));
  }
  ChartDefinition chart;
  chart.width = width;
  chart.height = height;
  chart.background = srgb_to_linear_xyz(0.50, 0.50, 0.50);

  const int margin = std::max(1, static_cast<int>(std::lround(0.05 * std::min(width, height))));
  const int cell_w = (width - 2 * margin) / kChartCols;
  const int cell_h = (height - 2 * margin) / kChartRows;
  const int pad_x = std::max(1, static_cast<int>(std::lround(0.12 * cell_w)));
  const int pad_y = std::max(1, static_cast<int>(std::lround(0.12 * cell_h)));

  for (int row = 0; row < kChartRows; ++row) {
    for (int col = 0; col < kChartCols; ++col) {
      const auto& def = detail::kDefault24[row * kChartCols + col];
      ChartPatchDef patch;
      patch.label = def.label;
      patch.roi = {margin + col * cell_w + pad_x, margin + row * cell_h + pad_y,
                   cell_w - 2 * pad_x, cell_h - 2 * pad_y};
      patch.color = srgb_to_linear_xyz(def.r, def.g, def.b);
      patch.is_black = def.is_black;
      patch.is_white = def.is_white;
      chart.patches.push_back(patch);
    }
  }
  return chart;
}

struct SyntheticScene {
  LinearImage ground_truth;
  LinearImage observed;
  ChartLayout layout;
  std::vector<WhitePointAnchor> true_anchors;
};

inline constexpr double kDefaultExposure = 0.60;

// Renders the chart under the reference illuminant (ground truth) and under
// the field (observed). observed = diag(field(pixel center)) * ground_truth
// holds exactly by construction. Anchors are taken at white_coords: the
// target is the underlying white patch color, the source is that color seen
// through the field.
inline SyntheticScene render_scene(const ChartDefinition& chart, const IlluminantField& field,
                                   std::span<const PixelCoord> white_coords,
                                   double exposure = kDefaultExposure) {
  validate_field(field);
  if (white_coords.empty()) {
    throw config_error("render_scene: at least one white coordinate is required");
  }
  if (!(exposure > 0.0)) {
    throw config_error("render_scene: exposure must be positive");
  }

  SyntheticScene scene{LinearImage(chart.width, chart.height),
                       LinearImage(chart.width, chart.height), chart.layout(), {}};

  for (auto& px : scene.ground_truth.pixels()) px = exposure * chart.background;
  for (const auto& patch : chart.patches) {
    const Tristimulus value = exposure * patch.color;
    for (int y = patch.roi.y0; y < patch.roi.y0 + patch.roi.height; ++y) {
      auto row = scene.ground_truth.row(y);
      for (int x = patch.roi.x0; x < patch.roi.x0 + patch.roi.width; ++x) row[x] = value;
    }
  }

  for (int y = 0; y < chart.height; ++y) {
    auto gt = scene.ground_truth.row(y);
    auto obs = scene.observed.row(y);
    for (int x = 0; x < chart.width; ++x) {
      obs[x] = hadamard(field_gain(field, pixel_center(x, y)), gt[x]);
    }
  }

  for (size_t i = 0; i < white_coords.size(); ++i) {
    const PixelCoord& coord = white_coords[i];
    const ChartPatchDef* host = nullptr;
    for (const auto& patch : chart.patches) {
      if (patch.is_white && patch.roi.contains(coord)) host = &patch;
    }
    if (host == nullptr) {
      throw config_error("render_scene: white_coords[" + std::to_string(i) + "] = (" +
                         std::to_string(coord.x) + ", " + std::to_string(coord.y) +
                         ") is not inside a white patch");
    }
    const Tristimulus target = exposure * host->color;
    const Tristimulus source = hadamard(field_gain(field, coord), target);
    scene.true_anchors.push_back({source, target, coord});
  }
  return scene;
}

// Scene recipe with everything resolved to concrete numbers; the JSON scene
// spec parses into one of these.
struct SceneSpec {
  int width = 512;
  int height = 512;
  double exposure = kDefaultExposure;
  IlluminantField field;
  std::vector<PixelCoord> white_coords;
};

inline SyntheticScene build_scene(const SceneSpec& spec) {
  const ChartDefinition chart = default_chart(spec.width, spec.height);
  return render_scene(chart, spec.field, spec.white_coords, spec.exposure);
}

inline constexpr Vec3 kWarmGain{1.15, 1.0, 0.75};
inline constexpr Vec3 kCoolGain{0.8, 1.0, 1.25};
inline constexpr Vec3 kUniformGain{1.10, 1.0, 0.85};
inline constexpr Vec3 kShadeGain{0.45, 0.48, 0.62};

// Mixed-illuminant default: warm and cool sources sitting on the two white
// patches at opposite chart corners.
inline SceneSpec mixed_scene_spec(int width = 512, int height = 512) {
  const auto centers = default_chart(width, height).white_centers();
  SceneSpec spec;
  spec.width = width;
  spec.height = height;
  spec.field = IlluminantField::two_source(kWarmGain, centers[0], kCoolGain, centers[1]);
  spec.white_coords = centers;
  return spec;
}

inline SceneSpec uniform_scene_spec(int width = 512, int height = 512) {
  const auto centers = default_chart(width, height).white_centers();
  SceneSpec spec;
  spec.width = width;
  spec.height = height;
  spec.field = IlluminantField::uniform(kUniformGain);
  spec.white_coords = centers;
  return spec;
}

// Shade-like non-uniform default: full illumination at the first white patch
// fading to a dim bluish gain at the opposite corner.
inline SceneSpec gradient_scene_spec(int width = 512, int height = 512) {
  const auto centers = default_chart(width, height).white_centers();
  SceneSpec spec;
  spec.width = width;
  spec.height = height;
  spec.field = IlluminantField::gradient(Vec3{1.0, 1.0, 1.0}, centers[0], kShadeGain, centers[1]);
  spec.white_coords = centers;
  return spec;
}

}  // namespace svwb
