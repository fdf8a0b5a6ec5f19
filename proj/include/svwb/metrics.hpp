#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "svwb/error.hpp"
#include "svwb/estimate.hpp"
#include "svwb/image.hpp"
#include "svwb/linalg.hpp"
#include "svwb/srgb.hpp"

namespace svwb {

inline constexpr double kPi = 3.14159265358979323846;

// Reproduction angular error in degrees: the angle between the two color
// vectors, arccos of the (clamped) normalized dot product. Evaluated through
// the half-angle form 2*atan2(|u - v|, |u + v|) on unit vectors, which is
// algebraically the same but stays exact at 0 degrees and never leaves
// [0, 180] for near-parallel inputs.
inline double reproduction_error_degrees(const Tristimulus& p, const Tristimulus& q) {
  const double np = norm(p);
  const double nq = norm(q);
  if (!(np > 0.0) || !(nq > 0.0)) {
    throw numeric_error("reproduction_error: zero-norm color vector, angle undefined");
  }
  const Vec3 u = p / np;
  const Vec3 v = q / nq;
  const double radians = 2.0 * std::atan2(norm(u - v), norm(u + v));
  return radians * 180.0 / kPi;
}

struct ChartPatch {
  std::string label;
  RegionOfInterest roi;
  bool is_black = false;
};

struct ChartLayout {
  std::vector<ChartPatch> patches;
};

inline void validate_layout(const ChartLayout& layout) {
  if (layout.patches.empty()) {
    throw config_error("chart layout: no patches");
  }
  bool any_measurable = false;
  for (const auto& p : layout.patches) {
    if (!p.is_black) any_measurable = true;
    if (p.roi.width < 1 || p.roi.height < 1) {
      throw config_error("chart layout: patch '" + p.label + "' has an empty roi");
    }
  }
  if (!any_measurable) {
    throw config_error("chart layout: every patch is flagged black, nothing to evaluate");
  }
  for (size_t i = 0; i < layout.patches.size(); ++i) {
    for (size_t j = i + 1; j < layout.patches.size(); ++j) {
      if (layout.patches[i].label == layout.patches[j].label) {
        throw config_error("chart layout: duplicate patch label '" + layout.patches[i].label +
                           "'");
      }
      const auto& a = layout.patches[i].roi;
      const auto& b = layout.patches[j].roi;
      const bool disjoint = a.x0 + a.width <= b.x0 || b.x0 + b.width <= a.x0 ||
                            a.y0 + a.height <= b.y0 || b.y0 + b.height <= a.y0;
      if (!disjoint) {
        throw config_error("chart layout: patches '" + layout.patches[i].label + "' and '" +
                           layout.patches[j].label + "' overlap");
      }
    }
  }
}

struct PatchError {
  std::string label;
  // NaN when the angle was not computable (zero-norm patch mean).
  double error_degrees = std::numeric_limits<double>::quiet_NaN();
};

struct Exclusion {
  std::string label;
  std::string reason;  // "black" or "zero-norm"
};

struct ErrorReport {
  std::vector<PatchError> per_patch;
  double mean_degrees = 0.0;
  double std_degrees = 0.0;  // population standard deviation over included patches
  std::vector<Exclusion> excluded;
};

// Per-patch reproduction error between the mean colors of `adjusted` and
// `reference`. Patches flagged black are reported but never enter the
// mean/std; so does any patch whose mean color has no direction.
inline ErrorReport evaluate_chart(const LinearImage& adjusted, const LinearImage& reference,
                                  const ChartLayout& layout) {
  if (adjusted.width() != reference.width() || adjusted.height() != reference.height()) {
    throw config_error("evaluate_chart: image shapes differ, " +
                       std::to_string(adjusted.width()) + "x" + std::to_string(adjusted.height()) +
                       " vs " + std::to_string(reference.width()) + "x" +
                       std::to_string(reference.height()));
  }
  validate_layout(layout);
  for (const auto& p : layout.patches) validate_roi(adjusted, p.roi, "patch '" + p.label + "'");

  ErrorReport report;
  std::vector<double> included;
  for (const auto& patch : layout.patches) {
    const Tristimulus p = region_mean(adjusted, patch.roi);
    const Tristimulus q = region_mean(reference, patch.roi);
    PatchError entry{patch.label, std::numeric_limits<double>::quiet_NaN()};
    bool computable = norm(p) > 0.0 && norm(q) > 0.0;
    if (computable) entry.error_degrees = reproduction_error_degrees(p, q);
    report.per_patch.push_back(entry);
    if (patch.is_black) {
      report.excluded.push_back({patch.label, "black"});
    } else if (!computable) {
      report.excluded.push_back({patch.label, "zero-norm"});
    } else {
      included.push_back(entry.error_degrees);
    }
  }
  if (included.empty()) {
    throw numeric_error("evaluate_chart: every patch was excluded, mean/std undefined");
  }
  double sum = 0.0;
  for (double e : included) sum += e;
  report.mean_degrees = sum / static_cast<double>(included.size());
  double var = 0.0;
  for (double e : included) {
    const double d = e - report.mean_degrees;
    var += d * d;
  }
  report.std_degrees = std::sqrt(var / static_cast<double>(included.size()));
  return report;
}

// Heat-map ramp: piecewise-linear in linear sRGB through
// blue (0,0,1) -> cyan (0,1,1) -> yellow (1,1,0) -> red (1,0,0)
// at t = 0, 1/3, 2/3, 1 with t = error / scale_max clamped to [0, 1].
inline Tristimulus heatmap_color(double error_degrees, double scale_max_degrees) {
  static constexpr Vec3 kStops[4] = {{0, 0, 1}, {0, 1, 1}, {1, 1, 0}, {1, 0, 0}};
  double t = error_degrees / scale_max_degrees;
  t = std::min(1.0, std::max(0.0, t));
  const double pos = t * 3.0;
  const int seg = std::min(2, static_cast<int>(pos));
  const double f = pos - seg;
  const Vec3 rgb = (1.0 - f) * kStops[seg] + f * kStops[seg + 1];
  return kSrgbToXyzMatrix * rgb;
}

inline constexpr double kDefaultHeatmapScaleMax = 10.0;

// Renders the report as a patch-filled map: ramp color per evaluated patch,
// mid gray for excluded ones, white background. Dimensions default to the
// tight bounding box of the layout.
inline LinearImage heatmap(const ErrorReport& report, const ChartLayout& layout,
                           double scale_max_degrees = kDefaultHeatmapScaleMax, int width = 0,
                           int height = 0) {
  if (!(scale_max_degrees > 0.0)) {
    throw config_error("heatmap: scale_max_degrees must be positive");
  }
  if (report.per_patch.size() != layout.patches.size()) {
    throw config_error("heatmap: report and layout patch counts differ");
  }
  if (width == 0 || height == 0) {
    for (const auto& p : layout.patches) {
      width = std::max(width, p.roi.x0 + p.roi.width);
      height = std::max(height, p.roi.y0 + p.roi.height);
    }
  }
  const Tristimulus background = kSrgbToXyzMatrix * Vec3{1.0, 1.0, 1.0};
  const Tristimulus gray = kSrgbToXyzMatrix * Vec3{0.4, 0.4, 0.4};
  LinearImage map(width, height);
  for (auto& px : map.pixels()) px = background;
  for (size_t i = 0; i < layout.patches.size(); ++i) {
    const auto& patch = layout.patches[i];
    bool is_excluded = false;
    for (const auto& ex : report.excluded) {
      if (ex.label == patch.label) is_excluded = true;
    }
    const double err = report.per_patch[i].error_degrees;
    const Tristimulus fill =
        (is_excluded || std::isnan(err)) ? gray : heatmap_color(err, scale_max_degrees);
    for (int y = patch.roi.y0; y < patch.roi.y0 + patch.roi.height && y < height; ++y) {
      for (int x = patch.roi.x0; x < patch.roi.x0 + patch.roi.width && x < width; ++x) {
        if (x >= 0 && y >= 0) map.at(x, y) = fill;
      }
    }
  }
  return map;
}

// Line-oriented text form, deterministic for identical reports.
inline std::string report_to_text(const ErrorReport& report) {
  std::string out;
  char buf[160];
  for (const auto& p : report.per_patch) {
    if (std::isnan(p.error_degrees)) {
      std::snprintf(buf, sizeof buf, "patch %s n/a\n", p.label.c_str());
    } else {
      std::snprintf(buf, sizeof buf, "patch %s %.6f\n", p.label.c_str(), p.error_degrees);
    }
    out += buf;
  }
  for (const auto& ex : report.excluded) {
    std::snprintf(buf, sizeof buf, "excluded %s reason=%s\n", ex.label.c_str(),
                  ex.reason.c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "mean %.6f\nstd %.6f\n", report.mean_degrees,
                report.std_degrees);
  out += buf;
  return out;
}

}  // namespace svwb
