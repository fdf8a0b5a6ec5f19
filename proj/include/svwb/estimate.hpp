#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "svwb/error.hpp"
#include "svwb/image.hpp"
#include "svwb/linalg.hpp"

namespace svwb {

// Component-wise arithmetic mean over a pixel rectangle.
inline Tristimulus region_mean(const LinearImage& img, const RegionOfInterest& roi) {
  validate_roi(img, roi);
  Vec3 sum;
  for (int y = roi.y0; y < roi.y0 + roi.height; ++y) {
    auto row = img.row(y);
    for (int x = roi.x0; x < roi.x0 + roi.width; ++x) sum = sum + row[x];
  }
  return sum / (static_cast<double>(roi.width) * static_cast<double>(roi.height));
}

namespace detail {

inline Tristimulus y_normalized(const Tristimulus& c, const char* estimator) {
  if (!(c.y > 0.0)) {
    throw numeric_error(std::string(estimator) +
                        ": degenerate estimate, luminance is not positive (image all black?)");
  }
  return c / c.y;
}

}  // namespace detail

// Gray-World estimate: the global mean color, normalized to Y = 1. Only the
// chromaticity of the estimate is meaningful.
inline Tristimulus estimate_gray_world(const LinearImage& img) {
  Vec3 sum;
  for (const auto& p : img.pixels()) sum = sum + p;
  return detail::y_normalized(sum / static_cast<double>(img.pixel_count()),
                              "estimate_gray_world");
}

// Max-RGB estimate: per-channel upper percentile, normalized to Y = 1.
// The default 99.9th percentile sidesteps isolated hot pixels; pass
// percentile = 100 for the textbook per-channel maximum.
inline Tristimulus estimate_max_rgb(const LinearImage& img, double percentile = 99.9) {
  if (!(percentile > 0.0 && percentile <= 100.0)) {
    throw config_error("estimate_max_rgb: percentile must be in (0, 100], got " +
                       std::to_string(percentile));
  }
  const size_t n = img.pixel_count();
  size_t idx = 0;
  if (percentile >= 100.0) {
    idx = n - 1;
  } else {
    const double rank = std::ceil(percentile / 100.0 * static_cast<double>(n));
    idx = static_cast<size_t>(std::max(rank, 1.0)) - 1;
    idx = std::min(idx, n - 1);
  }
  std::vector<double> channel(n);
  Vec3 est;
  double* out[3] = {&est.x, &est.y, &est.z};
  for (int c = 0; c < 3; ++c) {
    auto pixels = img.pixels();
    for (size_t i = 0; i < n; ++i) channel[i] = pixels[i][c];
    std::nth_element(channel.begin(), channel.begin() + static_cast<ptrdiff_t>(idx),
                     channel.end());
    *out[c] = channel[idx];
  }
  return detail::y_normalized(est, "estimate_max_rgb");
}

}  // namespace svwb
