#pragma once

#include <span>
#include <string>
#include <vector>

#include "svwb/error.hpp"
#include "svwb/linalg.hpp"

namespace svwb {

// Continuous image-plane coordinate in pixel units. Sub-pixel positions are
// allowed; pixel (col, row) has its center at (col + 0.5, row + 0.5).
struct PixelCoord {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const PixelCoord& a, const PixelCoord& b) {
    return a.x == b.x && a.y == b.y;
  }
};

constexpr PixelCoord pixel_center(int col, int row) {
  return {static_cast<double>(col) + 0.5, static_cast<double>(row) + 0.5};
}

struct RegionOfInterest {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  constexpr PixelCoord center() const {
    return {x0 + width / 2.0, y0 + height / 2.0};
  }
  constexpr bool contains(const PixelCoord& p) const {
    return p.x >= x0 && p.x < x0 + width && p.y >= y0 && p.y < y0 + height;
  }
};

// Row-major raster of linear-light XYZ triples, stored at double precision.
class LinearImage {
 public:
  LinearImage(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw config_error("LinearImage: dimensions must be at least 1x1, got " +
                         std::to_string(width) + "x" + std::to_string(height));
    }
    data_.resize(static_cast<size_t>(width) * static_cast<size_t>(height));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  size_t pixel_count() const { return data_.size(); }

  Tristimulus& at(int x, int y) { return data_[index(x, y)]; }
  const Tristimulus& at(int x, int y) const { return data_[index(x, y)]; }

  std::span<Tristimulus> row(int y) {
    return {data_.data() + static_cast<size_t>(y) * width_, static_cast<size_t>(width_)};
  }
  std::span<const Tristimulus> row(int y) const {
    return {data_.data() + static_cast<size_t>(y) * width_, static_cast<size_t>(width_)};
  }

  std::span<Tristimulus> pixels() { return data_; }
  std::span<const Tristimulus> pixels() const { return data_; }

  bool in_bounds(const PixelCoord& p) const {
    return p.x >= 0.0 && p.x < width_ && p.y >= 0.0 && p.y < height_;
  }

 private:
  size_t index(int x, int y) const {
    return static_cast<size_t>(y) * width_ + static_cast<size_t>(x);
  }

  int width_;
  int height_;
  std::vector<Tristimulus> data_;
};

inline void validate_roi(const LinearImage& img, const RegionOfInterest& roi,
                         const std::string& what = "roi") {
  if (roi.width < 1 || roi.height < 1 || roi.x0 < 0 || roi.y0 < 0 ||
      roi.x0 + roi.width > img.width() || roi.y0 + roi.height > img.height()) {
    throw config_error(what + ": rectangle [" + std::to_string(roi.x0) + "," +
                       std::to_string(roi.y0) + " " + std::to_string(roi.width) + "x" +
                       std::to_string(roi.height) + "] outside " +
                       std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                       " image");
  }
}

}  // namespace svwb
