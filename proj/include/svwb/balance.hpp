#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "svwb/color.hpp"
#include "svwb/error.hpp"
#include "svwb/image.hpp"
#include "svwb/linalg.hpp"

namespace svwb {

// A spatially anchored white-point pair: the white observed under the scene
// illuminant, the white it should map to, and where in the image plane the
// observation was made.
struct WhitePointAnchor {
  Tristimulus source;
  Tristimulus target;
  PixelCoord coord;
};

using CorrectionMatrix = Mat3;
using WeightVector = std::vector<double>;

namespace detail {

inline void require_positive_cones(const ConeResponse& c, const char* which,
                                   const char* model_name) {
  const double v[3] = {c.rho, c.gamma, c.beta};
  static constexpr const char* kComponent[3] = {"rho", "gamma", "beta"};
  for (int i = 0; i < 3; ++i) {
    if (!(v[i] > 0.0)) {
      throw numeric_error(std::string("degenerate white: ") + which + " white has " +
                          kComponent[i] + " = " + std::to_string(v[i]) + " under the " +
                          model_name + " model (must be > 0)");
    }
  }
}

}  // namespace detail

// Correction matrix mapping `source` white onto `target` white: the inverse
// basis change sandwiching a diagonal of cone-response ratios.
inline CorrectionMatrix wb_matrix(const AdaptationModel& model, const Tristimulus& source,
                                  const Tristimulus& target) {
  const ConeResponse s = cone_response(model, source);
  const ConeResponse d = cone_response(model, target);
  detail::require_positive_cones(s, "source", model.name.c_str());
  detail::require_positive_cones(d, "target", model.name.c_str());
  const Mat3 ratios = Mat3::diagonal(d.rho / s.rho, d.gamma / s.gamma, d.beta / s.beta);
  return model.inverse * ratios * model.matrix;
}

inline CorrectionMatrix per_anchor_matrix(const AdaptationModel& model,
                                          const WhitePointAnchor& anchor) {
  return wb_matrix(model, anchor.source, anchor.target);
}

// Inverse-distance weights of `coords` as seen from p. If p coincides with a
// coordinate, that entry gets weight 1 and all others 0 (first match wins).
// No validation; callers check emptiness and duplicates once up front.
inline void inverse_distance_weights(const PixelCoord& p, std::span<const PixelCoord> coords,
                                     std::span<double> out) {
  const size_t n = coords.size();
  double total = 0.0;
  for (size_t m = 0; m < n; ++m) {
    const double dx = coords[m].x - p.x;
    const double dy = coords[m].y - p.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d == 0.0) {
      for (size_t j = 0; j < n; ++j) out[j] = 0.0;
      out[m] = 1.0;
      return;
    }
    out[m] = 1.0 / d;
    total += out[m];
  }
  for (size_t m = 0; m < n; ++m) out[m] /= total;
}

namespace detail {

inline void validate_anchor_coords(std::span<const PixelCoord> coords) {
  if (coords.empty()) {
    throw config_error("anchors: at least one white-point anchor is required");
  }
  for (size_t i = 0; i < coords.size(); ++i) {
    for (size_t j = i + 1; j < coords.size(); ++j) {
      if (coords[i] == coords[j]) {
        throw config_error("anchors: duplicate coordinate (" + std::to_string(coords[i].x) +
                           ", " + std::to_string(coords[i].y) + ") at indices " +
                           std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
}

inline std::vector<PixelCoord> anchor_coords(std::span<const WhitePointAnchor> anchors) {
  std::vector<PixelCoord> coords;
  coords.reserve(anchors.size());
  for (const auto& a : anchors) coords.push_back(a.coord);
  return coords;
}

}  // namespace detail

inline WeightVector weights(const PixelCoord& p, std::span<const WhitePointAnchor> anchors) {
  const std::vector<PixelCoord> coords = detail::anchor_coords(anchors);
  detail::validate_anchor_coords(coords);
  WeightVector k(anchors.size());
  inverse_distance_weights(p, coords, k);
  return k;
}

// The spatially varying correction at p: the convex combination of the
// per-anchor matrices under inverse-distance weights.
inline CorrectionMatrix svwb_matrix(const PixelCoord& p, const AdaptationModel& model,
                                    std::span<const WhitePointAnchor> anchors) {
  const WeightVector k = weights(p, anchors);
  Mat3 blended;
  for (size_t m = 0; m < anchors.size(); ++m) {
    blended = blended + k[m] * per_anchor_matrix(model, anchors[m]);
  }
  return blended;
}

inline Tristimulus correct_pixel(const Tristimulus& p_value, const CorrectionMatrix& matrix) {
  return matrix * p_value;
}

namespace detail {

// Runs fn(row_begin, row_end) over disjoint row ranges. Each row's output
// depends only on its own pixels, so results are identical for any thread
// count.
template <typename Fn>
void for_each_row_range(int height, int threads, Fn&& fn) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (threads > height) threads = height;
  if (threads == 1) {
    fn(0, height);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (height + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(height, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Classic white balancing: one shared matrix applied to every pixel.
inline LinearImage correct_image_wb(const LinearImage& img, const AdaptationModel& model,
                                    const Tristimulus& source, const Tristimulus& target,
                                    int threads = 1) {
  const CorrectionMatrix m = wb_matrix(model, source, target);
  LinearImage out(img.width(), img.height());
  detail::for_each_row_range(img.height(), threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      auto src = img.row(y);
      auto dst = out.row(y);
      for (int x = 0; x < img.width(); ++x) dst[x] = m * src[x];
    }
  });
  return out;
}

// Spatially varying white balancing. The n per-anchor matrices are built
// once; the per-pixel work is n distances, n weights, and one blended 3x3
// apply. Matches the naive reference (rebuild everything per pixel) to
// better than 1e-12 per component.
inline LinearImage correct_image_svwb(const LinearImage& img, const AdaptationModel& model,
                                      std::span<const WhitePointAnchor> anchors,
                                      int threads = 1) {
  const std::vector<PixelCoord> coords = detail::anchor_coords(anchors);
  detail::validate_anchor_coords(coords);
  for (size_t m = 0; m < coords.size(); ++m) {
    if (!img.in_bounds(coords[m])) {
      throw config_error("anchors[" + std::to_string(m) + "].coord: (" +
                         std::to_string(coords[m].x) + ", " + std::to_string(coords[m].y) +
                         ") outside " + std::to_string(img.width()) + "x" +
                         std::to_string(img.height()) + " image");
    }
  }
  const size_t n = anchors.size();
  std::vector<Mat3> matrices;
  matrices.reserve(n);
  for (const auto& a : anchors) matrices.push_back(per_anchor_matrix(model, a));

  LinearImage out(img.width(), img.height());
  detail::for_each_row_range(img.height(), threads, [&](int y0, int y1) {
    std::vector<double> k(n);
    for (int y = y0; y < y1; ++y) {
      auto src = img.row(y);
      auto dst = out.row(y);
      for (int x = 0; x < img.width(); ++x) {
        inverse_distance_weights(pixel_center(x, y), coords, k);
        Mat3 blended;
        for (size_t m = 0; m < n; ++m) {
          const double km = k[m];
          const Mat3& mm = matrices[m];
          for (int r = 0; r < 3; ++r) {
            blended.m[r][0] += km * mm.m[r][0];
            blended.m[r][1] += km * mm.m[r][1];
            blended.m[r][2] += km * mm.m[r][2];
          }
        }
        dst[x] = blended * src[x];
      }
    }
  });
  return out;
}

// Least-squares multi-color fit with rank-deficiency diagnosis.
struct MultiColorFit {
  CorrectionMatrix matrix;
  double condition_number = 1.0;  // of the 3xN source matrix; may be +inf
  bool deficient = false;
};

inline constexpr double kDefaultConditionThreshold = 1e6;

// Fits the single 3x3 matrix minimizing sum ||M*s_i - g_i||^2 via the normal
// equations on the source Gram matrix. When the sources are (near) linearly
// dependent the fit falls back to the minimum-norm solution: eigenmodes of
// the Gram matrix whose implied condition exceeds the threshold are dropped
// instead of amplified.
inline MultiColorFit multicolor_matrix(std::span<const Tristimulus> sources,
                                       std::span<const Tristimulus> targets,
                                       double condition_threshold = kDefaultConditionThreshold) {
  if (sources.size() != targets.size()) {
    throw config_error("multicolor: sources and targets differ in length (" +
                       std::to_string(sources.size()) + " vs " +
                       std::to_string(targets.size()) + ")");
  }
  if (sources.size() < 3) {
    throw config_error("multicolor: underdetermined fit, need at least 3 color pairs, got " +
                       std::to_string(sources.size()));
  }
  Mat3 gram;   // A * A^T where A is the 3xN source matrix
  Mat3 cross;  // B * A^T with B the 3xN target matrix
  for (size_t i = 0; i < sources.size(); ++i) {
    const double s[3] = {sources[i].x, sources[i].y, sources[i].z};
    const double g[3] = {targets[i].x, targets[i].y, targets[i].z};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        gram.m[r][c] += s[r] * s[c];
        cross.m[r][c] += g[r] * s[c];
      }
    }
  }
  const SymEigen3 eig = eigen_sym3(gram);
  double lambda[3];
  for (int i = 0; i < 3; ++i) lambda[i] = std::max(eig.values[i], 0.0);

  MultiColorFit fit;
  const double lambda_cut = lambda[0] / (condition_threshold * condition_threshold);
  if (lambda[0] <= 0.0) {
    fit.condition_number = std::numeric_limits<double>::infinity();
  } else if (lambda[2] <= 0.0) {
    fit.condition_number = std::numeric_limits<double>::infinity();
  } else {
    fit.condition_number = std::sqrt(lambda[0] / lambda[2]);
  }
  fit.deficient = !(fit.condition_number <= condition_threshold);

  // Pseudo-inverse of the Gram matrix with deficient modes zeroed. The
  // strict cut keeps this aligned with the flag: a mode is dropped exactly
  // when keeping it would push the condition number past the threshold.
  Mat3 gram_pinv;
  for (int i = 0; i < 3; ++i) {
    if (lambda[i] <= 0.0 || lambda[i] < lambda_cut) continue;
    const double inv_l = 1.0 / lambda[i];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        gram_pinv.m[r][c] += inv_l * eig.vectors.m[r][i] * eig.vectors.m[c][i];
      }
    }
  }
  fit.matrix = cross * gram_pinv;
  return fit;
}

// Color pairs for a multi-color fit taken from anchor whites. With fewer
// than three anchors the componentwise mean pair is appended so the fit is
// formally determined; the span of the sources, and hence any rank
// deficiency, is unchanged by that padding.
inline void multicolor_pairs_from_anchors(std::span<const WhitePointAnchor> anchors,
                                          std::vector<Tristimulus>& sources,
                                          std::vector<Tristimulus>& targets) {
  if (anchors.size() < 2) {
    throw config_error("multicolor: need at least 2 anchors to build a fitting set, got " +
                       std::to_string(anchors.size()));
  }
  sources.clear();
  targets.clear();
  Vec3 source_mean, target_mean;
  for (const auto& a : anchors) {
    sources.push_back(a.source);
    targets.push_back(a.target);
    source_mean = source_mean + a.source;
    target_mean = target_mean + a.target;
  }
  while (sources.size() < 3) {
    sources.push_back(source_mean / static_cast<double>(anchors.size()));
    targets.push_back(target_mean / static_cast<double>(anchors.size()));
  }
}

inline LinearImage correct_image_multicolor(const LinearImage& img, const MultiColorFit& fit,
                                            int threads = 1) {
  LinearImage out(img.width(), img.height());
  detail::for_each_row_range(img.height(), threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      auto src = img.row(y);
      auto dst = out.row(y);
      for (int x = 0; x < img.width(); ++x) dst[x] = fit.matrix * src[x];
    }
  });
  return out;
}

}  // namespace svwb
