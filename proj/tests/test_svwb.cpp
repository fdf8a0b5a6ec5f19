#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "reference.hpp"
#include "svwb/balance.hpp"

using namespace svwb;

namespace {

LinearImage random_image(int width, int height, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.1);
  LinearImage img(width, height);
  for (auto& px : img.pixels()) px = {dist(rng), dist(rng), dist(rng)};
  return img;
}

std::vector<WhitePointAnchor> random_anchors(int n, int width, int height, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> px(0.0, width - 1e-3);
  std::uniform_real_distribution<double> py(0.0, height - 1e-3);
  std::uniform_real_distribution<double> gain(0.7, 1.3);
  std::vector<WhitePointAnchor> anchors;
  while (static_cast<int>(anchors.size()) < n) {
    const PixelCoord c{px(rng), py(rng)};
    bool dup = false;
    for (const auto& a : anchors) dup = dup || a.coord == c;
    if (dup) continue;
    const Tristimulus source = hadamard({gain(rng), gain(rng), gain(rng)}, kD65White);
    anchors.push_back({source, kD65White, c});
  }
  return anchors;
}

double max_component_diff(const LinearImage& a, const LinearImage& b) {
  double worst = 0.0;
  auto pa = a.pixels();
  auto pb = b.pixels();
  for (size_t i = 0; i < pa.size(); ++i) {
    worst = std::max(worst, std::abs(pa[i].x - pb[i].x));
    worst = std::max(worst, std::abs(pa[i].y - pb[i].y));
    worst = std::max(worst, std::abs(pa[i].z - pb[i].z));
  }
  return worst;
}

}  // namespace

TEST_CASE("all anchors sharing one pair reduce to classic balancing") {
  const Tristimulus warm{1.08, 1.0, 0.82};
  const std::vector<WhitePointAnchor> anchors = {
      {warm, kD65White, {2.0, 3.0}}, {warm, kD65White, {30.0, 8.0}}, {warm, kD65White, {17.0, 29.0}}};
  const AdaptationModel& model = adaptation_model(CatKind::kBradford);

  const Mat3 blended = svwb_matrix({11.0, 23.0}, model, anchors);
  const Mat3 classic = wb_matrix(model, warm, kD65White);
  CHECK(max_abs_diff(blended, classic) < 1e-12);

  const LinearImage img = random_image(32, 32, 99);
  const LinearImage via_svwb = correct_image_svwb(img, model, anchors);
  const LinearImage via_wb = correct_image_wb(img, model, warm, kD65White);
  CHECK(max_component_diff(via_svwb, via_wb) < 1e-12);
}

TEST_CASE("a single anchor reduces to classic balancing") {
  const std::vector<WhitePointAnchor> anchors = {{{0.9, 1.0, 1.2}, kD65White, {5.0, 5.0}}};
  const AdaptationModel& model = adaptation_model(CatKind::kVonKries);
  const LinearImage img = random_image(16, 16, 7);
  const LinearImage via_svwb = correct_image_svwb(img, model, anchors);
  const LinearImage via_wb = correct_image_wb(img, model, anchors[0].source, anchors[0].target);
  CHECK(max_component_diff(via_svwb, via_wb) < 1e-12);
}

TEST_CASE("at an anchor coordinate the blend is that anchor's matrix") {
  const auto anchors = random_anchors(4, 64, 64, 1234);
  const AdaptationModel& model = adaptation_model(CatKind::kBradford);
  for (const auto& a : anchors) {
    const Mat3 blended = svwb_matrix(a.coord, model, anchors);
    const Mat3 own = per_anchor_matrix(model, a);
    CHECK(max_abs_diff(blended, own) == 0.0);
  }
}

TEST_CASE("midway between two anchors the blend is the entrywise mean") {
  const std::vector<WhitePointAnchor> anchors = {
      {{1.1, 1.0, 0.8}, kD65White, {10.0, 10.0}},
      {{0.85, 1.0, 1.2}, kD65White, {50.0, 10.0}}};
  const AdaptationModel& model = adaptation_model(CatKind::kBradford);
  const Mat3 blended = svwb_matrix({30.0, 10.0}, model, anchors);
  const Mat3 mean = 0.5 * per_anchor_matrix(model, anchors[0]) +
                    0.5 * per_anchor_matrix(model, anchors[1]);
  CHECK(max_abs_diff(blended, mean) < 1e-12);
}

TEST_CASE("blended entries stay inside the per-anchor extremes") {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> pos(0.0, 64.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto anchors = random_anchors(3 + trial % 3, 64, 64, 10'000 + trial);
    const AdaptationModel& model = adaptation_model(CatKind::kBradford);
    std::vector<Mat3> mats;
    for (const auto& a : anchors) mats.push_back(per_anchor_matrix(model, a));
    const Mat3 blended = svwb_matrix({pos(rng), pos(rng)}, model, anchors);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double lo = mats[0].m[i][j], hi = mats[0].m[i][j];
        for (const auto& m : mats) {
          lo = std::min(lo, m.m[i][j]);
          hi = std::max(hi, m.m[i][j]);
        }
        CHECK(blended.m[i][j] >= lo - 1e-12);
        CHECK(blended.m[i][j] <= hi + 1e-12);
      }
    }
  }
}

TEST_CASE("optimized image path matches the naive per-pixel reference") {
  for (CatKind kind : {CatKind::kXyzScaling, CatKind::kBradford}) {
    const AdaptationModel& model = adaptation_model(kind);
    for (int n : {1, 2, 5}) {
      for (uint64_t seed = 0; seed < 3; ++seed) {
        const LinearImage img = random_image(64, 64, 900 + seed);
        const auto anchors = random_anchors(n, 64, 64, 7'000 + 10 * seed + n);
        const LinearImage fast = correct_image_svwb(img, model, anchors);
        const LinearImage naive = refimpl::correct_image_svwb(
            img, model, std::vector<WhitePointAnchor>(anchors.begin(), anchors.end()));
        CHECK(max_component_diff(fast, naive) < 1e-12);
      }
    }
  }
}

TEST_CASE("thread count does not change svwb output") {
  const LinearImage img = random_image(64, 48, 31);
  const auto anchors = random_anchors(3, 64, 48, 32);
  const AdaptationModel& model = adaptation_model(CatKind::kBradford);
  const LinearImage one = correct_image_svwb(img, model, anchors, 1);
  const LinearImage four = correct_image_svwb(img, model, anchors, 4);
  const LinearImage dyn = correct_image_svwb(img, model, anchors, 0);
  CHECK(max_component_diff(one, four) == 0.0);
  CHECK(max_component_diff(one, dyn) == 0.0);
}

TEST_CASE("anchors outside the image are rejected") {
  const LinearImage img = random_image(16, 16, 1);
  const std::vector<WhitePointAnchor> anchors = {{kD65White, kD65White, {16.5, 4.0}}};
  CHECK_THROWS_AS(correct_image_svwb(img, adaptation_model(CatKind::kBradford), anchors),
                  config_error);
}
