#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "reference.hpp"
#include "svwb/balance.hpp"

using namespace svwb;

TEST_CASE("three independent exact pairs are interpolated exactly") {
  // Independent oracle: with three linearly independent sources the fit is
  // the unique solution of M * S = G, solved here by Gauss-Jordan.
  const std::vector<Tristimulus> sources = {{0.8, 0.1, 0.05}, {0.15, 0.9, 0.1}, {0.05, 0.2, 1.1}};
  const std::vector<Tristimulus> targets = {{0.6, 0.2, 0.1}, {0.3, 0.7, 0.2}, {0.1, 0.1, 0.9}};

  refimpl::M33 s_cols{};
  refimpl::M33 g_cols{};
  for (int i = 0; i < 3; ++i) {
    s_cols[0][i] = sources[static_cast<size_t>(i)].x;
    s_cols[1][i] = sources[static_cast<size_t>(i)].y;
    s_cols[2][i] = sources[static_cast<size_t>(i)].z;
    g_cols[0][i] = targets[static_cast<size_t>(i)].x;
    g_cols[1][i] = targets[static_cast<size_t>(i)].y;
    g_cols[2][i] = targets[static_cast<size_t>(i)].z;
  }
  const refimpl::M33 expected = refimpl::mat_mat(g_cols, refimpl::invert(s_cols));

  const MultiColorFit fit = multicolor_matrix(sources, targets);
  CHECK_FALSE(fit.deficient);
  CHECK(fit.condition_number >= 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(fit.matrix.m[i][j] == Catch::Approx(expected[i][j]).margin(1e-9));
    }
  }
  for (size_t i = 0; i < sources.size(); ++i) {
    const Tristimulus mapped = fit.matrix * sources[i];
    CHECK(std::abs(mapped.x - targets[i].x) < 1e-9);
    CHECK(std::abs(mapped.y - targets[i].y) < 1e-9);
    CHECK(std::abs(mapped.z - targets[i].z) < 1e-9);
  }
}

TEST_CASE("collinear gray sources are flagged deficient") {
  const std::vector<Tristimulus> sources = {0.3 * kD65White, 0.6 * kD65White, 0.9 * kD65White};
  const std::vector<Tristimulus> targets = {0.3 * kD65White, 0.6 * kD65White, 0.9 * kD65White};
  const MultiColorFit fit = multicolor_matrix(sources, targets);
  CHECK(fit.deficient);
  CHECK(fit.condition_number > kDefaultConditionThreshold);
}

TEST_CASE("rank-2 source sets are flagged deficient") {
  // Two distinct whites plus their mean: everything lies in a 2D span.
  const Tristimulus a = hadamard({1.15, 1.0, 0.75}, kD65White);
  const Tristimulus b = hadamard({0.8, 1.0, 1.25}, kD65White);
  const std::vector<Tristimulus> sources = {a, b, 0.5 * (a + b)};
  const std::vector<Tristimulus> targets = {kD65White, kD65White, kD65White};
  const MultiColorFit fit = multicolor_matrix(sources, targets);
  CHECK(fit.deficient);
  // The minimum-norm fallback still maps the span correctly.
  const Tristimulus mapped = fit.matrix * a;
  CHECK(std::abs(mapped.x - kD65White.x) < 1e-6);
  CHECK(std::abs(mapped.y - kD65White.y) < 1e-6);
  CHECK(std::abs(mapped.z - kD65White.z) < 1e-6);
}

TEST_CASE("any collinear source set is deficient") {
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> comp(0.1, 1.2);
  std::uniform_real_distribution<double> scale(0.05, 2.0);
  std::uniform_int_distribution<int> count(3, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 direction{comp(rng), comp(rng), comp(rng)};
    std::vector<Tristimulus> sources, targets;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      sources.push_back(scale(rng) * direction);
      targets.push_back(scale(rng) * kD65White);
    }
    const MultiColorFit fit = multicolor_matrix(sources, targets);
    CHECK(fit.deficient);
    CHECK(fit.condition_number > kDefaultConditionThreshold);
  }
}

TEST_CASE("identical sources and targets give the identity fit") {
  const std::vector<Tristimulus> colors = {{0.8, 0.1, 0.05}, {0.15, 0.9, 0.1},
                                           {0.05, 0.2, 1.1},  {0.4, 0.4, 0.4},
                                           {0.2, 0.5, 0.7}};
  const MultiColorFit fit = multicolor_matrix(colors, colors);
  CHECK_FALSE(fit.deficient);
  CHECK(max_abs_diff(fit.matrix, Mat3::identity()) < 1e-9);
}

TEST_CASE("underdetermined and mismatched inputs are rejected") {
  const std::vector<Tristimulus> two = {{1, 0, 0}, {0, 1, 0}};
  CHECK_THROWS_AS(multicolor_matrix(two, two), config_error);
  const std::vector<Tristimulus> three = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK_THROWS_AS(multicolor_matrix(three, two), config_error);
}

TEST_CASE("overdetermined least squares beats any single-pair guess") {
  // Six pairs generated by a known matrix plus per-pair perturbations: the
  // fit must reproduce the generating matrix better than 1e-2 per entry.
  const Mat3 truth{{{0.9, 0.1, 0.0}, {0.05, 1.1, -0.05}, {0.0, -0.1, 0.95}}};
  std::vector<Tristimulus> sources = {{0.9, 0.2, 0.1}, {0.2, 0.8, 0.15}, {0.1, 0.15, 1.0},
                                      {0.5, 0.5, 0.5}, {0.7, 0.6, 0.2},  {0.25, 0.4, 0.8}};
  std::vector<Tristimulus> targets;
  double wiggle = 1e-3;
  for (const auto& s : sources) {
    targets.push_back(truth * s + Vec3{wiggle, -wiggle, wiggle});
    wiggle = -wiggle;
  }
  const MultiColorFit fit = multicolor_matrix(sources, targets);
  CHECK_FALSE(fit.deficient);
  CHECK(max_abs_diff(fit.matrix, truth) < 1e-2);
}

TEST_CASE("image application uses the fitted matrix even when deficient") {
  const std::vector<Tristimulus> colors = {{0.8, 0.1, 0.05}, {0.15, 0.9, 0.1}, {0.05, 0.2, 1.1}};
  const MultiColorFit identity_fit = multicolor_matrix(colors, colors);
  LinearImage img(3, 2);
  img.at(0, 0) = {0.25, 0.5, 0.75};
  const LinearImage out = correct_image_multicolor(img, identity_fit);
  CHECK(std::abs(out.at(0, 0).x - 0.25) < 1e-9);
  CHECK(std::abs(out.at(0, 0).y - 0.5) < 1e-9);
  CHECK(std::abs(out.at(0, 0).z - 0.75) < 1e-9);
}
