#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "svwb/color.hpp"

using namespace svwb;

TEST_CASE("bradford matrix carries the published entries") {
  const Mat3& m = adaptation_model(CatKind::kBradford).matrix;
  CHECK(m[0][0] == 0.8951);
  CHECK(m[0][1] == 0.2664);
  CHECK(m[0][2] == -0.1614);
  CHECK(m[1][0] == -0.7502);
  CHECK(m[1][1] == 1.7135);
  CHECK(m[1][2] == 0.0367);
  CHECK(m[2][0] == 0.0389);
  CHECK(m[2][1] == -0.0685);
  CHECK(m[2][2] == 1.0296);
}

TEST_CASE("xyz-scaling model is exactly the identity") {
  const AdaptationModel& model = adaptation_model(CatKind::kXyzScaling);
  CHECK(max_abs_diff(model.matrix, Mat3::identity()) == 0.0);
  const ConeResponse r = cone_response(model, {0.5, 0.4, 0.3});
  CHECK(r.rho == 0.5);
  CHECK(r.gamma == 0.4);
  CHECK(r.beta == 0.3);
}

TEST_CASE("bradford cone response of D65") {
  // Hand-computed product of the Bradford matrix with (0.95047, 1, 1.08883).
  const ConeResponse r = cone_response(adaptation_model(CatKind::kBradford), kD65White);
  CHECK(r.rho == Catch::Approx(0.9414285350).margin(1e-9));
  CHECK(r.gamma == Catch::Approx(1.0404174670).margin(1e-9));
  CHECK(r.beta == Catch::Approx(1.0895326510).margin(1e-9));
}

TEST_CASE("von kries cone response of D65 is near unity") {
  // Hand-computed product of the Hunt-Pointer-Estevez (D65) matrix with D65.
  const ConeResponse r = cone_response(adaptation_model(CatKind::kVonKries), kD65White);
  CHECK(r.rho == Catch::Approx(1.0000277605).margin(1e-9));
  CHECK(r.gamma == Catch::Approx(0.9999881700).margin(1e-9));
  CHECK(r.beta == Catch::Approx(0.9997854826).margin(1e-9));
}

TEST_CASE("cone response of black is black") {
  for (CatKind kind : {CatKind::kXyzScaling, CatKind::kVonKries, CatKind::kBradford}) {
    const ConeResponse r = cone_response(adaptation_model(kind), {0, 0, 0});
    CHECK(r.rho == 0.0);
    CHECK(r.gamma == 0.0);
    CHECK(r.beta == 0.0);
  }
}

TEST_CASE("every model inverts to machine precision") {
  for (CatKind kind : {CatKind::kXyzScaling, CatKind::kVonKries, CatKind::kBradford}) {
    const AdaptationModel& model = adaptation_model(kind);
    CHECK(max_abs_diff(model.matrix * model.inverse, Mat3::identity()) < 1e-12);
    CHECK(max_abs_diff(model.inverse * model.matrix, Mat3::identity()) < 1e-12);
  }
}

TEST_CASE("inverse basis round-trips arbitrary colors") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> dist(0.0, 1.2);
  for (CatKind kind : {CatKind::kXyzScaling, CatKind::kVonKries, CatKind::kBradford}) {
    const AdaptationModel& model = adaptation_model(kind);
    for (int trial = 0; trial < 300; ++trial) {
      const Vec3 c{dist(rng), dist(rng), dist(rng)};
      const Vec3 back = model.inverse * (model.matrix * c);
      CHECK(std::abs(back.x - c.x) < 1e-10);
      CHECK(std::abs(back.y - c.y) < 1e-10);
      CHECK(std::abs(back.z - c.z) < 1e-10);
    }
  }
}

TEST_CASE("cone response is linear") {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> dist(-1.0, 1.2);
  for (CatKind kind : {CatKind::kXyzScaling, CatKind::kVonKries, CatKind::kBradford}) {
    const AdaptationModel& model = adaptation_model(kind);
    for (int trial = 0; trial < 200; ++trial) {
      const Vec3 c1{dist(rng), dist(rng), dist(rng)};
      const Vec3 c2{dist(rng), dist(rng), dist(rng)};
      const double a = dist(rng), b = dist(rng);
      const ConeResponse lhs = cone_response(model, a * c1 + b * c2);
      const ConeResponse r1 = cone_response(model, c1);
      const ConeResponse r2 = cone_response(model, c2);
      CHECK(std::abs(lhs.rho - (a * r1.rho + b * r2.rho)) < 1e-10);
      CHECK(std::abs(lhs.gamma - (a * r1.gamma + b * r2.gamma)) < 1e-10);
      CHECK(std::abs(lhs.beta - (a * r1.beta + b * r2.beta)) < 1e-10);
    }
  }
}

TEST_CASE("model lookup by name") {
  CHECK(adaptation_model("bradford").kind == CatKind::kBradford);
  CHECK(adaptation_model("von-kries").kind == CatKind::kVonKries);
  CHECK(adaptation_model("xyz-scaling").kind == CatKind::kXyzScaling);
  CHECK_THROWS_AS(adaptation_model("cam16"), config_error);
}

TEST_CASE("named standard whites") {
  CHECK(named_standard_white("D65") == kD65White);
  CHECK(named_standard_white("D50") == kD50White);
  CHECK_THROWS_AS(named_standard_white("E"), config_error);
}
