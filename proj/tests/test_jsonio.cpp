#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>

#include "svwb/estimate.hpp"
#include "svwb/jsonio.hpp"

using namespace svwb;

namespace {

LinearImage gradient_image(int w, int h) {
  LinearImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.at(x, y) = {0.1 + 0.01 * x, 0.2 + 0.01 * y, 0.3};
  return img;
}

}  // namespace

TEST_CASE("anchor config with explicit values round-trips exactly") {
  const LinearImage img = gradient_image(32, 32);
  const json j = {
      {"model", "von-kries"},
      {"anchors",
       {{{"source", {{"xyz", {1.05, 1.0, 0.8}}}},
         {"target", {{"xyz", {0.95047, 1.0, 1.08883}}}},
         {"coord", {4.5, 6.5}}},
        {{"source", {{"xyz", {0.9, 1.0, 1.2}}}},
         {"target", {{"white", "D50"}}},
         {"coord", {20.0, 21.0}}}}}};
  const AnchorConfig config = anchor_config_from_json(j, img);
  CHECK(config.model->kind == CatKind::kVonKries);
  REQUIRE(config.anchors.size() == 2);
  CHECK(config.anchors[0].source == Tristimulus{1.05, 1.0, 0.8});
  CHECK(config.anchors[0].target == Tristimulus{0.95047, 1.0, 1.08883});
  CHECK(config.anchors[0].coord == PixelCoord{4.5, 6.5});
  CHECK(config.anchors[1].target == kD50White);
}

TEST_CASE("roi sources resolve through region_mean") {
  const LinearImage img = gradient_image(32, 32);
  const json j = {{"anchors",
                   {{{"source", {{"roi", {2, 3, 4, 5}}}}, {"coord", "roi-center"}}}}};
  const AnchorConfig config = anchor_config_from_json(j, img);
  REQUIRE(config.anchors.size() == 1);
  CHECK(config.model->kind == CatKind::kBradford);  // default model
  const Tristimulus direct = region_mean(img, {2, 3, 4, 5});
  CHECK(config.anchors[0].source == direct);
  CHECK(config.anchors[0].coord == PixelCoord{4.0, 5.5});
  CHECK(config.anchors[0].target == kD65White);  // default target
}

TEST_CASE("anchor config schema violations name the offending field") {
  const LinearImage img = gradient_image(16, 16);
  auto expect_error_mentioning = [&](const json& j, const std::string& needle) {
    try {
      anchor_config_from_json(j, img);
      FAIL("expected config_error for " + needle);
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error_mentioning(json{{"anchors", json::array()}}, "anchors");
  expect_error_mentioning(json{{"anchors", {{{"coord", {1.0, 1.0}}}}}}, "source");
  expect_error_mentioning(
      json{{"anchors", {{{"source", {{"xyz", {1, 1}}}}, {"coord", {1.0, 1.0}}}}}},
      "source.xyz");
  expect_error_mentioning(
      json{{"anchors",
            {{{"source", {{"xyz", {1, 1, 1}}}}, {"coord", "roi-center"}}}}},
      "roi-center");
  expect_error_mentioning(
      json{{"anchors",
            {{{"source", {{"roi", {0, 0, 40, 4}}}}, {"coord", "roi-center"}}}}},
      "roi");
  expect_error_mentioning(
      json{{"anchors",
            {{{"source", {{"xyz", {1, 1, 1}}}}, {"coord", {99.0, 2.0}}}}}},
      "coord");
}

TEST_CASE("wrong JSON types become config errors, not crashes") {
  const LinearImage img = gradient_image(16, 16);
  // model must be a string
  CHECK_THROWS_AS(
      anchor_config_from_json(
          json{{"model", 7},
               {"anchors", {{{"source", {{"xyz", {1, 1, 1}}}}, {"coord", {1.0, 1.0}}}}}},
          img),
      config_error);
  // label must be a string
  CHECK_THROWS_AS(layout_from_json(json{{"patches", {{{"label", 3}, {"roi", {0, 0, 2, 2}}}}}}),
                  config_error);
  // gains must be numbers
  CHECK_THROWS_AS(
      scene_spec_from_json(json{{"width", 96},
                                {"height", 96},
                                {"field", {{"kind", "uniform"}, {"gains", {{"a", "b", "c"}}}}}}),
      config_error);
  // top-level must be an object
  CHECK_THROWS_AS(layout_from_json(json::array()), config_error);
}

TEST_CASE("duplicate anchor coordinates are rejected at parse time") {
  const LinearImage img = gradient_image(16, 16);
  const json j = {{"anchors",
                   {{{"source", {{"xyz", {1.0, 1.0, 1.0}}}}, {"coord", {3.0, 3.0}}},
                    {{"source", {{"xyz", {0.9, 1.0, 1.1}}}}, {"coord", {3.0, 3.0}}}}}};
  CHECK_THROWS_AS(anchor_config_from_json(j, img), config_error);
}

TEST_CASE("anchor config file round trip") {
  const LinearImage img = gradient_image(16, 16);
  std::vector<WhitePointAnchor> anchors = {{{1.1, 1.0, 0.7}, kD65White, {2.5, 3.5}},
                                           {{0.8, 1.0, 1.3}, kD65White, {12.0, 13.0}}};
  const json j = anchor_config_to_json("bradford", anchors);
  const AnchorConfig parsed = anchor_config_from_json(j, img);
  REQUIRE(parsed.anchors.size() == 2);
  CHECK(parsed.anchors[0].source == anchors[0].source);
  CHECK(parsed.anchors[1].coord == anchors[1].coord);
  CHECK(parsed.model->kind == CatKind::kBradford);
}

TEST_CASE("layout json round trip and validation") {
  ChartLayout layout;
  layout.patches.push_back({"a", {0, 0, 4, 4}, false});
  layout.patches.push_back({"k", {4, 0, 4, 4}, true});
  const json j = layout_to_json(layout);
  const ChartLayout back = layout_from_json(j);
  REQUIRE(back.patches.size() == 2);
  CHECK(back.patches[0].label == "a");
  CHECK(back.patches[1].is_black);
  CHECK(back.patches[1].roi.x0 == 4);

  json overlap = j;
  overlap["patches"][1]["roi"] = {1, 1, 4, 4};
  CHECK_THROWS_AS(layout_from_json(overlap), config_error);

  json missing = j;
  missing["patches"][0].erase("roi");
  CHECK_THROWS_AS(layout_from_json(missing), config_error);
}

TEST_CASE("scene spec parsing resolves white patch centers") {
  const json j = {{"width", 128},
                  {"height", 128},
                  {"field",
                   {{"kind", "two-source-blend"},
                    {"gains", {{1.15, 1.0, 0.75}, {0.8, 1.0, 1.25}}},
                    {"coords", "white-patch-centers"}}},
                  {"white_coords", "white-patch-centers"}};
  const SceneSpec spec = scene_spec_from_json(j);
  CHECK(spec.width == 128);
  CHECK(spec.field.kind == IlluminantField::Kind::kTwoSourceBlend);
  REQUIRE(spec.field.coords.size() == 2);
  const auto centers = default_chart(128, 128).white_centers();
  CHECK(spec.field.coords[0] == centers[0]);
  CHECK(spec.field.coords[1] == centers[1]);
  CHECK(spec.white_coords == centers);
  CHECK(spec.exposure == kDefaultExposure);

  // Round trip through JSON and back preserves the resolved values.
  const SceneSpec again = scene_spec_from_json(scene_spec_to_json(spec));
  CHECK(again.field.coords[1] == spec.field.coords[1]);
  CHECK(again.exposure == spec.exposure);
}

TEST_CASE("scene spec rejects unknown kinds and charts") {
  json j = {{"width", 96},
            {"height", 96},
            {"field", {{"kind", "spotlight"}, {"gains", {{1, 1, 1}}}}}};
  CHECK_THROWS_AS(scene_spec_from_json(j), config_error);
  j["field"]["kind"] = "uniform";
  j["chart"] = "macbeth";
  CHECK_THROWS_AS(scene_spec_from_json(j), config_error);
  j.erase("chart");
  CHECK_NOTHROW(scene_spec_from_json(j));
  j["field"]["gains"] = {{1.0, -0.2, 1.0}};
  CHECK_THROWS_AS(scene_spec_from_json(j), config_error);
}

TEST_CASE("report json carries patches, stats, and exclusions") {
  ErrorReport report;
  report.per_patch = {{"a", 1.25}, {"k", std::numeric_limits<double>::quiet_NaN()}};
  report.mean_degrees = 1.25;
  report.std_degrees = 0.0;
  report.excluded = {{"k", "black"}};
  const json j = report_to_json(report);
  CHECK(j["patches"].size() == 2);
  CHECK(j["patches"][0]["error_degrees"].get<double>() == 1.25);
  CHECK(j["patches"][1]["error_degrees"].is_null());
  CHECK(j["mean"].get<double>() == 1.25);
  CHECK(j["excluded"][0]["reason"] == "black");
}

TEST_CASE("shipped scene specs parse to the built-in defaults") {
  const std::string dir = SVWB_DATA_DIR;
  const SceneSpec mixed = load_scene_spec(dir + "/scenes/mixed.json");
  const SceneSpec builtin = mixed_scene_spec();
  CHECK(mixed.width == builtin.width);
  CHECK(mixed.field.kind == builtin.field.kind);
  REQUIRE(mixed.field.gains.size() == 2);
  CHECK(mixed.field.gains[0] == builtin.field.gains[0]);
  CHECK(mixed.field.coords == builtin.field.coords);
  CHECK(mixed.white_coords == builtin.white_coords);

  const SceneSpec uniform = load_scene_spec(dir + "/scenes/uniform.json");
  CHECK(uniform.field.kind == IlluminantField::Kind::kUniform);
  CHECK(uniform.field.gains[0] == kUniformGain);

  const SceneSpec gradient = load_scene_spec(dir + "/scenes/gradient.json");
  CHECK(gradient.field.kind == IlluminantField::Kind::kLinearGradient);
  CHECK(gradient.field.gains[1] == kShadeGain);
}

TEST_CASE("shipped chart reference matches the built-in chart") {
  const std::string dir = SVWB_DATA_DIR;
  std::ifstream in(dir + "/charts/default24.json");
  REQUIRE(in.good());
  const json shipped = json::parse(in);
  const json builtin = default_chart_reference_json();
  REQUIRE(shipped["patches"].size() == 24);
  CHECK(shipped == builtin);
}
