#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "svwb/balance.hpp"
#include "svwb/color.hpp"
#include "svwb/error.hpp"
#include "svwb/estimate.hpp"
#include "svwb/image.hpp"
#include "svwb/metrics.hpp"
#include "svwb/synth.hpp"

namespace svwb {

using json = nlohmann::json;

namespace detail {

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw config_error(path + ": not valid JSON");
  return j;
}

inline void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw io_error(path + ": short write");
}

inline const json& require(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (j.is_object() && it != j.end()) return *it;
  throw config_error(where + ": missing required field '" + key + "'");
}

inline double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw config_error(where + ": expected a number");
  return j.get<double>();
}

inline Vec3 parse_triple(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw config_error(where + ": expected an array of 3 numbers");
  }
  return {require_number(j[0], where + "[0]"), require_number(j[1], where + "[1]"),
          require_number(j[2], where + "[2]")};
}

inline PixelCoord parse_coord(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw config_error(where + ": expected an array of 2 numbers");
  }
  return {require_number(j[0], where + "[0]"), require_number(j[1], where + "[1]")};
}

inline RegionOfInterest parse_roi(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) {
    throw config_error(where + ": expected [x0, y0, width, height]");
  }
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_number_integer()) {
      throw config_error(where + "[" + std::to_string(i) + "]: expected an integer");
    }
  }
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Anchor configuration
//
// {
//   "model": "bradford",                          // optional, default bradford
//   "anchors": [
//     {"source": {"xyz": [x,y,z]} | {"roi": [x0,y0,w,h]},
//      "target": {"xyz": [x,y,z]} | {"white": "D65"},   // optional, default D65
//      "coord":  [x, y] | "roi-center"}
//   ]
// }
// ---------------------------------------------------------------------------

struct AnchorConfig {
  const AdaptationModel* model = nullptr;
  std::vector<WhitePointAnchor> anchors;
};

namespace detail {

// Runs a JSON parser body, turning nlohmann type errors into structured
// config errors so parsing stays total.
template <typename Fn>
auto parse_guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

// Resolves an anchor config against the image it will correct: roi sources
// become region means, "roi-center" coordinates become the roi's center.
inline AnchorConfig anchor_config_from_json(const json& j, const LinearImage& img) {
  return detail::parse_guarded("anchor config", [&] {
    AnchorConfig config;
    const std::string model_name = j.contains("model") ? j.at("model").get<std::string>()
                                                       : std::string("bradford");
    config.model = &adaptation_model(model_name);

    const json& anchors = detail::require(j, "anchors", "anchor config");
    if (!anchors.is_array() || anchors.empty()) {
      throw config_error("anchor config: 'anchors' must be a non-empty array");
    }
    for (size_t i = 0; i < anchors.size(); ++i) {
      const std::string where = "anchors[" + std::to_string(i) + "]";
      const json& a = anchors[i];
      WhitePointAnchor anchor;

      const json& source = detail::require(a, "source", where);
      std::optional<RegionOfInterest> source_roi;
      if (source.contains("xyz")) {
        anchor.source = detail::parse_triple(source.at("xyz"), where + ".source.xyz");
      } else if (source.contains("roi")) {
        source_roi = detail::parse_roi(source.at("roi"), where + ".source.roi");
        validate_roi(img, *source_roi, where + ".source.roi");
        anchor.source = region_mean(img, *source_roi);
      } else {
        throw config_error(where + ".source: expected either 'xyz' or 'roi'");
      }

      if (a.contains("target")) {
        const json& target = a.at("target");
        if (target.contains("xyz")) {
          anchor.target = detail::parse_triple(target.at("xyz"), where + ".target.xyz");
        } else if (target.contains("white")) {
          anchor.target = named_standard_white(target.at("white").get<std::string>());
        } else {
          throw config_error(where + ".target: expected either 'xyz' or 'white'");
        }
      } else {
        anchor.target = kD65White;
      }

      const json& coord = detail::require(a, "coord", where);
      if (coord.is_string() && coord.get<std::string>() == "roi-center") {
        if (!source_roi) {
          throw config_error(where + ".coord: 'roi-center' requires a roi source");
        }
        anchor.coord = source_roi->center();
      } else {
        anchor.coord = detail::parse_coord(coord, where + ".coord");
      }
      if (!img.in_bounds(anchor.coord)) {
        throw config_error(where + ".coord: outside the image bounds");
      }
      config.anchors.push_back(anchor);
    }

    std::vector<PixelCoord> coords;
    for (const auto& a : config.anchors) coords.push_back(a.coord);
    detail::validate_anchor_coords(coords);
    return config;
  });
}

inline AnchorConfig load_anchor_config(const std::string& path, const LinearImage& img) {
  try {
    return anchor_config_from_json(detail::load_json_file(path), img);
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

inline json anchor_config_to_json(const std::string& model_name,
                                  std::span<const WhitePointAnchor> anchors) {
  json j;
  j["model"] = model_name;
  j["anchors"] = json::array();
  for (const auto& a : anchors) {
    j["anchors"].push_back({{"source", {{"xyz", {a.source.x, a.source.y, a.source.z}}}},
                            {"target", {{"xyz", {a.target.x, a.target.y, a.target.z}}}},
                            {"coord", {a.coord.x, a.coord.y}}});
  }
  return j;
}

// ---------------------------------------------------------------------------
// Chart layout
//
// {"patches": [{"label": "...", "roi": [x0,y0,w,h], "is_black": false}]}
// ---------------------------------------------------------------------------

inline ChartLayout layout_from_json(const json& j) {
  return detail::parse_guarded("chart layout", [&] {
      ChartLayout layout;
      const json& patches = detail::require(j, "patches", "chart layout");
      if (!patches.is_array()) throw config_error("chart layout: 'patches' must be an array");
      for (size_t i = 0; i < patches.size(); ++i) {
        const std::string where = "patches[" + std::to_string(i) + "]";
        const json& p = patches[i];
        ChartPatch patch;
        patch.label = detail::require(p, "label", where).get<std::string>();
        patch.roi = detail::parse_roi(detail::require(p, "roi", where), where + ".roi");
        patch.is_black = p.value("is_black", false);
        layout.patches.push_back(patch);
      }
      validate_layout(layout);
      return layout;
  });
}

inline json layout_to_json(const ChartLayout& layout) {
  json patches = json::array();
  for (const auto& p : layout.patches) {
    patches.push_back({{"label", p.label},
                       {"roi", {p.roi.x0, p.roi.y0, p.roi.width, p.roi.height}},
                       {"is_black", p.is_black}});
  }
  return json{{"patches", patches}};
}

inline ChartLayout load_layout(const std::string& path) {
  try {
    return layout_from_json(detail::load_json_file(path));
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Scene specification
//
// {
//   "width": 512, "height": 512,
//   "exposure": 0.6,                               // optional
//   "chart": "default24",                          // optional
//   "field": {"kind": "uniform" | "two-source-blend" | "linear-gradient",
//             "gains": [[r,g,b], ...],
//             "coords": [[x,y], ...] | "white-patch-centers"},
//   "white_coords": [[x,y], ...] | "white-patch-centers"   // optional
// }
// ---------------------------------------------------------------------------

inline SceneSpec scene_spec_from_json(const json& j) {
  return detail::parse_guarded("scene spec", [&] {
    SceneSpec spec;
    spec.width = static_cast<int>(detail::require_number(detail::require(j, "width", "scene spec"),
                                                         "scene spec.width"));
    spec.height = static_cast<int>(detail::require_number(
        detail::require(j, "height", "scene spec"), "scene spec.height"));
    if (j.contains("exposure")) {
      spec.exposure = detail::require_number(j.at("exposure"), "scene spec.exposure");
    }
    const std::string chart = j.value("chart", "default24");
    if (chart != "default24") {
      throw config_error("scene spec.chart: unknown chart '" + chart +
                         "' (only default24 is available)");
    }
    const std::vector<PixelCoord> centers = default_chart(spec.width, spec.height).white_centers();

    auto parse_coord_list = [&](const json& c, const std::string& where) {
      std::vector<PixelCoord> coords;
      if (c.is_string()) {
        if (c.get<std::string>() != "white-patch-centers") {
          throw config_error(where + ": expected coordinate pairs or \"white-patch-centers\"");
        }
        coords = centers;
      } else if (c.is_array()) {
        for (size_t i = 0; i < c.size(); ++i) {
          coords.push_back(detail::parse_coord(c[i], where + "[" + std::to_string(i) + "]"));
        }
      } else {
        throw config_error(where + ": expected coordinate pairs or \"white-patch-centers\"");
      }
      return coords;
    };

    const json& field = detail::require(j, "field", "scene spec");
    const std::string kind = detail::require(field, "kind", "scene spec.field").get<std::string>();
    if (kind == "uniform") {
      spec.field.kind = IlluminantField::Kind::kUniform;
    } else if (kind == "two-source-blend") {
      spec.field.kind = IlluminantField::Kind::kTwoSourceBlend;
    } else if (kind == "linear-gradient") {
      spec.field.kind = IlluminantField::Kind::kLinearGradient;
    } else {
      throw config_error("scene spec.field.kind: unknown kind '" + kind + "'");
    }
    const json& gains = detail::require(field, "gains", "scene spec.field");
    if (!gains.is_array()) throw config_error("scene spec.field.gains: expected an array");
    for (size_t i = 0; i < gains.size(); ++i) {
      spec.field.gains.push_back(
          detail::parse_triple(gains[i], "scene spec.field.gains[" + std::to_string(i) + "]"));
    }
    if (field.contains("coords")) {
      spec.field.coords = parse_coord_list(field.at("coords"), "scene spec.field.coords");
    }
    validate_field(spec.field);

    if (j.contains("white_coords")) {
      spec.white_coords = parse_coord_list(j.at("white_coords"), "scene spec.white_coords");
    } else {
      spec.white_coords = centers;
    }
    return spec;
  });
}

inline SceneSpec load_scene_spec(const std::string& path) {
  try {
    return scene_spec_from_json(detail::load_json_file(path));
  } catch (const config_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

inline json scene_spec_to_json(const SceneSpec& spec) {
  json field;
  switch (spec.field.kind) {
    case IlluminantField::Kind::kUniform: field["kind"] = "uniform"; break;
    case IlluminantField::Kind::kTwoSourceBlend: field["kind"] = "two-source-blend"; break;
    case IlluminantField::Kind::kLinearGradient: field["kind"] = "linear-gradient"; break;
  }
  field["gains"] = json::array();
  for (const auto& g : spec.field.gains) field["gains"].push_back({g.x, g.y, g.z});
  if (!spec.field.coords.empty()) {
    field["coords"] = json::array();
    for (const auto& c : spec.field.coords) field["coords"].push_back({c.x, c.y});
  }
  json j{{"width", spec.width},
         {"height", spec.height},
         {"exposure", spec.exposure},
         {"chart", "default24"},
         {"field", field}};
  j["white_coords"] = json::array();
  for (const auto& c : spec.white_coords) j["white_coords"].push_back({c.x, c.y});
  return j;
}

// ---------------------------------------------------------------------------
// Error report
// ---------------------------------------------------------------------------

inline json report_to_json(const ErrorReport& report) {
  json patches = json::array();
  for (const auto& p : report.per_patch) {
    json entry{{"label", p.label}};
    if (std::isnan(p.error_degrees)) {
      entry["error_degrees"] = nullptr;
    } else {
      entry["error_degrees"] = p.error_degrees;
    }
    patches.push_back(entry);
  }
  json excluded = json::array();
  for (const auto& ex : report.excluded) {
    excluded.push_back({{"label", ex.label}, {"reason", ex.reason}});
  }
  return json{{"patches", patches},
              {"mean", report.mean_degrees},
              {"std", report.std_degrees},
              {"excluded", excluded}};
}

// Reference document for the built-in chart: labels, grid positions, sRGB
// definitions and the XYZ values they decode to.
inline json default_chart_reference_json() {
  json patches = json::array();
  for (int row = 0; row < kChartRows; ++row) {
    for (int col = 0; col < kChartCols; ++col) {
      const auto& def = detail::kDefault24[row * kChartCols + col];
      const Tristimulus xyz = srgb_to_linear_xyz(def.r, def.g, def.b);
      patches.push_back({{"label", def.label},
                         {"grid", {row, col}},
                         {"srgb", {def.r, def.g, def.b}},
                         {"xyz", {xyz.x, xyz.y, xyz.z}},
                         {"is_black", def.is_black},
                         {"is_white", def.is_white}});
    }
  }
  return json{{"name", "default24"}, {"rows", kChartRows}, {"cols", kChartCols},
              {"patches", patches}};
}

}  // namespace svwb
