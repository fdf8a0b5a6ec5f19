// svwb: correct, evaluate, estimate, synthesize, and compare white-balanced
// images from the command line. Exit codes: 0 ok, 2 configuration error,
// 3 i/o error, 4 numeric error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svwb/svwb.hpp"

namespace fs = std::filesystem;
using namespace svwb;

namespace {

struct CorrectOptions {
  std::string input;
  std::string output;
  std::string method = "svwb";
  std::string anchors_path;
  std::string model_override;
  int anchor_index = 0;
  int bit_depth = 16;
  int threads = 1;
  bool linear = false;
  bool json_output = false;
};

struct EvaluateOptions {
  std::string adjusted;
  std::string reference;
  std::string layout_path;
  std::string report_path;
  std::string heatmap_path;
  double scale_max = kDefaultHeatmapScaleMax;
  bool linear = false;
  bool json_output = false;
};

struct EstimateOptions {
  std::string input;
  std::string estimator = "gray-world";
  std::vector<int> roi;
  double percentile = 99.9;
  bool linear = false;
  bool json_output = false;
};

struct SynthOptions {
  std::string spec_path;
  std::string out_dir;
  int bit_depth = 16;
};

struct CompareOptions {
  std::string scene_path;
  std::string observed;
  std::string reference;
  std::string anchors_path;
  std::string layout_path;
  std::string model_override;
  int threads = 1;
  bool linear = false;
  bool json_output = false;
};

std::string format_degrees(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

json fit_to_json(const MultiColorFit& fit) {
  json j{{"deficient", fit.deficient}};
  if (std::isfinite(fit.condition_number)) {
    j["condition_number"] = fit.condition_number;
  } else {
    j["condition_number"] = "inf";
  }
  return j;
}

int run_correct(const CorrectOptions& opt) {
  const LinearImage input = load_image(opt.input, opt.linear);
  const AnchorConfig config = load_anchor_config(opt.anchors_path, input);
  const AdaptationModel& model =
      opt.model_override.empty() ? *config.model : adaptation_model(opt.model_override);

  json report{{"method", opt.method}, {"model", model.name}};
  LinearImage output(input.width(), input.height());
  if (opt.method == "wb") {
    if (opt.anchor_index < 0 || opt.anchor_index >= static_cast<int>(config.anchors.size())) {
      throw config_error("--anchor index " + std::to_string(opt.anchor_index) +
                         " out of range (config has " + std::to_string(config.anchors.size()) +
                         " anchors)");
    }
    const WhitePointAnchor& a = config.anchors[static_cast<size_t>(opt.anchor_index)];
    output = correct_image_wb(input, model, a.source, a.target, opt.threads);
    report["anchor"] = opt.anchor_index;
  } else if (opt.method == "svwb") {
    output = correct_image_svwb(input, model, config.anchors, opt.threads);
    report["anchors"] = config.anchors.size();
  } else if (opt.method == "multicolor") {
    std::vector<Tristimulus> sources, targets;
    for (const auto& a : config.anchors) {
      sources.push_back(a.source);
      targets.push_back(a.target);
    }
    const MultiColorFit fit = multicolor_matrix(sources, targets);
    if (fit.deficient) {
      std::cerr << "warning: multi-color fit is rank deficient (condition number ";
      if (std::isfinite(fit.condition_number)) {
        std::cerr << fit.condition_number;
      } else {
        std::cerr << "inf";
      }
      std::cerr << "); output uses the minimum-norm fit\n";
    }
    output = correct_image_multicolor(input, fit, opt.threads);
    report.update(fit_to_json(fit));
  } else {
    throw config_error("--method must be wb, svwb, or multicolor, got '" + opt.method + "'");
  }

  save_image(output, opt.output, opt.bit_depth, opt.linear);
  if (opt.json_output) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "wrote " << opt.output << "\n";
  }
  return 0;
}

int run_evaluate(const EvaluateOptions& opt) {
  const LinearImage adjusted = load_image(opt.adjusted, opt.linear);
  const LinearImage reference = load_image(opt.reference, opt.linear);
  const ChartLayout layout = load_layout(opt.layout_path);
  const ErrorReport report = evaluate_chart(adjusted, reference, layout);

  const std::string rendered =
      opt.json_output ? report_to_json(report).dump(2) + "\n" : report_to_text(report);
  std::cout << rendered;
  if (!opt.report_path.empty()) {
    std::ofstream out(opt.report_path);
    if (!out) throw io_error("cannot open '" + opt.report_path + "' for writing");
    out << rendered;
  }
  if (!opt.heatmap_path.empty()) {
    save_image(heatmap(report, layout, opt.scale_max, adjusted.width(), adjusted.height()),
               opt.heatmap_path, 8);
  }
  return 0;
}

int run_estimate(const EstimateOptions& opt) {
  const LinearImage input = load_image(opt.input, opt.linear);
  Tristimulus estimate;
  if (opt.estimator == "gray-world") {
    estimate = estimate_gray_world(input);
  } else if (opt.estimator == "max-rgb") {
    estimate = estimate_max_rgb(input, opt.percentile);
  } else if (opt.estimator == "region") {
    if (opt.roi.size() != 4) {
      throw config_error("--roi x0 y0 width height is required for the region estimator");
    }
    estimate = region_mean(input, {opt.roi[0], opt.roi[1], opt.roi[2], opt.roi[3]});
  } else {
    throw config_error("--estimator must be gray-world, max-rgb, or region, got '" +
                       opt.estimator + "'");
  }
  if (opt.json_output) {
    std::cout << json{{"estimator", opt.estimator},
                      {"estimate", {estimate.x, estimate.y, estimate.z}}}
                     .dump(2)
              << "\n";
  } else {
    char buf[160];
    std::snprintf(buf, sizeof buf, "estimate %.9f %.9f %.9f\n", estimate.x, estimate.y,
                  estimate.z);
    std::cout << buf;
  }
  return 0;
}

int run_synth(const SynthOptions& opt) {
  const SceneSpec spec = load_scene_spec(opt.spec_path);
  const SyntheticScene scene = build_scene(spec);
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) throw io_error("cannot create output directory '" + opt.out_dir + "'");

  const auto path = [&](const char* name) { return (fs::path(opt.out_dir) / name).string(); };
  save_image(scene.observed, path("observed.png"), opt.bit_depth);
  save_image(scene.ground_truth, path("ground_truth.png"), opt.bit_depth);
  detail::save_json_file(anchor_config_to_json("bradford", scene.true_anchors),
                         path("anchors.json"));
  detail::save_json_file(layout_to_json(scene.layout), path("layout.json"));
  detail::save_json_file(scene_spec_to_json(spec), path("scene.json"));
  std::cout << "wrote observed.png ground_truth.png anchors.json layout.json scene.json to "
            << opt.out_dir << "\n";
  return 0;
}

struct MethodResult {
  std::string name;
  ErrorReport report;
  bool has_fit = false;
  MultiColorFit fit;
};

int run_compare(const CompareOptions& opt) {
  const bool scene_mode = !opt.scene_path.empty();
  const bool image_mode = !opt.observed.empty();
  if (scene_mode == image_mode) {
    throw config_error(
        "compare needs either --scene, or --observed/--reference/--anchors/--layout");
  }

  std::optional<LinearImage> observed, reference;
  ChartLayout layout;
  std::vector<WhitePointAnchor> anchors;
  const AdaptationModel* model = &adaptation_model("bradford");

  if (scene_mode) {
    const SyntheticScene scene = build_scene(load_scene_spec(opt.scene_path));
    observed = scene.observed;
    reference = scene.ground_truth;
    layout = scene.layout;
    anchors = scene.true_anchors;
  } else {
    if (opt.reference.empty() || opt.anchors_path.empty() || opt.layout_path.empty()) {
      throw config_error("compare with images needs --reference, --anchors, and --layout");
    }
    observed = load_image(opt.observed, opt.linear);
    reference = load_image(opt.reference, opt.linear);
    layout = load_layout(opt.layout_path);
    const AnchorConfig config = load_anchor_config(opt.anchors_path, *observed);
    anchors = config.anchors;
    model = config.model;
  }
  if (!opt.model_override.empty()) model = &adaptation_model(opt.model_override);

  std::vector<MethodResult> results;
  results.push_back({"input", evaluate_chart(*observed, *reference, layout), false, {}});
  for (size_t i = 0; i < anchors.size(); ++i) {
    const LinearImage corrected = correct_image_wb(*observed, *model, anchors[i].source,
                                                   anchors[i].target, opt.threads);
    results.push_back({"wb-anchor" + std::to_string(i + 1),
                       evaluate_chart(corrected, *reference, layout), false, {}});
  }
  if (anchors.size() >= 2) {
    std::vector<Tristimulus> sources, targets;
    multicolor_pairs_from_anchors(anchors, sources, targets);
    const MultiColorFit fit = multicolor_matrix(sources, targets);
    const LinearImage corrected = correct_image_multicolor(*observed, fit, opt.threads);
    results.push_back({"multicolor", evaluate_chart(corrected, *reference, layout), true, fit});
  }
  {
    const LinearImage corrected = correct_image_svwb(*observed, *model, anchors, opt.threads);
    results.push_back({"svwb", evaluate_chart(corrected, *reference, layout), false, {}});
  }

  if (opt.json_output) {
    json methods = json::array();
    for (const auto& r : results) {
      json entry{{"name", r.name},
                 {"mean", r.report.mean_degrees},
                 {"std", r.report.std_degrees}};
      if (r.has_fit) entry.update(fit_to_json(r.fit));
      methods.push_back(entry);
    }
    std::cout << json{{"model", model->name}, {"methods", methods}}.dump(2) << "\n";
  } else {
    std::cout << "model: " << model->name << "\n";
    std::printf("%-12s %12s %12s  %s\n", "method", "mean_deg", "std_deg", "note");
    for (const auto& r : results) {
      std::string note;
      if (r.has_fit && r.fit.deficient) {
        char buf[64];
        if (std::isfinite(r.fit.condition_number)) {
          std::snprintf(buf, sizeof buf, "deficient (cond=%.3g)", r.fit.condition_number);
        } else {
          std::snprintf(buf, sizeof buf, "deficient (cond=inf)");
        }
        note = buf;
      }
      std::printf("%-12s %12s %12s  %s\n", r.name.c_str(),
                  format_degrees(r.report.mean_degrees).c_str(),
                  format_degrees(r.report.std_degrees).c_str(), note.c_str());
    }
  }
  return 0;
}

void print_matrix(const char* name, const Mat3& m) {
  std::printf("%s:\n", name);
  for (int i = 0; i < 3; ++i) {
    std::printf("  [% .10f, % .10f, % .10f]\n", m[i][0], m[i][1], m[i][2]);
  }
}

json matrix_to_json(const Mat3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({m[i][0], m[i][1], m[i][2]});
  return rows;
}

// Reference page for every constant the library bakes in.
int run_constants(bool json_output) {
  if (json_output) {
    json j;
    for (const char* name : {"xyz-scaling", "von-kries", "bradford"}) {
      const AdaptationModel& model = adaptation_model(name);
      j["adaptation_models"][name] = {{"matrix", matrix_to_json(model.matrix)},
                                      {"inverse", matrix_to_json(model.inverse)}};
    }
    j["srgb_to_xyz"] = matrix_to_json(kSrgbToXyzMatrix);
    j["xyz_to_srgb"] = matrix_to_json(xyz_to_srgb_matrix());
    j["whites"] = {{"D65", {kD65White.x, kD65White.y, kD65White.z}},
                   {"D50", {kD50White.x, kD50White.y, kD50White.z}}};
    j["chart"] = default_chart_reference_json();
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (const char* name : {"xyz-scaling", "von-kries", "bradford"}) {
    const AdaptationModel& model = adaptation_model(name);
    print_matrix((std::string(name) + " basis").c_str(), model.matrix);
    print_matrix((std::string(name) + " inverse").c_str(), model.inverse);
  }
  print_matrix("srgb-to-xyz", kSrgbToXyzMatrix);
  print_matrix("xyz-to-srgb", xyz_to_srgb_matrix());
  std::printf("D65: [%.5f, %.5f, %.5f]\n", kD65White.x, kD65White.y, kD65White.z);
  std::printf("D50: [%.5f, %.5f, %.5f]\n", kD50White.x, kD50White.y, kD50White.z);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatially varying white balancing toolkit"};
  app.require_subcommand(1);

  CorrectOptions correct;
  auto* correct_cmd = app.add_subcommand("correct", "apply a white balance correction");
  correct_cmd->add_option("--input", correct.input, "input image (PNG or PPM)")->required();
  correct_cmd->add_option("--output", correct.output, "output image path")->required();
  correct_cmd->add_option("--method", correct.method, "wb | svwb | multicolor");
  correct_cmd->add_option("--anchors", correct.anchors_path, "anchor config JSON")->required();
  correct_cmd->add_option("--model", correct.model_override,
                          "override the config's adaptation model");
  correct_cmd->add_option("--anchor", correct.anchor_index, "anchor index for --method wb");
  correct_cmd->add_option("--bit-depth", correct.bit_depth, "output bit depth (8 or 16)");
  correct_cmd->add_option("--threads", correct.threads, "worker threads (0 = all cores)");
  correct_cmd->add_flag("--linear", correct.linear, "treat image samples as linear RGB");
  correct_cmd->add_flag("--json", correct.json_output, "emit a JSON run report");

  EvaluateOptions evaluate;
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "reproduction angular error against a reference");
  evaluate_cmd->add_option("--adjusted", evaluate.adjusted, "corrected image")->required();
  evaluate_cmd->add_option("--reference", evaluate.reference, "ground-truth image")->required();
  evaluate_cmd->add_option("--layout", evaluate.layout_path, "chart layout JSON")->required();
  evaluate_cmd->add_option("--report", evaluate.report_path, "also write the report here");
  evaluate_cmd->add_option("--heatmap", evaluate.heatmap_path, "write a per-patch heat map PNG");
  evaluate_cmd->add_option("--scale-max", evaluate.scale_max,
                           "heat map full-scale error in degrees");
  evaluate_cmd->add_flag("--linear", evaluate.linear, "treat image samples as linear RGB");
  evaluate_cmd->add_flag("--json", evaluate.json_output, "emit the report as JSON");

  EstimateOptions estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "estimate a source white point");
  estimate_cmd->add_option("--input", estimate.input, "input image")->required();
  estimate_cmd->add_option("--estimator", estimate.estimator, "gray-world | max-rgb | region");
  estimate_cmd->add_option("--roi", estimate.roi, "x0 y0 width height for --estimator region")
      ->expected(4);
  estimate_cmd->add_option("--percentile", estimate.percentile, "max-rgb percentile");
  estimate_cmd->add_flag("--linear", estimate.linear, "treat image samples as linear RGB");
  estimate_cmd->add_flag("--json", estimate.json_output, "emit JSON");

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "render a synthetic chart scene");
  synth_cmd->add_option("--spec", synth.spec_path, "scene spec JSON")->required();
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--bit-depth", synth.bit_depth, "image bit depth (8 or 16)");

  CompareOptions compare;
  auto* compare_cmd =
      app.add_subcommand("compare", "run wb / multicolor / svwb on one scene and tabulate");
  compare_cmd->add_option("--scene", compare.scene_path, "scene spec JSON (synthetic mode)");
  compare_cmd->add_option("--observed", compare.observed, "observed image (file mode)");
  compare_cmd->add_option("--reference", compare.reference, "reference image (file mode)");
  compare_cmd->add_option("--anchors", compare.anchors_path, "anchor config (file mode)");
  compare_cmd->add_option("--layout", compare.layout_path, "chart layout (file mode)");
  compare_cmd->add_option("--model", compare.model_override, "adaptation model override");
  compare_cmd->add_option("--threads", compare.threads, "worker threads (0 = all cores)");
  compare_cmd->add_flag("--linear", compare.linear, "treat image samples as linear RGB");
  compare_cmd->add_flag("--json", compare.json_output, "emit JSON");

  bool constants_json = false;
  auto* constants_cmd =
      app.add_subcommand("constants", "print the built-in matrices, whites, and chart");
  constants_cmd->add_flag("--json", constants_json, "emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(correct_cmd)) return run_correct(correct);
    if (app.got_subcommand(evaluate_cmd)) return run_evaluate(evaluate);
    if (app.got_subcommand(estimate_cmd)) return run_estimate(estimate);
    if (app.got_subcommand(synth_cmd)) return run_synth(synth);
    if (app.got_subcommand(compare_cmd)) return run_compare(compare);
    if (app.got_subcommand(constants_cmd)) return run_constants(constants_json);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
