#include "mcal/curate.hpp"
#include "mcal/eval.hpp"
#include "mcal/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

mcal::Measure parse_measure(const std::string& s) {
    if (s.size() != 1)
        throw CLI::ValidationError("--measure", "expected one of a..e");
    return mcal::measure_from_char(s[0]);
}

int run_calibrate(const std::string& segments_path, int width, int height,
                  const std::string& measure_str, bool fast,
                  const std::string& config_path,
                  const std::string& model_path, const std::string& out_path) {
    mcal::Measure m = parse_measure(measure_str);
    std::vector<mcal::LineSegment> segments;
    if (segments_path.size() > 4 &&
        segments_path.substr(segments_path.size() - 4) == ".csv") {
        segments = mcal::read_segments_csv(segments_path);
    } else {
        auto scene = mcal::read_scene(segments_path);
        segments = scene.segments;
        if (width <= 0) width = scene.width;
        if (height <= 0) height = scene.height;
    }
    if (width <= 0 || height <= 0)
        throw std::invalid_argument(
            "image dimensions required (--width/--height)");

    mcal::MixtureConfig config = mcal::MixtureConfig::defaults(m);
    if (!config_path.empty()) {
        mcal::Measure file_m = m;
        config = mcal::MixtureConfig::from_json_file(config_path, file_m);
        m = file_m;
    }
    mcal::SearchConfig search;
    if (fast) search = mcal::SearchConfig::fast();

    auto result = mcal::calibrate(segments, width, height, m, config, search);

    std::optional<std::array<double, 3>> predicted;
    if (!model_path.empty()) {
        auto model = mcal::ReliabilityModel::load(model_path);
        predicted = model.predict(result.cues);
    }
    std::string js = mcal::result_to_json(result, m, predicted);
    if (out_path.empty()) {
        std::cout << js << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw std::runtime_error("cannot write result: " + out_path);
        out << js << "\n";
    }
    if (result.degenerate_scene) {
        std::cerr << "warning: degenerate scene, some Manhattan direction "
                     "has no assigned segments\n";
        return 2;
    }
    return 0;
}

int run_synth(const std::vector<double>& params,
              const std::vector<int>& counts, double noise,
              std::uint64_t seed, int width, int height,
              const std::string& out_path) {
    mcal::SynthConfig config;
    config.angles = {params[0], params[1], params[2]};
    config.hfov_deg = params[3];
    config.counts = {counts[0], counts[1], counts[2], counts[3]};
    config.noise_px = noise;
    config.seed = seed;
    config.width = width;
    config.height = height;

    auto scene = mcal::generate(config);
    mcal::SceneFile file;
    file.width = config.width;
    file.height = config.height;
    for (const auto& s : scene.segments) {
        file.segments.push_back(s.segment);
        file.labels.push_back(s.label);
    }
    mcal::GroundTruth truth;
    truth.angles = config.angles;
    truth.hfov_deg = config.hfov_deg;
    truth.focal_px = mcal::fov_to_focal(config.hfov_deg, config.width);
    file.truth = truth;
    mcal::write_scene(file, out_path);
    return 0;
}

int run_curate(const std::string& pano_dir, const std::string& out_dir,
               std::uint64_t seed, int per_scene,
               const std::vector<double>& fovs, bool uniform_fov,
               bool write_split) {
    std::vector<std::string> panoramas;
    for (const auto& entry : fs::directory_iterator(pano_dir))
        if (entry.path().extension() == ".ppm")
            panoramas.push_back(entry.path().string());
    std::sort(panoramas.begin(), panoramas.end());
    if (panoramas.empty())
        throw std::runtime_error("no .ppm panoramas in " + pano_dir);

    mcal::CurateOptions options;
    if (!fovs.empty()) options.fovs = fovs;
    options.uniform_fov = uniform_fov;
    if (per_scene % static_cast<int>(options.fovs.size()) != 0)
        throw std::runtime_error("--per-scene must be a multiple of the FOV "
                                 "count");
    options.per_fov = per_scene / static_cast<int>(options.fovs.size());

    fs::create_directories(out_dir);
    std::mt19937_64 rng(seed);
    json manifest;
    manifest["format_version"] = mcal::kFormatVersion;
    manifest["entries"] = json::array();
    std::vector<std::string> scene_ids;
    int failures = 0;

    for (const auto& path : panoramas) {
        std::string id = fs::path(path).stem().string();
        mcal::Image pano;
        try {
            pano = mcal::read_ppm(path);
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping " << path << ": " << e.what()
                      << "\n";
            ++failures;
            continue;
        }
        scene_ids.push_back(id);
        auto specs = mcal::sample_specs(id, options, rng);
        for (size_t i = 0; i < specs.size(); ++i) {
            const auto& spec = specs[i];
            std::string name = id + "_" + std::to_string(i) + ".ppm";
            mcal::Image view = mcal::project(pano, spec);
            mcal::write_ppm(view, (fs::path(out_dir) / name).string());
            manifest["entries"].push_back(
                {{"id", name},
                 {"scene", id},
                 {"truth",
                  {{"pan_deg", spec.pan_deg},
                   {"roll_deg", spec.roll_deg},
                   {"tilt_deg", spec.tilt_deg},
                   {"hfov_deg", spec.hfov_deg},
                   {"focal_px", spec.focal_px()}}},
                 {"width", spec.width},
                 {"height", spec.height}});
        }
    }
    if (scene_ids.empty())
        throw std::runtime_error("no panorama could be curated");

    {
        std::ofstream out(fs::path(out_dir) / "manifest.json");
        out << manifest.dump(2) << "\n";
    }
    if (write_split) {
        auto [train, test] = mcal::split_scenes(scene_ids, seed);
        json split = {{"format_version", mcal::kFormatVersion},
                      {"train", train},
                      {"test", test}};
        std::ofstream out(fs::path(out_dir) / "split.json");
        out << split.dump(2) << "\n";
    }
    if (failures > 0)
        std::cerr << "warning: " << failures << " panoramas skipped\n";
    return 0;
}

int run_reliability_fit(const std::string& training_path,
                        const std::string& out_path, unsigned seed) {
    auto rows = mcal::read_training_csv(training_path);
    auto model = mcal::ReliabilityModel::fit(rows, seed);
    model.save(out_path);
    return 0;
}

int run_reliability_predict(const std::string& model_path,
                            const std::vector<std::string>& result_paths) {
    auto model = mcal::ReliabilityModel::load(model_path);
    for (const auto& path : result_paths) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open result: " + path);
        json j = json::parse(in);
        mcal::ReliabilityCues cues;
        cues.min_segments = j.at("cues").at("min_segments").get<double>();
        cues.grid_entropy = j.at("cues").at("grid_entropy").get<double>();
        cues.mean_loglik = j.at("cues").at("mean_loglik").get<double>();
        auto p = model.predict(cues);
        j["predicted_error"] = {{"roll_deg", p[0]},
                                {"tilt_deg", p[1]},
                                {"focal_pct", p[2]}};
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot rewrite result: " + path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int run_evaluate(const std::string& manifest_path, const std::string& out_dir,
                 bool gated, const std::vector<double>& fractions,
                 int hist_bins) {
    auto entries = mcal::read_manifest(manifest_path);
    if (entries.empty()) throw std::runtime_error("empty manifest");

    std::vector<mcal::ErrorRecord> records;
    std::vector<std::array<double, 3>> predictions;
    bool all_predicted = true;
    for (const auto& e : entries) {
        mcal::CameraParams est, truth;
        est.intrinsics = {e.estimate.focal_px, e.width, e.height};
        est.rotation = mcal::euler_to_rotation(e.estimate.angles);
        truth.intrinsics = {e.truth.focal_px, e.width, e.height};
        truth.rotation = mcal::euler_to_rotation(e.truth.angles);
        records.push_back(mcal::per_image_errors(est, truth));
        if (e.predicted)
            predictions.push_back(*e.predicted);
        else
            all_predicted = false;
    }

    fs::create_directories(out_dir);
    auto rows = mcal::aggregate_records(records);
    {
        std::ofstream out(fs::path(out_dir) / "summary.csv");
        out << mcal::to_csv(std::span<const mcal::MetricRow>(rows));
    }
    std::cout << mcal::to_csv(std::span<const mcal::MetricRow>(rows));

    std::vector<double> focal;
    for (const auto& r : records) focal.push_back(r.focal_err_pct);
    auto hist = mcal::histogram(
        focal, 0.0, std::max(1.0, *std::max_element(focal.begin(),
                                                    focal.end())),
        hist_bins);
    {
        std::ofstream out(fs::path(out_dir) / "focal_err_hist.csv");
        out << mcal::to_csv(hist);
    }

    if (gated) {
        if (!all_predicted)
            throw std::runtime_error(
                "gated evaluation needs predicted_error on every manifest "
                "entry");
        auto table = mcal::gated_table(records, predictions, fractions);
        std::ofstream out(fs::path(out_dir) / "gated.csv");
        out << mcal::to_csv(std::span<const mcal::GatedRow>(table));
        std::cout << mcal::to_csv(std::span<const mcal::GatedRow>(table));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Manhattan-world focal length and rotation estimation"};
    app.require_subcommand(1);

    // calibrate
    std::string segments_path, measure_str = "b", config_path, model_path,
                out_path;
    int width = 0, height = 0;
    bool fast = false;
    auto* cal = app.add_subcommand("calibrate",
                                   "Estimate focal length and rotation from "
                                   "line segments");
    cal->add_option("--segments", segments_path,
                    "Scene JSON or segment CSV file")
        ->required();
    cal->add_option("--width", width, "Image width in pixels");
    cal->add_option("--height", height, "Image height in pixels");
    cal->add_option("--measure", measure_str, "Deviation measure a..e");
    cal->add_flag("--fast", fast, "Cap refinement at 10 iterations");
    cal->add_option("--config", config_path, "Mixture config JSON");
    cal->add_option("--model", model_path,
                    "Reliability model for error prediction");
    cal->add_option("--out", out_path, "Result JSON path (default stdout)");

    // synth
    std::vector<double> synth_params{0.0, 0.0, 0.0, 90.0};
    std::vector<int> synth_counts{30, 30, 30, 5};
    double synth_noise = 0.0;
    std::uint64_t synth_seed = 0;
    int synth_w = 640, synth_h = 480;
    std::string synth_out;
    auto* syn = app.add_subcommand("synth",
                                   "Generate a synthetic Manhattan scene");
    syn->add_option("--params", synth_params,
                    "pan roll tilt hfov (deg)")
        ->expected(4);
    syn->add_option("--counts", synth_counts,
                    "vertical horizontal1 horizontal2 background")
        ->expected(4);
    syn->add_option("--noise", synth_noise, "Endpoint noise sigma (px)");
    syn->add_option("--seed", synth_seed, "RNG seed");
    syn->add_option("--width", synth_w, "Image width");
    syn->add_option("--height", synth_h, "Image height");
    syn->add_option("--out", synth_out, "Scene JSON path")->required();

    // curate
    std::string pano_dir, curate_out;
    std::uint64_t curate_seed = 0;
    int per_scene = 15;
    std::vector<double> curate_fovs;
    bool uniform_fov = false, write_split = false;
    auto* cur = app.add_subcommand("curate",
                                   "Project panoramas into planar views");
    cur->add_option("--pano-dir", pano_dir, "Directory of .ppm panoramas")
        ->required();
    cur->add_option("--out-dir", curate_out, "Output directory")->required();
    cur->add_option("--seed", curate_seed, "RNG seed");
    cur->add_option("--per-scene", per_scene, "Projections per panorama");
    cur->add_option("--fovs", curate_fovs, "Discrete FOV set (deg)");
    cur->add_flag("--uniform-fov", uniform_fov,
                  "Draw FOV uniformly over the set's range");
    cur->add_flag("--split", write_split, "Write a half/half scene split");

    // reliability fit / predict
    auto* rel = app.add_subcommand("reliability",
                                   "Reliability model workflows");
    rel->require_subcommand(1);
    std::string fit_csv, fit_out;
    unsigned fit_seed = 0;
    auto* fit = rel->add_subcommand("fit", "Fit the KNN error predictor");
    fit->add_option("--training", fit_csv, "Training CSV (cues + errors)")
        ->required();
    fit->add_option("--out", fit_out, "Model JSON path")->required();
    fit->add_option("--seed", fit_seed, "CV fold seed");

    std::string predict_model;
    std::vector<std::string> predict_results;
    auto* pred = rel->add_subcommand("predict",
                                     "Annotate result JSONs with predicted "
                                     "errors");
    pred->add_option("--model", predict_model, "Model JSON path")->required();
    pred->add_option("--results", predict_results, "Result JSON files")
        ->required();

    // evaluate
    std::string eval_manifest, eval_out = ".";
    bool eval_gated = false;
    std::vector<double> eval_fractions{25.0, 50.0, 75.0, 100.0};
    int eval_bins = 20;
    auto* ev = app.add_subcommand("evaluate",
                                  "Compute error tables from a manifest");
    ev->add_option("--manifest", eval_manifest, "Manifest JSON")->required();
    ev->add_option("--out-dir", eval_out, "Output directory for CSV tables");
    ev->add_flag("--gated", eval_gated, "Also emit the reliability-gated "
                                        "table");
    ev->add_option("--fractions", eval_fractions, "Gating fractions (pct)");
    ev->add_option("--hist-bins", eval_bins, "Histogram bin count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cal)
            return run_calibrate(segments_path, width, height, measure_str,
                                 fast, config_path, model_path, out_path);
        if (*syn)
            return run_synth(synth_params, synth_counts, synth_noise,
                             synth_seed, synth_w, synth_h, synth_out);
        if (*cur)
            return run_curate(pano_dir, curate_out, curate_seed, per_scene,
                              curate_fovs, uniform_fov, write_split);
        if (*fit) return run_reliability_fit(fit_csv, fit_out, fit_seed);
        if (*pred) return run_reliability_predict(predict_model,
                                                  predict_results);
        if (*ev)
            return run_evaluate(eval_manifest, eval_out, eval_gated,
                                eval_fractions, eval_bins);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
