#include "mcal/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcal {

namespace {

using nlohmann::json;

void check_version(const json& j, const std::string& path) {
    std::string v = j.at("format_version").get<std::string>();
    if (v.substr(0, v.find('.')) != "1")
        throw std::runtime_error("unsupported format version " + v + " in " +
                                 path);
}

json truth_to_json(const GroundTruth& t) {
    return {{"pan_deg", t.angles.pan_deg},
            {"roll_deg", t.angles.roll_deg},
            {"tilt_deg", t.angles.tilt_deg},
            {"hfov_deg", t.hfov_deg},
            {"focal_px", t.focal_px}};
}

GroundTruth truth_from_json(const json& j) {
    GroundTruth t;
    t.angles = {j.at("pan_deg").get<double>(), j.at("roll_deg").get<double>(),
                j.at("tilt_deg").get<double>()};
    t.hfov_deg = j.at("hfov_deg").get<double>();
    t.focal_px = j.value("focal_px", 0.0);
    return t;
}

ProcessLabel label_from_name(const std::string& s) {
    for (int p = 0; p < kNumProcesses; ++p)
        if (s == process_name(static_cast<ProcessLabel>(p)))
            return static_cast<ProcessLabel>(p);
    throw std::runtime_error("unknown process label: " + s);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return json::parse(in);
}

}  // namespace

SceneFile read_scene(const std::string& path) {
    json j = load_json(path);
    check_version(j, path);
    SceneFile scene;
    scene.width = j.at("width").get<int>();
    scene.height = j.at("height").get<int>();
    for (const auto& s : j.at("segments")) {
        LineSegment seg{{s.at("x1").get<double>(), s.at("y1").get<double>()},
                        {s.at("x2").get<double>(), s.at("y2").get<double>()}};
        scene.segments.push_back(seg);
        if (s.contains("label"))
            scene.labels.push_back(
                label_from_name(s["label"].get<std::string>()));
    }
    if (!scene.labels.empty() &&
        scene.labels.size() != scene.segments.size())
        throw std::runtime_error("labels must cover all segments in " + path);
    if (j.contains("ground_truth"))
        scene.truth = truth_from_json(j["ground_truth"]);
    return scene;
}

void write_scene(const SceneFile& scene, const std::string& path) {
    json j;
    j["format_version"] = kFormatVersion;
    j["width"] = scene.width;
    j["height"] = scene.height;
    json segs = json::array();
    for (size_t i = 0; i < scene.segments.size(); ++i) {
        const auto& s = scene.segments[i];
        json row = {{"x1", s.p1.x()},
                    {"y1", s.p1.y()},
                    {"x2", s.p2.x()},
                    {"y2", s.p2.y()}};
        if (i < scene.labels.size())
            row["label"] = process_name(scene.labels[i]);
        segs.push_back(row);
    }
    j["segments"] = std::move(segs);
    if (scene.truth) j["ground_truth"] = truth_to_json(*scene.truth);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scene file: " + path);
    out << j.dump(2) << "\n";
}

std::vector<LineSegment> read_segments_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<LineSegment> segs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) continue;  // header row
        if (vals.size() != 4)
            throw std::runtime_error("segment CSV rows need 4 columns: " +
                                     path);
        segs.push_back({{vals[0], vals[1]}, {vals[2], vals[3]}});
    }
    return segs;
}

std::string result_to_json(const CalibrationResult& result, Measure m,
                           const std::optional<std::array<double, 3>>&
                               predicted) {
    json j;
    j["format_version"] = kFormatVersion;
    j["measure"] = std::string(1, measure_to_char(m));
    EulerAngles e = result.params.euler();
    j["estimate"] = {{"pan_deg", e.pan_deg},
                     {"roll_deg", e.roll_deg},
                     {"tilt_deg", e.tilt_deg},
                     {"hfov_deg", result.hfov_deg},
                     {"focal_px", result.params.intrinsics.focal_px}};
    j["objective"] = result.objective;
    j["degenerate_scene"] = result.degenerate_scene;
    j["wall_time_s"] = result.wall_time_s;
    j["cues"] = {{"min_segments", result.cues.min_segments},
                 {"grid_entropy", result.cues.grid_entropy},
                 {"mean_loglik", result.cues.mean_loglik}};
    json assign = json::array();
    for (const auto& s : result.scores)
        assign.push_back(process_name(s.assigned));
    j["assignments"] = std::move(assign);
    j["diagnostics"] = {
        {"best_grid_objective", result.best_grid.objective},
        {"best_grid_index", result.best_grid.linear_index},
        {"refinements", json::array()}};
    for (const auto& t : result.traces)
        j["diagnostics"]["refinements"].push_back(
            {{"seed_objective", t.seed.objective},
             {"refined_objective", t.refined.objective},
             {"iterations", t.iterations}});
    if (predicted)
        j["predicted_error"] = {{"roll_deg", (*predicted)[0]},
                                {"tilt_deg", (*predicted)[1]},
                                {"focal_pct", (*predicted)[2]}};
    return j.dump(2);
}

void write_result(const CalibrationResult& result, Measure m,
                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write result file: " + path);
    out << result_to_json(result, m) << "\n";
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    json j = load_json(path);
    check_version(j, path);
    std::vector<ManifestEntry> entries;
    for (const auto& row : j.at("entries")) {
        ManifestEntry e;
        e.id = row.at("id").get<std::string>();
        e.estimate = truth_from_json(row.at("estimate"));
        e.truth = truth_from_json(row.at("truth"));
        e.width = row.value("width", 640);
        e.height = row.value("height", 480);
        if (row.contains("predicted_error")) {
            auto p = row["predicted_error"];
            e.predicted = {{p.at("roll_deg").get<double>(),
                            p.at("tilt_deg").get<double>(),
                            p.at("focal_pct").get<double>()}};
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::string& path) {
    json j;
    j["format_version"] = kFormatVersion;
    json rows = json::array();
    for (const auto& e : entries) {
        json row = {{"id", e.id},
                    {"estimate", truth_to_json(e.estimate)},
                    {"truth", truth_to_json(e.truth)},
                    {"width", e.width},
                    {"height", e.height}};
        if (e.predicted)
            row["predicted_error"] = {{"roll_deg", (*e.predicted)[0]},
                                      {"tilt_deg", (*e.predicted)[1]},
                                      {"focal_pct", (*e.predicted)[2]}};
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
}

std::vector<TrainingRow> read_training_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<TrainingRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) continue;
        if (vals.size() != 6)
            throw std::runtime_error("training CSV rows need 6 columns: " +
                                     path);
        TrainingRow r;
        r.cues = {vals[0], vals[1], vals[2]};
        r.roll_err = vals[3];
        r.tilt_err = vals[4];
        r.focal_err = vals[5];
        rows.push_back(r);
    }
    return rows;
}

void write_training_csv(const std::vector<TrainingRow>& rows,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write training CSV: " + path);
    out << "min_segments,grid_entropy,mean_loglik,roll_err,tilt_err,"
           "focal_err\n";
    for (const auto& r : rows)
        out << r.cues.min_segments << "," << r.cues.grid_entropy << ","
            << r.cues.mean_loglik << "," << r.roll_err << "," << r.tilt_err
            << "," << r.focal_err << "\n";
}

}  // namespace mcal
