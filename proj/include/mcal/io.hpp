#pragma once

#include "mcal/reliability.hpp"
#include "mcal/search.hpp"
#include "mcal/synth.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mcal {

inline constexpr const char* kFormatVersion = "1.0";

// Ground-truth block carried by scene files and manifests.
struct GroundTruth {
    EulerAngles angles;
    double hfov_deg = 0.0;
    double focal_px = 0.0;
};

struct SceneFile {
    int width = 640;
    int height = 480;
    std::vector<LineSegment> segments;
    std::vector<ProcessLabel> labels;  // empty unless synthetic
    std::optional<GroundTruth> truth;
};

SceneFile read_scene(const std::string& path);
void write_scene(const SceneFile& scene, const std::string& path);

// CSV adapter for external detectors: one "x1,y1,x2,y2" row per
// segment, optional header.
std::vector<LineSegment> read_segments_csv(const std::string& path);

std::string result_to_json(const CalibrationResult& result, Measure m,
                           const std::optional<std::array<double, 3>>&
                               predicted = std::nullopt);
void write_result(const CalibrationResult& result, Measure m,
                  const std::string& path);

// Evaluation manifest: estimates paired with ground truth and optional
// reliability predictions.
struct ManifestEntry {
    std::string id;
    GroundTruth estimate;
    GroundTruth truth;
    int width = 640;
    int height = 480;
    std::optional<std::array<double, 3>> predicted;  // roll, tilt, focal%
};

std::vector<ManifestEntry> read_manifest(const std::string& path);
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::string& path);

// Training CSV for the reliability model:
// min_segments,grid_entropy,mean_loglik,roll_err,tilt_err,focal_err
std::vector<TrainingRow> read_training_csv(const std::string& path);
void write_training_csv(const std::vector<TrainingRow>& rows,
                        const std::string& path);

}  // namespace mcal
