#pragma once

#include "mcal/deviation.hpp"
#include "mcal/geometry.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace mcal {

enum class ProcessLabel { Vertical = 0, Horizontal1, Horizontal2, Background };
inline constexpr int kNumProcesses = 4;

const char* process_name(ProcessLabel p);

struct LikelihoodModel {
    enum class Family { Exponential, Gaussian, Uniform };
    Family family = Family::Exponential;
    double param = 1.0;  // lambda, sigma or range, in the measure's unit
};

// Density of the model at deviation x >= 0 (or the infinity sentinel,
// which yields 0).  Throws on negative x.
double component_likelihood(double x, const LikelihoodModel& model);

// Priors and per-process likelihood models for the four-process
// mixture.  The two horizontal processes share one dispersion.
struct MixtureConfig {
    std::array<double, kNumProcesses> priors{0.45, 0.26, 0.26, 0.03};
    LikelihoodModel vertical_model;
    LikelihoodModel horizontal_model;
    // Support of the background uniform model; <= 0 selects the
    // default: 90 deg for angular measures, the image diagonal for
    // pixel measures.
    double background_range = 0.0;
    bool length_weighting = true;

    double background_range_for(Measure m, const Intrinsics& intr) const;
    void validate() const;

    static MixtureConfig defaults(Measure m);
    static MixtureConfig from_json_file(const std::string& path, Measure& m);
    std::string to_json(Measure m) const;
};

struct SegmentScore {
    int index = 0;
    std::array<double, kNumProcesses> process_likelihood{};  // prior-weighted
    double mixture = 0.0;
    ProcessLabel assigned = ProcessLabel::Background;
};

// Deviations of one segment against the three Manhattan vanishing
// points, ordered (Vertical, Horizontal1, Horizontal2).
std::array<double, 3> manhattan_deviations(
    const LineSegment& seg, Measure m,
    const std::array<Eigen::Vector3d, 3>& vps, const Eigen::Matrix3d& rotation,
    const Intrinsics& intr);

double mixture_likelihood(const LineSegment& seg, const CameraParams& params,
                          Measure m, const MixtureConfig& config);

// Length-weighted sum of log mixture densities.  Throws on an empty
// segment list.
double objective(std::span<const LineSegment> segments,
                 const CameraParams& params, Measure m,
                 const MixtureConfig& config);

// Ablation objective: length-weighted sum of log raw deviations against
// the best Manhattan vp per segment (no probabilistic model).
double log_deviation_objective(std::span<const LineSegment> segments,
                               const CameraParams& params, Measure m);

std::vector<SegmentScore> classify_segments(
    std::span<const LineSegment> segments, const CameraParams& params,
    Measure m, const MixtureConfig& config);

// Maximum-likelihood exponential rate from non-negative samples.
double fit_exponential(std::span<const double> deviations);

}  // namespace mcal
