#pragma once

#include "mcal/likelihood.hpp"
#include "mcal/reliability.hpp"

#include <span>
#include <vector>

namespace mcal {

struct ParamBounds {
    double lo = 0.0;
    double hi = 0.0;
    double clamp(double x) const { return std::min(std::max(x, lo), hi); }
    double width() const { return hi - lo; }
};

struct SearchConfig {
    int grid_resolution = 8;  // k samples per dimension
    int refine_seeds = 4;     // top-l proposals to refine
    ParamBounds pan{-45.0, 45.0};
    ParamBounds roll{-15.0, 15.0};
    ParamBounds tilt{-35.0, 35.0};
    ParamBounds hfov{50.0, 130.0};
    int iteration_cap = 0;    // 0 = run to tolerance; fast mode uses 10
    double tolerance = 1e-4;  // deg for angles, relative for FOV

    void validate() const;
    static SearchConfig fast() {
        SearchConfig c;
        c.iteration_cap = 10;
        return c;
    }
};

// One point of the 4-D search space: (pan, roll, tilt, hfov) in degrees.
struct Proposal {
    EulerAngles angles;
    double hfov_deg = 0.0;
    double objective = 0.0;
    int linear_index = -1;  // position in the k^4 grid, -1 once refined

    CameraParams camera(int width, int height) const;
};

struct GridEvaluation {
    std::vector<Proposal> proposals;  // sorted by objective, descending
    int k = 0;

    std::vector<double> objectives() const;
};

struct RefineTrace {
    Proposal seed;
    Proposal refined;
    int iterations = 0;
};

struct CalibrationResult {
    CameraParams params;
    double hfov_deg = 0.0;
    double objective = 0.0;
    std::vector<SegmentScore> scores;
    ReliabilityCues cues;
    Proposal best_grid;
    std::vector<RefineTrace> traces;
    bool degenerate_scene = false;  // some Manhattan process got 0 segments
    double wall_time_s = 0.0;
};

// Stage 1: evaluate the objective on the k^4 cell-center grid.
GridEvaluation grid_stage(std::span<const LineSegment> segments,
                          int image_width, int image_height, Measure m,
                          const MixtureConfig& config,
                          const SearchConfig& search);

// Stage 2: bounded local ascent from a seed; never returns a worse
// point than the seed.
Proposal refine(const Proposal& seed, std::span<const LineSegment> segments,
                int image_width, int image_height, Measure m,
                const MixtureConfig& config, const SearchConfig& search,
                int* iterations_out = nullptr);

CalibrationResult calibrate(std::span<const LineSegment> segments,
                            int image_width, int image_height, Measure m,
                            const MixtureConfig& config,
                            const SearchConfig& search);

}  // namespace mcal
