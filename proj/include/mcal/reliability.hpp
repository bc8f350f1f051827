#pragma once

#include "mcal/likelihood.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace mcal {

// Global cues for predicting per-parameter estimation error.
struct ReliabilityCues {
    double min_segments = 0.0;  // min Manhattan-direction assignment count
    double grid_entropy = 0.0;  // nats, over the stage-1 proposal posteriors
    double mean_loglik = 0.0;   // final objective / number of segments

    Eigen::Vector3d vec() const {
        return {min_segments, grid_entropy, mean_loglik};
    }
};

// Entropy (nats) of the softmax of the grid objective values.
double grid_entropy(std::span<const double> objectives);

ReliabilityCues extract_cues(std::span<const SegmentScore> scores,
                             std::span<const double> grid_objectives,
                             double final_objective);

struct TrainingRow {
    ReliabilityCues cues;
    double roll_err = 0.0;   // deg
    double tilt_err = 0.0;   // deg
    double focal_err = 0.0;  // percent
};

// KNN regressor in whitened cue space; one K per target parameter,
// picked by seeded 5-fold cross-validation minimizing MAE.
class ReliabilityModel {
public:
    static ReliabilityModel fit(std::span<const TrainingRow> training,
                                unsigned seed = 0);

    // Predicted absolute error for (roll, tilt, focal%).
    std::array<double, 3> predict(const ReliabilityCues& cues) const;

    Eigen::Vector3d whiten(const ReliabilityCues& cues) const;
    Eigen::Vector3d unwhiten(const Eigen::Vector3d& z) const;

    const std::array<int, 3>& chosen_k() const { return k_; }
    size_t training_size() const { return points_.size(); }
    bool fitted() const { return !points_.empty(); }

    std::string to_json() const;
    static ReliabilityModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static ReliabilityModel load(const std::string& path);

private:
    Eigen::Vector3d mean_ = Eigen::Vector3d::Zero();
    Eigen::Matrix3d whiten_ = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d unwhiten_ = Eigen::Matrix3d::Identity();
    std::vector<Eigen::Vector3d> points_;              // whitened cues
    std::vector<std::array<double, 3>> targets_;       // roll, tilt, focal%
    std::array<int, 3> k_{1, 1, 1};
    unsigned seed_ = 0;
};

// Indices of the ceil(fraction*n/100) entries with lowest predicted
// error, in stable (input) order.  fraction in (0, 100].
std::vector<size_t> gate_indices(std::span<const double> predicted_error,
                                 double fraction_percent);

}  // namespace mcal
