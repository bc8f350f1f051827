#pragma once

#include "mcal/geometry.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mcal {

// Fold an angle difference modulo the 90-degree Manhattan pan ambiguity
// into [-45, 45].
double fold_pan(double deg);

struct ErrorRecord {
    double roll_err_deg = 0.0;
    double tilt_err_deg = 0.0;
    double pan_err_deg = 0.0;    // after modulo-90 folding
    double focal_err_pct = 0.0;  // 100 * |f̂ - f| / f
    double fov_err_pct = 0.0;
    std::optional<double> frame_err_deg;  // when full rotation truth exists
};

ErrorRecord per_image_errors(const CameraParams& estimate,
                             const CameraParams& truth,
                             bool full_rotation_truth = true);

struct Stat {
    double mean = 0.0;
    double se = 0.0;  // sample std (n-1) / sqrt(n); 0 and flagged at n=1
    int n = 0;
    bool se_defined = true;
};

Stat aggregate(std::span<const double> values);

// Mean +- SE per metric over a set of records, as CSV-ready rows.
struct MetricRow {
    std::string metric;
    Stat stat;
};
std::vector<MetricRow> aggregate_records(std::span<const ErrorRecord> records);

// MAE per gating fraction per metric (reliability-gated table).
struct GatedRow {
    double fraction = 100.0;
    Stat roll;
    Stat tilt;
    Stat focal;
};
std::vector<GatedRow> gated_table(
    std::span<const ErrorRecord> records,
    std::span<const std::array<double, 3>> predicted_errors,
    std::span<const double> fractions);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> edges;
    std::vector<int> counts;
};
Histogram histogram(std::span<const double> values, double lo, double hi,
                    int bins);

std::string to_csv(std::span<const MetricRow> rows);
std::string to_csv(std::span<const GatedRow> rows);
std::string to_csv(const Histogram& h);

}  // namespace mcal
