#include "mcal/eval.hpp"

#include "mcal/reliability.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mcal {

double fold_pan(double deg) {
    double r = std::remainder(deg, 90.0);
    // remainder returns (-45, 45]; map the boundary consistently.
    if (r > 45.0) r -= 90.0;
    return r;
}

ErrorRecord per_image_errors(const CameraParams& estimate,
                             const CameraParams& truth,
                             bool full_rotation_truth) {
    EulerAngles e = estimate.euler();
    EulerAngles t = truth.euler();
    ErrorRecord rec;
    rec.roll_err_deg = std::abs(e.roll_deg - t.roll_deg);
    rec.tilt_err_deg = std::abs(e.tilt_deg - t.tilt_deg);
    rec.pan_err_deg = std::abs(fold_pan(e.pan_deg - t.pan_deg));
    double f_est = estimate.intrinsics.focal_px;
    double f_true = truth.intrinsics.focal_px;
    rec.focal_err_pct = 100.0 * std::abs(f_est - f_true) / f_true;
    double fov_est = focal_to_fov(f_est, estimate.intrinsics.width);
    double fov_true = focal_to_fov(f_true, truth.intrinsics.width);
    rec.fov_err_pct = 100.0 * std::abs(fov_est - fov_true) / fov_true;
    if (full_rotation_truth)
        rec.frame_err_deg = frame_angle_error(estimate.rotation,
                                              truth.rotation);
    return rec;
}

Stat aggregate(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("no values to aggregate");
    Stat s;
    s.n = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.n;
    if (s.n == 1) {
        s.se = 0.0;
        s.se_defined = false;
        return s;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
    return s;
}

namespace {

std::vector<double> column(std::span<const ErrorRecord> records,
                           double ErrorRecord::*field) {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& r : records) v.push_back(r.*field);
    return v;
}

}  // namespace

std::vector<MetricRow> aggregate_records(
    std::span<const ErrorRecord> records) {
    if (records.empty()) throw std::invalid_argument("no records");
    std::vector<MetricRow> rows;
    rows.push_back({"roll_mae_deg",
                    aggregate(column(records, &ErrorRecord::roll_err_deg))});
    rows.push_back({"tilt_mae_deg",
                    aggregate(column(records, &ErrorRecord::tilt_err_deg))});
    rows.push_back({"pan_mae_deg",
                    aggregate(column(records, &ErrorRecord::pan_err_deg))});
    rows.push_back({"focal_mae_pct",
                    aggregate(column(records, &ErrorRecord::focal_err_pct))});
    rows.push_back({"fov_mae_pct",
                    aggregate(column(records, &ErrorRecord::fov_err_pct))});
    std::vector<double> frame;
    for (const auto& r : records)
        if (r.frame_err_deg) frame.push_back(*r.frame_err_deg);
    if (!frame.empty())
        rows.push_back({"frame_mae_deg", aggregate(frame)});
    return rows;
}

std::vector<GatedRow> gated_table(
    std::span<const ErrorRecord> records,
    std::span<const std::array<double, 3>> predicted_errors,
    std::span<const double> fractions) {
    if (records.size() != predicted_errors.size())
        throw std::invalid_argument("records and predictions differ in size");
    if (records.empty()) throw std::invalid_argument("no records");

    std::vector<GatedRow> rows;
    for (double frac : fractions) {
        GatedRow row;
        row.fraction = frac;
        // Gate per parameter by that parameter's predicted error.
        const std::array<double ErrorRecord::*, 3> fields = {
            &ErrorRecord::roll_err_deg, &ErrorRecord::tilt_err_deg,
            &ErrorRecord::focal_err_pct};
        for (int t = 0; t < 3; ++t) {
            std::vector<double> pred;
            pred.reserve(records.size());
            for (const auto& p : predicted_errors) pred.push_back(p[t]);
            auto idx = gate_indices(pred, frac);
            std::vector<double> vals;
            for (size_t i : idx) vals.push_back(records[i].*fields[t]);
            Stat s = aggregate(vals);
            if (t == 0) row.roll = s;
            else if (t == 1) row.tilt = s;
            else row.focal = s;
        }
        rows.push_back(row);
    }
    return rows;
}

Histogram histogram(std::span<const double> values, double lo, double hi,
                    int bins) {
    if (values.empty()) throw std::invalid_argument("no values");
    if (!(hi > lo) || bins < 1)
        throw std::invalid_argument("invalid histogram spec");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    double width = (hi - lo) / bins;
    for (int i = 0; i <= bins; ++i) h.edges.push_back(lo + i * width);
    for (double v : values) {
        if (v < lo || v > hi) continue;
        int b = std::min(static_cast<int>((v - lo) / width), bins - 1);
        h.counts[b]++;
    }
    return h;
}

std::string to_csv(std::span<const MetricRow> rows) {
    std::ostringstream out;
    out << "metric,mean,se,n\n";
    for (const auto& r : rows)
        out << r.metric << "," << r.stat.mean << "," << r.stat.se << ","
            << r.stat.n << "\n";
    return out.str();
}

std::string to_csv(std::span<const GatedRow> rows) {
    std::ostringstream out;
    out << "fraction_pct,roll_mae_deg,tilt_mae_deg,focal_mae_pct,n\n";
    for (const auto& r : rows)
        out << r.fraction << "," << r.roll.mean << "," << r.tilt.mean << ","
            << r.focal.mean << "," << r.roll.n << "\n";
    return out.str();
}

std::string to_csv(const Histogram& h) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count\n";
    for (size_t i = 0; i < h.counts.size(); ++i)
        out << h.edges[i] << "," << h.edges[i + 1] << "," << h.counts[i]
            << "\n";
    return out.str();
}

}  // namespace mcal
