#include "mcal/reliability.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mcal {

double grid_entropy(std::span<const double> objectives) {
    if (objectives.empty()) return 0.0;
    double mx = *std::max_element(objectives.begin(), objectives.end());
    double z = 0.0;
    for (double o : objectives) z += std::exp(o - mx);
    double h = 0.0;
    for (double o : objectives) {
        double p = std::exp(o - mx) / z;
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

ReliabilityCues extract_cues(std::span<const SegmentScore> scores,
                             std::span<const double> grid_objectives,
                             double final_objective) {
    ReliabilityCues c;
    std::array<int, 3> counts{0, 0, 0};
    for (const auto& s : scores) {
        int p = static_cast<int>(s.assigned);
        if (p < 3) counts[p]++;
    }
    c.min_segments = *std::min_element(counts.begin(), counts.end());
    c.grid_entropy = grid_entropy(grid_objectives);
    c.mean_loglik =
        scores.empty() ? 0.0
                       : final_objective / static_cast<double>(scores.size());
    return c;
}

namespace {

// Mean of the K nearest targets; ties broken by training index.
double knn_predict(const std::vector<Eigen::Vector3d>& points,
                   const std::vector<std::array<double, 3>>& targets,
                   const Eigen::Vector3d& query, int k, int target,
                   int exclude = -1) {
    std::vector<std::pair<double, size_t>> dist;
    dist.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        if (static_cast<int>(i) == exclude) continue;
        dist.emplace_back((points[i] - query).squaredNorm(), i);
    }
    int kk = std::min<int>(k, static_cast<int>(dist.size()));
    std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
    double sum = 0.0;
    for (int i = 0; i < kk; ++i) sum += targets[dist[i].second][target];
    return sum / kk;
}

}  // namespace

ReliabilityModel ReliabilityModel::fit(std::span<const TrainingRow> training,
                                       unsigned seed) {
    if (training.size() < 10)
        throw std::invalid_argument("need at least 10 training rows");
    ReliabilityModel m;
    m.seed_ = seed;

    const auto n = training.size();
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& r : training) mean += r.cues.vec();
    mean /= static_cast<double>(n);
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& r : training) {
        Eigen::Vector3d d = r.cues.vec() - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    Eigen::Vector3d ev = es.eigenvalues().cwiseMax(1e-12);
    m.mean_ = mean;
    m.whiten_ = ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                es.eigenvectors().transpose();
    m.unwhiten_ = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();

    m.points_.reserve(n);
    m.targets_.reserve(n);
    for (const auto& r : training) {
        m.points_.push_back(m.whiten_ * (r.cues.vec() - mean));
        m.targets_.push_back({r.roll_err, r.tilt_err, r.focal_err});
    }

    // 5-fold CV over odd K, per target.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const int folds = 5;
    for (int t = 0; t < 3; ++t) {
        double best_mae = std::numeric_limits<double>::infinity();
        int best_k = 1;
        for (int k = 1; k <= 31 && k < static_cast<int>(n); k += 2) {
            double abs_err = 0.0;
            size_t count = 0;
            for (int f = 0; f < folds; ++f) {
                std::vector<Eigen::Vector3d> tp;
                std::vector<std::array<double, 3>> tt;
                std::vector<size_t> val;
                for (size_t i = 0; i < n; ++i) {
                    if (static_cast<int>(i % folds) == f)
                        val.push_back(order[i]);
                    else {
                        tp.push_back(m.points_[order[i]]);
                        tt.push_back(m.targets_[order[i]]);
                    }
                }
                if (tp.empty() || val.empty()) continue;
                for (size_t v : val) {
                    double pred =
                        knn_predict(tp, tt, m.points_[v], k, t);
                    abs_err += std::abs(pred - m.targets_[v][t]);
                    ++count;
                }
            }
            double mae = abs_err / static_cast<double>(count);
            if (mae < best_mae - 1e-15) {
                best_mae = mae;
                best_k = k;
            }
        }
        m.k_[t] = best_k;
    }
    return m;
}

std::array<double, 3> ReliabilityModel::predict(
    const ReliabilityCues& cues) const {
    if (!fitted()) throw std::logic_error("reliability model not fitted");
    Eigen::Vector3d q = whiten(cues);
    std::array<double, 3> out{};
    for (int t = 0; t < 3; ++t)
        out[t] = knn_predict(points_, targets_, q, k_[t], t);
    return out;
}

Eigen::Vector3d ReliabilityModel::whiten(const ReliabilityCues& cues) const {
    return whiten_ * (cues.vec() - mean_);
}

Eigen::Vector3d ReliabilityModel::unwhiten(const Eigen::Vector3d& z) const {
    return unwhiten_ * z + mean_;
}

std::string ReliabilityModel::to_json() const {
    nlohmann::json j;
    j["format_version"] = "1.0";
    j["seed"] = seed_;
    j["k"] = k_;
    j["mean"] = {mean_.x(), mean_.y(), mean_.z()};
    auto mat = [](const Eigen::Matrix3d& m) {
        return nlohmann::json::array(
            {{m(0, 0), m(0, 1), m(0, 2)},
             {m(1, 0), m(1, 1), m(1, 2)},
             {m(2, 0), m(2, 1), m(2, 2)}});
    };
    j["whiten"] = mat(whiten_);
    j["unwhiten"] = mat(unwhiten_);
    nlohmann::json rows = nlohmann::json::array();
    for (size_t i = 0; i < points_.size(); ++i) {
        rows.push_back({{"point", {points_[i].x(), points_[i].y(),
                                   points_[i].z()}},
                        {"target", targets_[i]}});
    }
    j["training"] = std::move(rows);
    return j.dump();
}

ReliabilityModel ReliabilityModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string version = j.at("format_version").get<std::string>();
    if (version.substr(0, version.find('.')) != "1")
        throw std::runtime_error("unsupported model format version " + version);
    ReliabilityModel m;
    m.seed_ = j.at("seed").get<unsigned>();
    m.k_ = j.at("k").get<std::array<int, 3>>();
    auto mean = j.at("mean");
    m.mean_ = {mean[0].get<double>(), mean[1].get<double>(),
               mean[2].get<double>()};
    auto mat = [](const nlohmann::json& a) {
        Eigen::Matrix3d m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = a[r][c].get<double>();
        return m;
    };
    m.whiten_ = mat(j.at("whiten"));
    m.unwhiten_ = mat(j.at("unwhiten"));
    for (const auto& row : j.at("training")) {
        auto p = row.at("point");
        m.points_.emplace_back(p[0].get<double>(), p[1].get<double>(),
                               p[2].get<double>());
        m.targets_.push_back(row.at("target").get<std::array<double, 3>>());
    }
    return m;
}

void ReliabilityModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model to " + path);
    out << to_json();
}

ReliabilityModel ReliabilityModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return from_json(text);
}

std::vector<size_t> gate_indices(std::span<const double> predicted_error,
                                 double fraction_percent) {
    if (!(fraction_percent > 0.0 && fraction_percent <= 100.0))
        throw std::domain_error("fraction must lie in (0, 100]");
    size_t n = predicted_error.size();
    size_t keep = static_cast<size_t>(
        std::ceil(fraction_percent * static_cast<double>(n) / 100.0));
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        return predicted_error[a] < predicted_error[b];
    });
    idx.resize(std::min(keep, n));
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace mcal
