#include "mcal/likelihood.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace mcal {

namespace {
constexpr double kDensityFloor = 1e-300;
}

const char* process_name(ProcessLabel p) {
    switch (p) {
        case ProcessLabel::Vertical: return "vertical";
        case ProcessLabel::Horizontal1: return "horizontal1";
        case ProcessLabel::Horizontal2: return "horizontal2";
        case ProcessLabel::Background: return "background";
    }
    return "?";
}

double component_likelihood(double x, const LikelihoodModel& model) {
    if (std::isinf(x)) return 0.0;
    if (x < 0.0) throw std::invalid_argument("deviation must be non-negative");
    switch (model.family) {
        case LikelihoodModel::Family::Exponential:
            return std::exp(-x / model.param) / model.param;
        case LikelihoodModel::Family::Gaussian:
            return std::exp(-0.5 * x * x / (model.param * model.param)) /
                   (model.param * std::sqrt(2.0 * kPi));
        case LikelihoodModel::Family::Uniform:
            return x <= model.param ? 1.0 / model.param : 0.0;
    }
    return 0.0;
}

double MixtureConfig::background_range_for(Measure m,
                                           const Intrinsics& intr) const {
    if (background_range > 0.0) return background_range;
    return measure_is_angular(m) ? 90.0 : intr.diagonal_px();
}

void MixtureConfig::validate() const {
    double s = std::accumulate(priors.begin(), priors.end(), 0.0);
    if (std::abs(s - 1.0) > 1e-12)
        throw std::invalid_argument("process priors must sum to 1");
    if (vertical_model.param <= 0.0 || horizontal_model.param <= 0.0)
        throw std::invalid_argument("dispersion parameters must be positive");
}

MixtureConfig MixtureConfig::defaults(Measure m) {
    MixtureConfig c;
    using F = LikelihoodModel::Family;
    switch (m) {
        case Measure::A:
            c.horizontal_model = {F::Exponential, 94.46};
            c.vertical_model = {F::Exponential, 17.26};
            break;
        case Measure::B:
            c.horizontal_model = {F::Exponential, 1.46};
            c.vertical_model = {F::Exponential, 0.57};
            break;
        case Measure::C:
            c.horizontal_model = {F::Exponential, 0.39};
            c.vertical_model = {F::Exponential, 0.53};
            break;
        case Measure::D:
            c.horizontal_model = {F::Gaussian, 1.00};
            c.vertical_model = {F::Gaussian, 1.00};
            break;
        case Measure::E:
            c.horizontal_model = {F::Exponential, 0.80};
            c.vertical_model = {F::Exponential, 0.57};
            break;
    }
    return c;
}

namespace {

std::string family_name(LikelihoodModel::Family f) {
    switch (f) {
        case LikelihoodModel::Family::Exponential: return "exponential";
        case LikelihoodModel::Family::Gaussian: return "gaussian";
        case LikelihoodModel::Family::Uniform: return "uniform";
    }
    return "?";
}

LikelihoodModel::Family family_from_name(const std::string& s) {
    if (s == "exponential") return LikelihoodModel::Family::Exponential;
    if (s == "gaussian") return LikelihoodModel::Family::Gaussian;
    if (s == "uniform") return LikelihoodModel::Family::Uniform;
    throw std::invalid_argument("unknown likelihood family: " + s);
}

}  // namespace

MixtureConfig MixtureConfig::from_json_file(const std::string& path,
                                            Measure& m) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.contains("measure"))
        m = measure_from_char(j["measure"].get<std::string>().at(0));
    MixtureConfig c = defaults(m);
    if (j.contains("priors")) {
        auto p = j["priors"];
        c.priors = {p.at("vertical").get<double>(),
                    p.at("horizontal1").get<double>(),
                    p.at("horizontal2").get<double>(),
                    p.at("background").get<double>()};
    }
    auto read_model = [&](const char* key, LikelihoodModel& mdl) {
        if (!j.contains(key)) return;
        auto n = j[key];
        mdl.family = family_from_name(n.at("family").get<std::string>());
        mdl.param = n.at("param").get<double>();
    };
    read_model("vertical_model", c.vertical_model);
    read_model("horizontal_model", c.horizontal_model);
    if (j.contains("background_range"))
        c.background_range = j["background_range"].get<double>();
    if (j.contains("length_weighting"))
        c.length_weighting = j["length_weighting"].get<bool>();
    c.validate();
    return c;
}

std::string MixtureConfig::to_json(Measure m) const {
    nlohmann::json j;
    j["format_version"] = "1.0";
    j["measure"] = std::string(1, measure_to_char(m));
    j["priors"] = {{"vertical", priors[0]},
                   {"horizontal1", priors[1]},
                   {"horizontal2", priors[2]},
                   {"background", priors[3]}};
    j["vertical_model"] = {{"family", family_name(vertical_model.family)},
                           {"param", vertical_model.param}};
    j["horizontal_model"] = {{"family", family_name(horizontal_model.family)},
                             {"param", horizontal_model.param}};
    j["background_range"] = background_range;
    j["length_weighting"] = length_weighting;
    return j.dump(2);
}

std::array<double, 3> manhattan_deviations(
    const LineSegment& seg, Measure m,
    const std::array<Eigen::Vector3d, 3>& vps, const Eigen::Matrix3d& rotation,
    const Intrinsics& intr) {
    // vps/rotation columns: 0 = horizontal1, 1 = vertical, 2 = horizontal2.
    return {deviation(m, seg, vps[1], rotation.col(1), intr),
            deviation(m, seg, vps[0], rotation.col(0), intr),
            deviation(m, seg, vps[2], rotation.col(2), intr)};
}

namespace {

SegmentScore score_segment(const LineSegment& seg, int index, Measure m,
                           const std::array<Eigen::Vector3d, 3>& vps,
                           const CameraParams& params,
                           const MixtureConfig& config, double bg_range) {
    auto devs = manhattan_deviations(seg, m, vps, params.rotation,
                                     params.intrinsics);
    SegmentScore s;
    s.index = index;
    s.process_likelihood[0] =
        config.priors[0] * component_likelihood(devs[0], config.vertical_model);
    s.process_likelihood[1] =
        config.priors[1] *
        component_likelihood(devs[1], config.horizontal_model);
    s.process_likelihood[2] =
        config.priors[2] *
        component_likelihood(devs[2], config.horizontal_model);
    s.process_likelihood[3] = config.priors[3] / bg_range;
    s.mixture = 0.0;
    double best = -1.0;
    for (int p = 0; p < kNumProcesses; ++p) {
        s.mixture += s.process_likelihood[p];
        if (s.process_likelihood[p] > best) {
            best = s.process_likelihood[p];
            s.assigned = static_cast<ProcessLabel>(p);
        }
    }
    return s;
}

}  // namespace

double mixture_likelihood(const LineSegment& seg, const CameraParams& params,
                          Measure m, const MixtureConfig& config) {
    auto vps = vanishing_points(params);
    double bg = config.background_range_for(m, params.intrinsics);
    return score_segment(seg, 0, m, vps, params, config, bg).mixture;
}

double objective(std::span<const LineSegment> segments,
                 const CameraParams& params, Measure m,
                 const MixtureConfig& config) {
    if (segments.empty()) throw std::invalid_argument("no segments");
    auto vps = vanishing_points(params);
    double bg = config.background_range_for(m, params.intrinsics);
    double total = 0.0;
    int i = 0;
    for (const auto& seg : segments) {
        double q = score_segment(seg, i++, m, vps, params, config, bg).mixture;
        double w = config.length_weighting ? seg.length() : 1.0;
        total += w * std::log(std::max(q, kDensityFloor));
    }
    return total;
}

double log_deviation_objective(std::span<const LineSegment> segments,
                               const CameraParams& params, Measure m) {
    if (segments.empty()) throw std::invalid_argument("no segments");
    auto vps = vanishing_points(params);
    // Degenerate (zero) deviations are clamped at 1e-6 of the unit.
    constexpr double kClamp = 1e-6;
    double total = 0.0;
    for (const auto& seg : segments) {
        auto devs = manhattan_deviations(seg, m, vps, params.rotation,
                                         params.intrinsics);
        double best = *std::min_element(devs.begin(), devs.end());
        if (std::isinf(best)) best = measure_is_angular(m)
                                         ? 90.0
                                         : params.intrinsics.diagonal_px();
        total += seg.length() * std::log(std::max(best, kClamp));
    }
    // Lower deviation is better; negate so callers maximize uniformly.
    return -total;
}

std::vector<SegmentScore> classify_segments(
    std::span<const LineSegment> segments, const CameraParams& params,
    Measure m, const MixtureConfig& config) {
    auto vps = vanishing_points(params);
    double bg = config.background_range_for(m, params.intrinsics);
    std::vector<SegmentScore> out;
    out.reserve(segments.size());
    for (size_t i = 0; i < segments.size(); ++i)
        out.push_back(score_segment(segments[i], static_cast<int>(i), m, vps,
                                    params, config, bg));
    return out;
}

double fit_exponential(std::span<const double> deviations) {
    if (deviations.size() < 2)
        throw std::invalid_argument("need at least 2 samples");
    double sum = 0.0;
    for (double d : deviations) {
        if (d < 0.0) throw std::invalid_argument("negative deviation sample");
        sum += d;
    }
    if (sum == 0.0) throw std::invalid_argument("all samples are zero");
    return sum / static_cast<double>(deviations.size());
}

}  // namespace mcal
