// Acceptance gate: one pass/fail line per criterion, exit code equals
// the number of failed criteria.

#include "mcal/curate.hpp"
#include "mcal/eval.hpp"
#include "mcal/reliability.hpp"
#include "mcal/search.hpp"
#include "mcal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mcal;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct SceneResult {
    SynthConfig truth;
    CalibrationResult full;
};

// Shared scene set for criteria 1 and 6.
std::vector<SceneResult> g_scenes;

SynthConfig random_scene_config(std::mt19937_64& rng,
                                const std::array<int, 4>& counts,
                                double noise) {
    std::uniform_real_distribution<double> pan(-45, 45), roll(-15, 15),
        tilt(-35, 35), fov(50, 130);
    SynthConfig sc;
    sc.angles = {pan(rng), roll(rng), tilt(rng)};
    sc.hfov_deg = fov(rng);
    sc.counts = counts;
    sc.noise_px = noise;
    sc.seed = rng();
    return sc;
}

Outcome criterion1() {
    std::mt19937_64 rng(101);
    auto cfg = MixtureConfig::defaults(Measure::B);
    SearchConfig search;
    int bad = 0;
    double max_wall = 0.0;
    g_scenes.clear();
    for (int i = 0; i < 50; ++i) {
        SynthConfig sc = random_scene_config(rng, {30, 30, 30, 5}, 0.0);
        auto scene = generate(sc);
        auto segs = scene.plain_segments();
        auto res = calibrate(segs, sc.width, sc.height, Measure::B, cfg,
                             search);
        auto err = per_image_errors(res.params, sc.camera());
        if (err.roll_err_deg > 0.2 || err.tilt_err_deg > 0.2 ||
            err.focal_err_pct > 1.0)
            ++bad;
        max_wall = std::max(max_wall, res.wall_time_s);
        g_scenes.push_back({sc, std::move(res)});
    }
    std::ostringstream d;
    d << bad << "/50 scenes out of tolerance (allowed 2), max wall "
      << max_wall << " s (limit 2)";
    return {bad <= 2 && max_wall <= 2.0, d.str()};
}

// Independent exhaustive re-evaluation of the stage-1 grid.
std::vector<std::pair<double, int>> oracle_grid(
    const std::vector<LineSegment>& segs, int w, int h, Measure m,
    const MixtureConfig& cfg, const SearchConfig& s) {
    int k = s.grid_resolution;
    std::vector<std::pair<double, int>> out;
    const ParamBounds dims[4] = {s.pan, s.roll, s.tilt, s.hfov};
    int index = 0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c)
                for (int d = 0; d < k; ++d) {
                    double vals[4];
                    int js[4] = {a, b, c, d};
                    for (int dim = 0; dim < 4; ++dim)
                        vals[dim] = dims[dim].lo + (js[dim] + 0.5) *
                                                       dims[dim].width() / k;
                    CameraParams cam;
                    cam.intrinsics = {fov_to_focal(vals[3], w), w, h};
                    cam.rotation =
                        euler_to_rotation({vals[0], vals[1], vals[2]});
                    double obj = 0.0;
                    auto vps = vanishing_points(cam);
                    double bg = cfg.background_range_for(m, cam.intrinsics);
                    for (const auto& seg : segs) {
                        auto devs = manhattan_deviations(
                            seg, m, vps, cam.rotation, cam.intrinsics);
                        double q =
                            cfg.priors[0] * component_likelihood(
                                                devs[0], cfg.vertical_model) +
                            cfg.priors[1] *
                                component_likelihood(devs[1],
                                                     cfg.horizontal_model) +
                            cfg.priors[2] *
                                component_likelihood(devs[2],
                                                     cfg.horizontal_model) +
                            cfg.priors[3] / bg;
                        obj += seg.length() * std::log(std::max(q, 1e-300));
                    }
                    out.emplace_back(obj, index++);
                }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
    });
    return out;
}

Outcome criterion2() {
    std::mt19937_64 rng(202);
    auto cfg = MixtureConfig::defaults(Measure::B);
    SearchConfig s;
    s.grid_resolution = 3;
    int mismatches = 0;
    double worst_rel = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        SynthConfig sc = random_scene_config(rng, {2, 2, 1, 0}, 0.0);
        auto scene = generate(sc);
        auto segs = scene.plain_segments();
        auto grid = grid_stage(segs, sc.width, sc.height, Measure::B, cfg, s);
        auto oracle = oracle_grid(segs, sc.width, sc.height, Measure::B, cfg,
                                  s);
        if (grid.proposals.size() != oracle.size()) return {false, "size"};
        for (size_t i = 0; i < oracle.size(); ++i) {
            if (grid.proposals[i].linear_index != oracle[i].second)
                ++mismatches;
            double rel = std::abs(grid.proposals[i].objective -
                                  oracle[i].first) /
                         std::max(std::abs(oracle[i].first), 1e-300);
            worst_rel = std::max(worst_rel, rel);
        }
    }
    std::ostringstream d;
    d << mismatches << " ranking mismatches, worst relative objective gap "
      << worst_rel;
    return {mismatches == 0 && worst_rel <= 1e-12, d.str()};
}

Outcome criterion3() {
    double worst = 0.0;
    for (double lambda : {1.46, 0.57, 94.46, 17.26, 0.39, 0.53, 0.80}) {
        LikelihoodModel m{LikelihoodModel::Family::Exponential, lambda};
        for (double x : {0.0, lambda, 2.0 * lambda}) {
            double expect = std::exp(-x / lambda) / lambda;
            worst = std::max(worst, std::abs(component_likelihood(x, m) -
                                             expect) /
                                        expect);
        }
    }
    LikelihoodModel g{LikelihoodModel::Family::Gaussian, 1.0};
    for (double x : {0.0, 1.0, 2.0}) {
        double expect = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
        worst = std::max(worst,
                         std::abs(component_likelihood(x, g) - expect) /
                             expect);
    }

    using F = LikelihoodModel::Family;
    auto is = [](const LikelihoodModel& m, F f, double p) {
        return m.family == f && m.param == p;
    };
    bool defaults_ok =
        is(MixtureConfig::defaults(Measure::A).horizontal_model,
           F::Exponential, 94.46) &&
        is(MixtureConfig::defaults(Measure::A).vertical_model,
           F::Exponential, 17.26) &&
        is(MixtureConfig::defaults(Measure::B).horizontal_model,
           F::Exponential, 1.46) &&
        is(MixtureConfig::defaults(Measure::B).vertical_model,
           F::Exponential, 0.57) &&
        is(MixtureConfig::defaults(Measure::C).horizontal_model,
           F::Exponential, 0.39) &&
        is(MixtureConfig::defaults(Measure::C).vertical_model,
           F::Exponential, 0.53) &&
        is(MixtureConfig::defaults(Measure::D).horizontal_model, F::Gaussian,
           1.00) &&
        is(MixtureConfig::defaults(Measure::D).vertical_model, F::Gaussian,
           1.00) &&
        is(MixtureConfig::defaults(Measure::E).horizontal_model,
           F::Exponential, 0.80) &&
        is(MixtureConfig::defaults(Measure::E).vertical_model,
           F::Exponential, 0.57);

    std::ostringstream d;
    d << "worst relative density gap " << worst << ", defaults "
      << (defaults_ok ? "exact" : "WRONG");
    return {worst <= 1e-12 && defaults_ok, d.str()};
}

Outcome criterion4() {
    std::mt19937_64 rng(404);
    SearchConfig search;
    double mae[3] = {0.0, 0.0, 0.0};  // measures a, b, e
    const Measure ms[3] = {Measure::A, Measure::B, Measure::E};
    const int n = 200;
    for (int i = 0; i < n; ++i) {
        SynthConfig sc = random_scene_config(rng, {12, 12, 12, 9}, 1.0);
        auto scene = generate(sc);
        auto segs = scene.plain_segments();
        for (int j = 0; j < 3; ++j) {
            auto cfg = MixtureConfig::defaults(ms[j]);
            auto res = calibrate(segs, sc.width, sc.height, ms[j], cfg,
                                 search);
            auto err = per_image_errors(res.params, sc.camera());
            mae[j] += err.focal_err_pct / n;
        }
    }
    std::ostringstream d;
    d << "focal MAE%: a=" << mae[0] << " b=" << mae[1] << " e=" << mae[2];
    return {mae[0] > mae[1] && mae[1] <= mae[2], d.str()};
}

Outcome criterion5() {
    std::mt19937_64 rng(505);
    auto cfg = MixtureConfig::defaults(Measure::B);
    SearchConfig search;
    std::uniform_int_distribution<int> dir_count(2, 25), bg_count(0, 15);
    const double noises[5] = {0.0, 0.5, 1.0, 2.0, 3.0};
    std::vector<TrainingRow> rows;
    for (int i = 0; i < 500; ++i) {
        std::array<int, 4> counts{dir_count(rng), dir_count(rng),
                                  dir_count(rng), bg_count(rng)};
        SynthConfig sc = random_scene_config(rng, counts, noises[i % 5]);
        auto scene = generate(sc);
        auto segs = scene.plain_segments();
        auto res = calibrate(segs, sc.width, sc.height, Measure::B, cfg,
                             search);
        auto err = per_image_errors(res.params, sc.camera());
        rows.push_back({res.cues, err.roll_err_deg, err.tilt_err_deg,
                        err.focal_err_pct});
    }

    int good_reps = 0;
    std::ostringstream d;
    for (unsigned rep = 0; rep < 5; ++rep) {
        std::vector<size_t> order(rows.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::mt19937_64 shuffle_rng(rep + 1);
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        size_t half = rows.size() / 2;
        std::vector<TrainingRow> train;
        std::vector<size_t> test;
        for (size_t i = 0; i < order.size(); ++i)
            (i < half ? (void)train.push_back(rows[order[i]])
                      : (void)test.push_back(order[i]));
        auto model = ReliabilityModel::fit(train, rep);
        std::vector<double> predicted, actual;
        for (size_t idx : test) {
            predicted.push_back(model.predict(rows[idx].cues)[2]);
            actual.push_back(rows[idx].focal_err);
        }
        double seq[4];
        const double fracs[4] = {25, 50, 75, 100};
        for (int fi = 0; fi < 4; ++fi) {
            auto gated = gate_indices(predicted, fracs[fi]);
            double s = 0.0;
            for (size_t g : gated) s += actual[g];
            seq[fi] = s / gated.size();
        }
        bool ok = seq[0] < seq[3] && seq[0] <= seq[1] && seq[1] <= seq[2] &&
                  seq[2] <= seq[3];
        good_reps += ok;
        if (rep == 0)
            d << "rep0 focal MAE% 25/50/75/100: " << seq[0] << "/" << seq[1]
              << "/" << seq[2] << "/" << seq[3] << ", ";
    }
    d << good_reps << "/5 reps monotone with strict 25%<100% (need 4)";
    return {good_reps >= 4, d.str()};
}

Outcome criterion6() {
    auto cfg = MixtureConfig::defaults(Measure::B);
    SearchConfig fast = SearchConfig::fast();
    std::vector<double> t_full, t_fast;
    double roll_full = 0.0, roll_fast = 0.0;
    double tilt_full = 0.0, tilt_fast = 0.0;
    for (const auto& s : g_scenes) {
        auto scene = generate(s.truth);
        auto segs = scene.plain_segments();
        auto res = calibrate(segs, s.truth.width, s.truth.height, Measure::B,
                             cfg, fast);
        auto ef = per_image_errors(res.params, s.truth.camera());
        auto eu = per_image_errors(s.full.params, s.truth.camera());
        t_fast.push_back(res.wall_time_s);
        t_full.push_back(s.full.wall_time_s);
        roll_fast += ef.roll_err_deg;
        tilt_fast += ef.tilt_err_deg;
        roll_full += eu.roll_err_deg;
        tilt_full += eu.tilt_err_deg;
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    double ratio = median(t_fast) / median(t_full);
    double roll_infl = roll_fast / std::max(roll_full, 1e-12);
    double tilt_infl = tilt_fast / std::max(tilt_full, 1e-12);
    std::ostringstream d;
    d << "median time ratio " << ratio << " (limit 0.40), MAE inflation roll "
      << roll_infl << " tilt " << tilt_infl << " (limit 2)";
    return {ratio <= 0.40 && roll_infl <= 2.0 && tilt_infl <= 2.0, d.str()};
}

Outcome criterion7() {
    std::mt19937_64 rng(707);
    CurateOptions opt;
    bool ok = true;
    std::ostringstream d;
    for (int p = 0; p < 2; ++p) {
        auto specs = sample_specs("pano" + std::to_string(p), opt, rng);
        if (specs.size() != 15) ok = false;
        std::multiset<double> fovs;
        for (const auto& s : specs) {
            fovs.insert(s.hfov_deg);
            if (std::abs(s.pan_deg) > 180.0 || std::abs(s.roll_deg) > 10.0 ||
                std::abs(s.tilt_deg) > 30.0)
                ok = false;
        }
        std::multiset<double> want;
        for (double f : {60.0, 75.0, 90.0, 105.0, 120.0})
            for (int r = 0; r < 3; ++r) want.insert(f);
        if (fovs != want) ok = false;
    }
    d << (ok ? "15 specs/scene, FOV multiset and angle ranges exact"
             : "spec protocol violated");

    // Identity: the panorama texel at lon=lat=0 lands on the image
    // center of a zero-angle view.  Odd view size puts the center pixel
    // sample exactly on the optical axis; a 2x2 mark covers bilinear
    // support at (u,v) = (pw/2, ph/2).
    Image pano = Image::solid(64, 32, 10, 10, 10);
    for (int y : {15, 16})
        for (int x : {31, 32}) {
            auto* px = pano.pixel(x, y);
            px[0] = 200;
            px[1] = 40;
            px[2] = 40;
        }
    ProjectionSpec spec;
    spec.hfov_deg = 90.0;
    spec.width = 81;
    spec.height = 61;
    Image view = project(pano, spec);
    const auto* c = view.pixel(40, 30);
    bool center_ok = c[0] == 200 && c[1] == 40 && c[2] == 40;
    if (!center_ok) {
        ok = false;
        d << ", center pixel missed the mark";
    } else {
        d << ", projection identity exact";
    }
    return {ok, d.str()};
}

Outcome criterion8() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> pan(-180, 180), roll(-45, 45),
        tilt(-80, 80), fov(40, 140), coord(10, 600), scale(0.1, 10.0);
    int fails = 0;
    std::ostringstream d;

    // Rotation round trips.
    for (int i = 0; i < 1000; ++i) {
        EulerAngles e{pan(rng), roll(rng), tilt(rng)};
        Eigen::Matrix3d r = euler_to_rotation(e);
        Eigen::Matrix3d r2 = euler_to_rotation(rotation_to_euler(r));
        if ((r - r2).norm() > 1e-9) ++fails;
    }
    d << "rotation " << fails;
    int total = fails;

    auto random_camera = [&](std::mt19937_64& g) {
        CameraParams cam;
        cam.intrinsics = {fov_to_focal(fov(g), 640), 640, 480};
        cam.rotation = euler_to_rotation(
            {pan(g) / 4.0, roll(g) / 3.0, tilt(g) / 2.3});
        return cam;
    };
    auto random_segment = [&](std::mt19937_64& g) {
        LineSegment s{{coord(g), coord(g) * 0.75}, {coord(g), coord(g) * 0.75}};
        while (s.length() < 1.0) s.p2 = {coord(g), coord(g) * 0.75};
        return s;
    };

    // Homogeneous scale invariance, all five measures.
    fails = 0;
    for (int i = 0; i < 1000; ++i) {
        auto cam = random_camera(rng);
        auto vps = vanishing_points(cam);
        auto seg = random_segment(rng);
        int col = i % 3;
        double s = scale(rng) * (i % 2 ? 1.0 : -1.0);
        for (Measure m : {Measure::A, Measure::B, Measure::C, Measure::D,
                          Measure::E}) {
            double base = deviation(m, seg, vps[col], cam.rotation.col(col),
                                    cam.intrinsics);
            double scaled = deviation(m, seg, s * vps[col],
                                      s * cam.rotation.col(col),
                                      cam.intrinsics);
            if (std::isinf(base) != std::isinf(scaled)) ++fails;
            else if (!std::isinf(base) &&
                     std::abs(base - scaled) >
                         1e-9 * std::max(1.0, std::abs(base)))
                ++fails;
        }
    }
    d << "/scale " << fails;
    total += fails;

    // d dominates c.
    fails = 0;
    for (int i = 0; i < 1000; ++i) {
        auto cam = random_camera(rng);
        auto vps = vanishing_points(cam);
        auto seg = random_segment(rng);
        double c = deviation_c(seg, vps[i % 3]);
        double dd = deviation_d(seg, vps[i % 3]);
        if (std::isfinite(c) && std::isfinite(dd) && dd < c - 1e-9) ++fails;
    }
    d << "/d>=c " << fails;
    total += fails;

    // Posterior responsibilities normalize.
    fails = 0;
    auto cfg = MixtureConfig::defaults(Measure::B);
    int checked = 0;
    while (checked < 1000) {
        SynthConfig sc = random_scene_config(rng, {4, 4, 4, 2}, 1.0);
        auto scene = generate(sc);
        auto segs = scene.plain_segments();
        auto scores = classify_segments(segs, sc.camera(), Measure::B, cfg);
        for (const auto& s : scores) {
            double sum = 0.0;
            for (double p : s.process_likelihood) sum += p;
            if (std::abs(sum / s.mixture - 1.0) > 1e-12) ++fails;
            ++checked;
        }
    }
    d << "/posterior " << fails;
    total += fails;

    // Gate nestedness.
    fails = 0;
    std::uniform_int_distribution<int> nsize(1, 50);
    std::uniform_real_distribution<double> err(0, 20), frac(1.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        int n = nsize(rng);
        std::vector<double> pred(n);
        for (double& p : pred) p = err(rng);
        double f1 = frac(rng), f2 = frac(rng);
        if (f1 > f2) std::swap(f1, f2);
        auto lo = gate_indices(pred, f1);
        auto hi = gate_indices(pred, f2);
        std::set<size_t> hiset(hi.begin(), hi.end());
        for (size_t idx : lo)
            if (!hiset.count(idx)) { ++fails; break; }
    }
    d << "/nest " << fails;
    total += fails;

    // Entropy shift invariance.
    fails = 0;
    std::uniform_int_distribution<int> vlen(2, 20);
    std::uniform_real_distribution<double> val(-50, 50), shift(-100, 100);
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> v(vlen(rng));
        for (double& x : v) x = val(rng);
        double c = shift(rng);
        std::vector<double> w = v;
        for (double& x : w) x += c;
        if (std::abs(grid_entropy(v) - grid_entropy(w)) > 1e-9) ++fails;
    }
    d << "/entropy " << fails << " failures";
    total += fails;

    return {total == 0, d.str()};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {"criterion 1 (noiseless recovery)", criterion1},
        {"criterion 2 (grid oracle equivalence)", criterion2},
        {"criterion 3 (likelihood unit conformance)", criterion3},
        {"criterion 4 (measure ordering)", criterion4},
        {"criterion 5 (reliability gating trend)", criterion5},
        {"criterion 6 (fast mode contract)", criterion6},
        {"criterion 7 (curation protocol)", criterion7},
        {"criterion 8 (invariant suites)", criterion8},
    };
    int failed = 0;
    for (const auto& e : entries) {
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("%s: %s  [%s]\n", e.name, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed;
}
