#include "mcal/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mcal {

CameraParams SynthConfig::camera() const {
    CameraParams p;
    p.intrinsics = {fov_to_focal(hfov_deg, width), width, height};
    p.rotation = euler_to_rotation(angles);
    return p;
}

bool clip_to_image(LineSegment& seg, double w, double h) {
    double x1 = seg.p1.x(), y1 = seg.p1.y();
    double dx = seg.p2.x() - x1, dy = seg.p2.y() - y1;
    double t0 = 0.0, t1 = 1.0;
    double p[4] = {-dx, dx, -dy, dy};
    double q[4] = {x1, w - x1, y1, h - y1};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
            continue;
        }
        double r = q[i] / p[i];
        if (p[i] < 0.0) {
            if (r > t1) return false;
            if (r > t0) t0 = r;
        } else {
            if (r < t0) return false;
            if (r < t1) t1 = r;
        }
    }
    Eigen::Vector2d a(x1 + t0 * dx, y1 + t0 * dy);
    Eigen::Vector2d b(x1 + t1 * dx, y1 + t1 * dy);
    seg = {a, b};
    return true;
}

namespace {

// Project a camera-frame point to pixels; false when behind the camera.
bool project(const Eigen::Matrix3d& k, const Eigen::Vector3d& xc,
             Eigen::Vector2d& px) {
    if (xc.z() <= 1e-6) return false;
    Eigen::Vector3d h = k * xc;
    px = {h.x() / h.z(), h.y() / h.z()};
    return true;
}

}  // namespace

SynthScene generate(const SynthConfig& config) {
    if (config.width <= 0 || config.height <= 0)
        throw std::invalid_argument("image dimensions must be positive");
    for (int c : config.counts)
        if (c < 0) throw std::invalid_argument("segment counts must be >= 0");
    if (config.noise_px < 0.0)
        throw std::invalid_argument("noise sigma must be >= 0");

    CameraParams cam = config.camera();
    Eigen::Matrix3d k = cam.intrinsics.matrix();
    Eigen::Matrix3d r = cam.rotation;
    const double w = config.width, h = config.height;

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> upx(0.0, w), upy(0.0, h);
    std::uniform_real_distribution<double> udepth(2.0, 6.0);
    std::uniform_real_distribution<double> ulen(0.5, 2.0);
    std::uniform_real_distribution<double> ucent(-1.0, 1.0);
    std::uniform_real_distribution<double> uang(0.0, kPi);
    std::normal_distribution<double> noise(0.0, 1.0);

    SynthScene scene;
    scene.truth = config;

    // World Manhattan directions, in column order of R:
    // 0 = horizontal1, 1 = vertical, 2 = horizontal2.
    const Eigen::Vector3d axes[3] = {Eigen::Vector3d::UnitX(),
                                     Eigen::Vector3d::UnitY(),
                                     Eigen::Vector3d::UnitZ()};
    // Map process label -> world axis column.
    const int axis_of[3] = {1, 0, 2};  // Vertical, Horizontal1, Horizontal2

    auto make_manhattan = [&](ProcessLabel label) -> SynthSegment {
        const Eigen::Vector3d& dir = axes[axis_of[static_cast<int>(label)]];
        for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
            // Anchor the segment on the ray through a random pixel.
            Eigen::Vector3d ray =
                cam.intrinsics.inverse_matrix() *
                Eigen::Vector3d(upx(rng), upy(rng), 1.0);
            Eigen::Vector3d xw = r.transpose() * (ray * udepth(rng));
            double half = 0.5 * ulen(rng);
            double shift = ucent(rng) * half;
            Eigen::Vector3d a = xw + (shift - half) * dir;
            Eigen::Vector3d b = xw + (shift + half) * dir;
            Eigen::Vector2d pa, pb;
            if (!project(k, r * a, pa) || !project(k, r * b, pb)) continue;
            LineSegment seg{pa, pb};
            if (!clip_to_image(seg, w, h)) continue;
            if (seg.length() < config.min_length_px) continue;
            return {seg, label};
        }
        throw std::runtime_error("cannot place segments for process " +
                                 std::string(process_name(label)));
    };

    auto make_background = [&]() -> SynthSegment {
        for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
            Eigen::Vector2d c(upx(rng), upy(rng));
            double ang = uang(rng);
            double half = 0.5 * (config.min_length_px + 80.0 * ulen(rng));
            Eigen::Vector2d d(std::cos(ang), std::sin(ang));
            LineSegment seg{c - half * d, c + half * d};
            if (!clip_to_image(seg, w, h)) continue;
            if (seg.length() < config.min_length_px) continue;
            return {seg, ProcessLabel::Background};
        }
        throw std::runtime_error("cannot place background segments");
    };

    const ProcessLabel order[4] = {
        ProcessLabel::Vertical, ProcessLabel::Horizontal1,
        ProcessLabel::Horizontal2, ProcessLabel::Background};
    for (ProcessLabel label : order) {
        int count = config.counts[static_cast<int>(label)];
        for (int i = 0; i < count; ++i)
            scene.segments.push_back(label == ProcessLabel::Background
                                         ? make_background()
                                         : make_manhattan(label));
    }

    if (config.noise_px > 0.0) {
        for (auto& s : scene.segments) {
            LineSegment seg = s.segment;
            for (Eigen::Vector2d* p : {&seg.p1, &seg.p2})
                *p += config.noise_px * Eigen::Vector2d(noise(rng), noise(rng));
            // Keep noisy endpoints inside the frame and non-degenerate.
            seg.p1 = {std::clamp(seg.p1.x(), 0.0, w),
                      std::clamp(seg.p1.y(), 0.0, h)};
            seg.p2 = {std::clamp(seg.p2.x(), 0.0, w),
                      std::clamp(seg.p2.y(), 0.0, h)};
            if ((seg.p2 - seg.p1).norm() > 1e-6) s.segment = seg;
        }
    }
    return scene;
}

std::vector<LineSegment> SynthScene::plain_segments() const {
    std::vector<LineSegment> out;
    out.reserve(segments.size());
    for (const auto& s : segments) out.push_back(s.segment);
    return out;
}

}  // namespace mcal
