#pragma once

#include "mcal/likelihood.hpp"

#include <cstdint>
#include <vector>

namespace mcal {

// Synthetic Manhattan scene generation: world-frame axis-aligned 3-D
// segments projected through a known camera, plus uniform background
// clutter.  The ground-truth oracle for end-to-end tests.
struct SynthConfig {
    EulerAngles angles;
    double hfov_deg = 90.0;
    int width = 640;
    int height = 480;
    // (vertical, horizontal1, horizontal2, background)
    std::array<int, 4> counts{30, 30, 30, 5};
    double noise_px = 0.0;
    std::uint64_t seed = 0;
    double min_length_px = 10.0;
    int retry_budget = 200;

    CameraParams camera() const;
};

struct SynthSegment {
    LineSegment segment;
    ProcessLabel label = ProcessLabel::Background;
};

struct SynthScene {
    std::vector<SynthSegment> segments;
    SynthConfig truth;

    std::vector<LineSegment> plain_segments() const;
};

SynthScene generate(const SynthConfig& config);

// Liang-Barsky clip of a segment against [0,w]x[0,h]; false when the
// segment misses the rectangle.
bool clip_to_image(LineSegment& seg, double w, double h);

}  // namespace mcal
