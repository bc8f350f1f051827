#pragma once

#include "mcal/geometry.hpp"

#include <limits>

namespace mcal {

struct LineSegment {
    Eigen::Vector2d p1;
    Eigen::Vector2d p2;

    double length() const { return (p2 - p1).norm(); }
    Eigen::Vector2d midpoint() const { return 0.5 * (p1 + p2); }
    Eigen::Vector2d direction() const { return (p2 - p1).normalized(); }
};

// The five deviation measures between a segment and a hypothesized
// vanishing point.  a/c/d are in pixels, b/e in degrees.
enum class Measure { A, B, C, D, E };

Measure measure_from_char(char c);
char measure_to_char(Measure m);
bool measure_is_angular(Measure m);

// Sentinel for degenerate configurations (vp at infinity for measure a,
// parallel ray for measure d, vp coincident with the midpoint).  The
// likelihood layer maps it to density 0.
inline constexpr double kInfiniteDeviation =
    std::numeric_limits<double>::infinity();

// Homogeneous line through the segment midpoint and the vp.
// Throws std::invalid_argument when the vp coincides with the midpoint.
Eigen::Vector3d vanishing_line(const LineSegment& seg,
                               const Eigen::Vector3d& vp_h);

double deviation_a(const LineSegment& seg, const Eigen::Vector3d& vp_h);
double deviation_b(const LineSegment& seg, const Eigen::Vector3d& vp_h);
double deviation_c(const LineSegment& seg, const Eigen::Vector3d& vp_h);
double deviation_d(const LineSegment& seg, const Eigen::Vector3d& vp_h);
double deviation_e(const LineSegment& seg, const Eigen::Vector3d& vp_direction,
                   const Intrinsics& intr);

// Dispatch on the measure tag.  Degenerate cases return the sentinel
// instead of throwing.  vp_h is the homogeneous image point K*R_i and
// vp_direction the corresponding camera-frame unit direction R_i.
double deviation(Measure m, const LineSegment& seg,
                 const Eigen::Vector3d& vp_h,
                 const Eigen::Vector3d& vp_direction, const Intrinsics& intr);

}  // namespace mcal
