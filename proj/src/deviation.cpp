#include "mcal/deviation.hpp"

#include <cmath>
#include <stdexcept>

namespace mcal {

Measure measure_from_char(char c) {
    switch (c) {
        case 'a': case 'A': return Measure::A;
        case 'b': case 'B': return Measure::B;
        case 'c': case 'C': return Measure::C;
        case 'd': case 'D': return Measure::D;
        case 'e': case 'E': return Measure::E;
    }
    throw std::invalid_argument("unknown deviation measure");
}

char measure_to_char(Measure m) {
    return "abcde"[static_cast<int>(m)];
}

bool measure_is_angular(Measure m) {
    return m == Measure::B || m == Measure::E;
}

namespace {

// Direction of the vanishing line anchored at the midpoint; zero norm
// flags the degenerate coincident case.
Eigen::Vector2d vline_direction(const LineSegment& seg,
                                const Eigen::Vector3d& vp_h) {
    if (at_infinity(vp_h)) return {vp_h.x(), vp_h.y()};
    Eigen::Vector2d vp(vp_h.x() / vp_h.z(), vp_h.y() / vp_h.z());
    return vp - seg.midpoint();
}

}  // namespace

Eigen::Vector3d vanishing_line(const LineSegment& seg,
                               const Eigen::Vector3d& vp_h) {
    Eigen::Vector2d m = seg.midpoint();
    Eigen::Vector3d mh(m.x(), m.y(), 1.0);
    Eigen::Vector3d line = mh.cross(vp_h);
    if (line.head<2>().norm() < 1e-12 * (1.0 + vp_h.norm()))
        throw std::invalid_argument(
            "vanishing point coincides with segment midpoint");
    return line;
}

double deviation_a(const LineSegment& seg, const Eigen::Vector3d& vp_h) {
    if (at_infinity(vp_h)) return kInfiniteDeviation;
    Eigen::Vector3d p1h(seg.p1.x(), seg.p1.y(), 1.0);
    Eigen::Vector3d p2h(seg.p2.x(), seg.p2.y(), 1.0);
    Eigen::Vector3d line = p1h.cross(p2h);
    Eigen::Vector2d vp(vp_h.x() / vp_h.z(), vp_h.y() / vp_h.z());
    return std::abs(line.x() * vp.x() + line.y() * vp.y() + line.z()) /
           line.head<2>().norm();
}

double deviation_b(const LineSegment& seg, const Eigen::Vector3d& vp_h) {
    Eigen::Vector2d v = vline_direction(seg, vp_h);
    double n = v.norm();
    if (n < 1e-12 * (1.0 + vp_h.norm()))
        throw std::invalid_argument(
            "vanishing point coincides with segment midpoint");
    Eigen::Vector2d d = seg.direction();
    Eigen::Vector2d u = v / n;
    // atan2 keeps precision for near-parallel directions where acos of
    // the dot product loses it.
    double cross = std::abs(d.x() * u.y() - d.y() * u.x());
    double dot = std::abs(d.dot(u));
    return rad2deg(std::atan2(cross, dot));
}

double deviation_c(const LineSegment& seg, const Eigen::Vector3d& vp_h) {
    Eigen::Vector3d line = vanishing_line(seg, vp_h);
    Eigen::Vector3d p1h(seg.p1.x(), seg.p1.y(), 1.0);
    return std::abs(line.dot(p1h)) / line.head<2>().norm();
}

double deviation_d(const LineSegment& seg, const Eigen::Vector3d& vp_h) {
    Eigen::Vector3d line = vanishing_line(seg, vp_h);
    Eigen::Vector2d d = seg.direction();
    Eigen::Vector2d n(-d.y(), d.x());  // perpendicular to the segment
    double denom = line.x() * n.x() + line.y() * n.y();
    Eigen::Vector3d p1h(seg.p1.x(), seg.p1.y(), 1.0);
    double num = line.dot(p1h);
    if (std::abs(denom) < 1e-12 * line.head<2>().norm())
        return num == 0.0 ? 0.0 : kInfiniteDeviation;
    return std::abs(num / denom);
}

double deviation_e(const LineSegment& seg, const Eigen::Vector3d& vp_direction,
                   const Intrinsics& intr) {
    Eigen::Matrix3d ki = intr.inverse_matrix();
    Eigen::Vector3d r1 = ki * Eigen::Vector3d(seg.p1.x(), seg.p1.y(), 1.0);
    Eigen::Vector3d r2 = ki * Eigen::Vector3d(seg.p2.x(), seg.p2.y(), 1.0);
    Eigen::Vector3d n = r1.cross(r2);
    double nn = n.norm();
    if (nn < 1e-15) throw std::invalid_argument("degenerate segment rays");
    double s = std::clamp(n.dot(vp_direction.normalized()) / nn, -1.0, 1.0);
    return std::abs(rad2deg(std::asin(s)));
}

double deviation(Measure m, const LineSegment& seg,
                 const Eigen::Vector3d& vp_h,
                 const Eigen::Vector3d& vp_direction, const Intrinsics& intr) {
    try {
        switch (m) {
            case Measure::A: return deviation_a(seg, vp_h);
            case Measure::B: return deviation_b(seg, vp_h);
            case Measure::C: return deviation_c(seg, vp_h);
            case Measure::D: return deviation_d(seg, vp_h);
            case Measure::E: return deviation_e(seg, vp_direction, intr);
        }
    } catch (const std::invalid_argument&) {
        return kInfiniteDeviation;
    }
    return kInfiniteDeviation;
}

}  // namespace mcal
