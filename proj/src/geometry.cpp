#include "mcal/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mcal {

Eigen::Matrix3d Intrinsics::matrix() const {
    Eigen::Matrix3d k;
    k << focal_px, 0, width / 2.0,
         0, focal_px, height / 2.0,
         0, 0, 1;
    return k;
}

Eigen::Matrix3d Intrinsics::inverse_matrix() const {
    Eigen::Matrix3d ki;
    ki << 1.0 / focal_px, 0, -width / (2.0 * focal_px),
          0, 1.0 / focal_px, -height / (2.0 * focal_px),
          0, 0, 1;
    return ki;
}

double Intrinsics::diagonal_px() const {
    return std::hypot(static_cast<double>(width), static_cast<double>(height));
}

EulerAngles CameraParams::euler() const { return rotation_to_euler(rotation); }

double fov_to_focal(double hfov_deg, double width_px) {
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0))
        throw std::domain_error("hfov must lie in (0, 180) degrees");
    return width_px / (2.0 * std::tan(deg2rad(hfov_deg) / 2.0));
}

double focal_to_fov(double focal_px, double width_px) {
    if (!(focal_px > 0.0))
        throw std::domain_error("focal length must be positive");
    return rad2deg(2.0 * std::atan(width_px / (2.0 * focal_px)));
}

namespace {

Eigen::Matrix3d rot_x(double rad) {
    Eigen::Matrix3d m;
    m << 1, 0, 0,
         0, std::cos(rad), -std::sin(rad),
         0, std::sin(rad), std::cos(rad);
    return m;
}

Eigen::Matrix3d rot_y(double rad) {
    Eigen::Matrix3d m;
    m << std::cos(rad), 0, std::sin(rad),
         0, 1, 0,
         -std::sin(rad), 0, std::cos(rad);
    return m;
}

Eigen::Matrix3d rot_z(double rad) {
    Eigen::Matrix3d m;
    m << std::cos(rad), -std::sin(rad), 0,
         std::sin(rad), std::cos(rad), 0,
         0, 0, 1;
    return m;
}

}  // namespace

Eigen::Matrix3d euler_to_rotation(const EulerAngles& e) {
    return rot_z(deg2rad(e.roll_deg)) * rot_x(deg2rad(e.tilt_deg)) *
           rot_y(deg2rad(e.pan_deg));
}

EulerAngles rotation_to_euler(const Eigen::Matrix3d& r) {
    // R = Rz(roll) * Rx(tilt) * Ry(pan); see euler_to_rotation.
    EulerAngles e;
    double st = std::clamp(r(2, 1), -1.0, 1.0);
    e.tilt_deg = rad2deg(std::asin(st));
    e.roll_deg = rad2deg(std::atan2(-r(0, 1), r(1, 1)));
    e.pan_deg = rad2deg(std::atan2(-r(2, 0), r(2, 2)));
    return e;
}

bool is_rotation(const Eigen::Matrix3d& r, double tol) {
    Eigen::Matrix3d rtr = r.transpose() * r;
    if ((rtr - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol)
        return false;
    return std::abs(r.determinant() - 1.0) <= tol;
}

std::array<Eigen::Vector3d, 3> vanishing_points(const CameraParams& params) {
    Eigen::Matrix3d k = params.intrinsics.matrix();
    std::array<Eigen::Vector3d, 3> vps;
    for (int i = 0; i < 3; ++i) vps[i] = k * params.rotation.col(i);
    return vps;
}

bool at_infinity(const Eigen::Vector3d& vp_h, double eps) {
    double n = vp_h.norm();
    if (n == 0.0) return true;
    return std::abs(vp_h.z()) / n < eps;
}

double rotation_angle_deg(const Eigen::Matrix3d& r) {
    double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
    return rad2deg(std::acos(c));
}

namespace {

std::vector<Eigen::Matrix3d> build_symmetries(FrameSymmetry sym) {
    // Signed permutation matrices with det +1; the gravity-aligned
    // subgroup additionally fixes the vertical axis (+e1).
    std::vector<Eigen::Matrix3d> out;
    int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& p : perms) {
        for (int sbits = 0; sbits < 8; ++sbits) {
            Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
            for (int c = 0; c < 3; ++c)
                s(p[c], c) = (sbits >> c) & 1 ? -1.0 : 1.0;
            if (std::abs(s.determinant() - 1.0) > 0.5) continue;
            if (sym == FrameSymmetry::GravityAligned &&
                !(s(1, 1) == 1.0 && s(0, 1) == 0.0 && s(2, 1) == 0.0))
                continue;
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace

const std::vector<Eigen::Matrix3d>& manhattan_symmetries(FrameSymmetry sym) {
    static const std::vector<Eigen::Matrix3d> gravity =
        build_symmetries(FrameSymmetry::GravityAligned);
    static const std::vector<Eigen::Matrix3d> cube =
        build_symmetries(FrameSymmetry::FullCube);
    return sym == FrameSymmetry::GravityAligned ? gravity : cube;
}

double frame_angle_error(const Eigen::Matrix3d& estimated,
                         const Eigen::Matrix3d& truth, FrameSymmetry sym) {
    double best = 180.0;
    for (const auto& s : manhattan_symmetries(sym)) {
        double a = rotation_angle_deg(estimated.transpose() * truth * s);
        best = std::min(best, a);
    }
    return best;
}

}  // namespace mcal
