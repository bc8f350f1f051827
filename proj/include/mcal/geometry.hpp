#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace mcal {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Pinhole intrinsics with square pixels, zero skew and the principal
// point fixed at the image centre.  The focal length is the single
// free intrinsic parameter.
struct Intrinsics {
    double focal_px = 0.0;
    int width = 0;
    int height = 0;

    Eigen::Matrix3d matrix() const;
    Eigen::Matrix3d inverse_matrix() const;
    Eigen::Vector2d principal_point() const {
        return {width / 2.0, height / 2.0};
    }
    double diagonal_px() const;
    bool valid() const { return focal_px > 0.0 && width > 0 && height > 0; }
};

// Camera orientation as pan/roll/tilt in degrees.
// Applied in the order pan (about the scene vertical axis), then tilt
// (about the camera x-axis), then roll (about the optical axis), i.e.
// R = Rz(roll) * Rx(tilt) * Ry(pan) acting on world-frame vectors.
struct EulerAngles {
    double pan_deg = 0.0;
    double roll_deg = 0.0;
    double tilt_deg = 0.0;
};

struct CameraParams {
    Intrinsics intrinsics;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();

    EulerAngles euler() const;
};

// FOV = 2*atan(w / 2f).  Throws std::domain_error outside (0, 180).
double fov_to_focal(double hfov_deg, double width_px);
double focal_to_fov(double focal_px, double width_px);

Eigen::Matrix3d euler_to_rotation(const EulerAngles& e);
EulerAngles rotation_to_euler(const Eigen::Matrix3d& r);

bool is_rotation(const Eigen::Matrix3d& r, double tol = 1e-9);

// The three Manhattan vanishing points x_i = K * R_i in homogeneous
// image coordinates.  Column order: 0 = horizontal1, 1 = vertical,
// 2 = horizontal2.
std::array<Eigen::Vector3d, 3> vanishing_points(const CameraParams& params);

inline constexpr double kAtInfinityEps = 1e-12;
bool at_infinity(const Eigen::Vector3d& vp_h, double eps = kAtInfinityEps);

// Rotation angle of r in degrees, in [0, 180].
double rotation_angle_deg(const Eigen::Matrix3d& r);

enum class FrameSymmetry {
    GravityAligned,  // proper rotations fixing the vertical up-direction
    FullCube,        // all 24 proper rotations of the cube
};

const std::vector<Eigen::Matrix3d>& manhattan_symmetries(FrameSymmetry sym);

// Minimum rotation angle aligning the two Manhattan frames, over the
// chosen symmetry group.  Degrees, in [0, 180].
double frame_angle_error(const Eigen::Matrix3d& estimated,
                         const Eigen::Matrix3d& truth,
                         FrameSymmetry sym = FrameSymmetry::GravityAligned);

}  // namespace mcal
