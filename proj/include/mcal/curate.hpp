#pragma once

#include "mcal/geometry.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mcal {

// 8-bit RGB raster with binary PPM (P6) I/O.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    static Image solid(int w, int h, std::uint8_t r, std::uint8_t g,
                       std::uint8_t b);
    std::uint8_t* pixel(int x, int y) { return &rgb[3 * (y * width + x)]; }
    const std::uint8_t* pixel(int x, int y) const {
        return &rgb[3 * (y * width + x)];
    }
};

Image read_ppm(const std::string& path);
void write_ppm(const Image& img, const std::string& path);

// One curated planar projection drawn from an equirectangular panorama.
struct ProjectionSpec {
    std::string panorama_id;
    double hfov_deg = 90.0;
    double pan_deg = 0.0;
    double roll_deg = 0.0;
    double tilt_deg = 0.0;
    int width = 640;
    int height = 480;

    double focal_px() const { return fov_to_focal(hfov_deg, width); }
    CameraParams camera() const;
};

struct CurateOptions {
    std::vector<double> fovs{60.0, 75.0, 90.0, 105.0, 120.0};
    int per_fov = 3;
    bool uniform_fov = false;  // U[60,120] instead of the discrete set
    double pan_range = 180.0;
    double roll_range = 10.0;
    double tilt_range = 30.0;
    int width = 640;
    int height = 480;
};

// The per-scene sampling protocol: per_fov draws for each FOV (or
// per_fov * |fovs| uniform draws), angles uniform in their ranges.
std::vector<ProjectionSpec> sample_specs(const std::string& panorama_id,
                                         const CurateOptions& options,
                                         std::mt19937_64& rng);

// Gnomonic projection of an equirectangular panorama.  Longitude wraps,
// latitude clamps; bilinear unless nearest is requested.
Image project(const Image& panorama, const ProjectionSpec& spec,
              bool bilinear = true);

// Direction sampled by an output pixel, in the panorama world frame.
Eigen::Vector3d pixel_direction(const ProjectionSpec& spec, double x,
                                double y);

// Panorama pixel coordinates of a world direction (lon/lat mapping;
// latitude +90 deg is scene-vertical up).
Eigen::Vector2d panorama_coords(const Eigen::Vector3d& world_dir,
                                int pano_width, int pano_height);

// Seeded half/half split of scene ids (training first).
std::pair<std::vector<std::string>, std::vector<std::string>> split_scenes(
    std::vector<std::string> ids, std::uint64_t seed);

}  // namespace mcal
