#include "mcal/curate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mcal {

Image Image::solid(int w, int h, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b) {
    Image img;
    img.width = w;
    img.height = h;
    img.rgb.resize(static_cast<size_t>(w) * h * 3);
    for (size_t i = 0; i < img.rgb.size(); i += 3) {
        img.rgb[i] = r;
        img.rgb[i + 1] = g;
        img.rgb[i + 2] = b;
    }
    return img;
}

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open panorama: " + path);
    std::string magic;
    in >> magic;
    if (magic != "P6")
        throw std::runtime_error("malformed panorama (expected binary PPM): " +
                                 path);
    auto next_int = [&]() {
        int c = in.peek();
        while (c == '#' || std::isspace(c)) {
            if (c == '#') in.ignore(4096, '\n');
            else in.ignore();
            c = in.peek();
        }
        int v;
        in >> v;
        return v;
    };
    Image img;
    img.width = next_int();
    img.height = next_int();
    int maxval = next_int();
    in.ignore();  // single whitespace before raster
    if (img.width <= 0 || img.height <= 0 || maxval != 255)
        throw std::runtime_error("malformed panorama header: " + path);
    img.rgb.resize(static_cast<size_t>(img.width) * img.height * 3);
    in.read(reinterpret_cast<char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.rgb.size()))
        throw std::runtime_error("truncated panorama raster: " + path);
    return img;
}

void write_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image: " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
}

CameraParams ProjectionSpec::camera() const {
    CameraParams p;
    p.intrinsics = {focal_px(), width, height};
    p.rotation = euler_to_rotation({pan_deg, roll_deg, tilt_deg});
    return p;
}

std::vector<ProjectionSpec> sample_specs(const std::string& panorama_id,
                                         const CurateOptions& options,
                                         std::mt19937_64& rng) {
    std::uniform_real_distribution<double> upan(-options.pan_range,
                                                options.pan_range);
    std::uniform_real_distribution<double> uroll(-options.roll_range,
                                                 options.roll_range);
    std::uniform_real_distribution<double> utilt(-options.tilt_range,
                                                 options.tilt_range);
    double fov_lo = *std::min_element(options.fovs.begin(),
                                      options.fovs.end());
    double fov_hi = *std::max_element(options.fovs.begin(),
                                      options.fovs.end());
    std::uniform_real_distribution<double> ufov(fov_lo, fov_hi);

    std::vector<ProjectionSpec> specs;
    for (double fov : options.fovs) {
        for (int i = 0; i < options.per_fov; ++i) {
            ProjectionSpec s;
            s.panorama_id = panorama_id;
            s.hfov_deg = options.uniform_fov ? ufov(rng) : fov;
            s.pan_deg = upan(rng);
            s.roll_deg = uroll(rng);
            s.tilt_deg = utilt(rng);
            s.width = options.width;
            s.height = options.height;
            specs.push_back(s);
        }
    }
    return specs;
}

Eigen::Vector3d pixel_direction(const ProjectionSpec& spec, double x,
                                double y) {
    CameraParams cam = spec.camera();
    Eigen::Vector3d ray =
        cam.intrinsics.inverse_matrix() * Eigen::Vector3d(x, y, 1.0);
    return (cam.rotation.transpose() * ray).normalized();
}

Eigen::Vector2d panorama_coords(const Eigen::Vector3d& world_dir,
                                int pano_width, int pano_height) {
    // World frame: +z forward at zero angles, +y points down (image
    // convention), so scene-up is -y; latitude +90 deg = up.
    double lon = std::atan2(world_dir.x(), world_dir.z());
    double lat = std::asin(std::clamp(-world_dir.y(), -1.0, 1.0));
    double u = (lon / (2.0 * kPi) + 0.5) * pano_width;
    double v = (0.5 - lat / kPi) * pano_height;
    return {u, v};
}

namespace {

// Bilinear sample with longitude wraparound and latitude clamp.
void sample_panorama(const Image& pano, double u, double v, bool bilinear,
                     std::uint8_t* out) {
    auto fetch = [&](int x, int y) {
        x = ((x % pano.width) + pano.width) % pano.width;
        y = std::clamp(y, 0, pano.height - 1);
        return pano.pixel(x, y);
    };
    if (!bilinear) {
        const std::uint8_t* p =
            fetch(static_cast<int>(std::floor(u)),
                  static_cast<int>(std::floor(v)));
        std::copy(p, p + 3, out);
        return;
    }
    double uc = u - 0.5, vc = v - 0.5;  // pixel centers
    int x0 = static_cast<int>(std::floor(uc));
    int y0 = static_cast<int>(std::floor(vc));
    double fx = uc - x0, fy = vc - y0;
    const std::uint8_t* p00 = fetch(x0, y0);
    const std::uint8_t* p10 = fetch(x0 + 1, y0);
    const std::uint8_t* p01 = fetch(x0, y0 + 1);
    const std::uint8_t* p11 = fetch(x0 + 1, y0 + 1);
    for (int c = 0; c < 3; ++c) {
        double val = (1 - fx) * (1 - fy) * p00[c] + fx * (1 - fy) * p10[c] +
                     (1 - fx) * fy * p01[c] + fx * fy * p11[c];
        out[c] = static_cast<std::uint8_t>(std::lround(val));
    }
}

}  // namespace

Image project(const Image& panorama, const ProjectionSpec& spec,
              bool bilinear) {
    if (panorama.width <= 0 || panorama.height <= 0 ||
        panorama.rgb.size() !=
            static_cast<size_t>(panorama.width) * panorama.height * 3)
        throw std::invalid_argument("malformed panorama image");

    Image out;
    out.width = spec.width;
    out.height = spec.height;
    out.rgb.resize(static_cast<size_t>(spec.width) * spec.height * 3);

    CameraParams cam = spec.camera();
    Eigen::Matrix3d back = cam.rotation.transpose() *
                           cam.intrinsics.inverse_matrix();
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            // Sample at pixel centers.
            Eigen::Vector3d dir =
                back * Eigen::Vector3d(x + 0.5, y + 0.5, 1.0);
            Eigen::Vector2d uv =
                panorama_coords(dir.normalized(), panorama.width,
                                panorama.height);
            sample_panorama(panorama, uv.x(), uv.y(), bilinear,
                            out.pixel(x, y));
        }
    }
    return out;
}

std::pair<std::vector<std::string>, std::vector<std::string>> split_scenes(
    std::vector<std::string> ids, std::uint64_t seed) {
    std::sort(ids.begin(), ids.end());
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    size_t half = ids.size() / 2;
    std::vector<std::string> train(ids.begin(), ids.begin() + half);
    std::vector<std::string> test(ids.begin() + half, ids.end());
    return {std::move(train), std::move(test)};
}

}  // namespace mcal
