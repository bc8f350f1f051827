// Python bindings for the main operations: synthesis, calibration,
// deviation measures and the reliability predictor.

#include "mcal/eval.hpp"
#include "mcal/reliability.hpp"
#include "mcal/search.hpp"
#include "mcal/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

namespace py = pybind11;
using namespace mcal;

namespace {

std::vector<LineSegment> segments_from_array(
    const Eigen::Ref<const Eigen::MatrixXd>& arr) {
    if (arr.cols() != 4)
        throw std::invalid_argument("segments must be an Nx4 array");
    std::vector<LineSegment> segs(arr.rows());
    for (Eigen::Index i = 0; i < arr.rows(); ++i)
        segs[i] = {{arr(i, 0), arr(i, 1)}, {arr(i, 2), arr(i, 3)}};
    return segs;
}

Eigen::MatrixXd segments_to_array(const std::vector<SynthSegment>& segs) {
    Eigen::MatrixXd out(segs.size(), 4);
    for (size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i].segment;
        out.row(i) << s.p1.x(), s.p1.y(), s.p2.x(), s.p2.y();
    }
    return out;
}

py::dict result_dict(const CalibrationResult& res) {
    EulerAngles e = res.params.euler();
    py::dict d;
    d["pan_deg"] = e.pan_deg;
    d["roll_deg"] = e.roll_deg;
    d["tilt_deg"] = e.tilt_deg;
    d["hfov_deg"] = res.hfov_deg;
    d["focal_px"] = res.params.intrinsics.focal_px;
    d["objective"] = res.objective;
    d["degenerate_scene"] = res.degenerate_scene;
    d["wall_time_s"] = res.wall_time_s;
    d["cues"] = py::make_tuple(res.cues.min_segments, res.cues.grid_entropy,
                               res.cues.mean_loglik);
    py::list assigned;
    for (const auto& s : res.scores) assigned.append(process_name(s.assigned));
    d["assignments"] = std::move(assigned);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Manhattan-world focal length and rotation estimation";

    m.def("fov_to_focal", &fov_to_focal, py::arg("hfov_deg"),
          py::arg("width_px"));
    m.def("focal_to_fov", &focal_to_fov, py::arg("focal_px"),
          py::arg("width_px"));
    m.def("euler_to_rotation", [](double pan, double roll, double tilt) {
        return euler_to_rotation({pan, roll, tilt});
    }, py::arg("pan_deg"), py::arg("roll_deg"), py::arg("tilt_deg"));
    m.def("rotation_to_euler", [](const Eigen::Matrix3d& r) {
        EulerAngles e = rotation_to_euler(r);
        return py::make_tuple(e.pan_deg, e.roll_deg, e.tilt_deg);
    }, py::arg("rotation"));
    m.def("fold_pan", &fold_pan, py::arg("deg"));

    m.def(
        "deviations",
        [](const Eigen::Ref<const Eigen::MatrixXd>& segments, char measure,
           double pan, double roll, double tilt, double hfov, int width,
           int height) {
            Measure mm = measure_from_char(measure);
            CameraParams cam;
            cam.intrinsics = {fov_to_focal(hfov, width), width, height};
            cam.rotation = euler_to_rotation({pan, roll, tilt});
            auto vps = vanishing_points(cam);
            auto segs = segments_from_array(segments);
            Eigen::MatrixXd out(segs.size(), 3);
            for (size_t i = 0; i < segs.size(); ++i) {
                auto devs = manhattan_deviations(segs[i], mm, vps,
                                                 cam.rotation,
                                                 cam.intrinsics);
                out.row(i) << devs[0], devs[1], devs[2];
            }
            return out;
        },
        py::arg("segments"), py::arg("measure"), py::arg("pan_deg"),
        py::arg("roll_deg"), py::arg("tilt_deg"), py::arg("hfov_deg"),
        py::arg("width"), py::arg("height"),
        "Per-segment deviations against the three Manhattan directions "
        "(vertical, horizontal1, horizontal2).");

    m.def(
        "calibrate",
        [](const Eigen::Ref<const Eigen::MatrixXd>& segments, int width,
           int height, char measure, bool fast) {
            Measure mm = measure_from_char(measure);
            auto segs = segments_from_array(segments);
            auto cfg = MixtureConfig::defaults(mm);
            SearchConfig search =
                fast ? SearchConfig::fast() : SearchConfig{};
            return result_dict(
                calibrate(segs, width, height, mm, cfg, search));
        },
        py::arg("segments"), py::arg("width"), py::arg("height"),
        py::arg("measure") = 'b', py::arg("fast") = false,
        "Estimate pan/roll/tilt and focal length from an Nx4 array of "
        "segment endpoints (x1, y1, x2, y2).");

    m.def(
        "synth_scene",
        [](double pan, double roll, double tilt, double hfov,
           std::array<int, 4> counts, double noise_px, std::uint64_t seed,
           int width, int height) {
            SynthConfig sc;
            sc.angles = {pan, roll, tilt};
            sc.hfov_deg = hfov;
            sc.counts = counts;
            sc.noise_px = noise_px;
            sc.seed = seed;
            sc.width = width;
            sc.height = height;
            auto scene = generate(sc);
            py::dict d;
            d["segments"] = segments_to_array(scene.segments);
            py::list labels;
            for (const auto& s : scene.segments)
                labels.append(process_name(s.label));
            d["labels"] = std::move(labels);
            d["focal_px"] = sc.camera().intrinsics.focal_px;
            return d;
        },
        py::arg("pan_deg"), py::arg("roll_deg"), py::arg("tilt_deg"),
        py::arg("hfov_deg"), py::arg("counts") = std::array<int, 4>{30, 30,
                                                                    30, 5},
        py::arg("noise_px") = 0.0, py::arg("seed") = 0,
        py::arg("width") = 640, py::arg("height") = 480,
        "Generate a synthetic Manhattan scene with known ground truth.");

    py::class_<ReliabilityModel>(m, "ReliabilityModel")
        .def_static(
            "fit",
            [](const Eigen::Ref<const Eigen::MatrixXd>& rows, unsigned seed) {
                if (rows.cols() != 6)
                    throw std::invalid_argument(
                        "training rows must be Nx6: min_segments, "
                        "grid_entropy, mean_loglik, roll_err, tilt_err, "
                        "focal_err");
                std::vector<TrainingRow> tr(rows.rows());
                for (Eigen::Index i = 0; i < rows.rows(); ++i)
                    tr[i] = {{rows(i, 0), rows(i, 1), rows(i, 2)},
                             rows(i, 3),
                             rows(i, 4),
                             rows(i, 5)};
                return ReliabilityModel::fit(tr, seed);
            },
            py::arg("rows"), py::arg("seed") = 0)
        .def(
            "predict",
            [](const ReliabilityModel& model, double min_segments,
               double grid_entropy, double mean_loglik) {
                auto p = model.predict(
                    {min_segments, grid_entropy, mean_loglik});
                return py::make_tuple(p[0], p[1], p[2]);
            },
            py::arg("min_segments"), py::arg("grid_entropy"),
            py::arg("mean_loglik"),
            "Predicted absolute (roll deg, tilt deg, focal %) errors.")
        .def("save", &ReliabilityModel::save, py::arg("path"))
        .def_static("load", &ReliabilityModel::load, py::arg("path"));
}
