#include "mcal/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mcal {

void SearchConfig::validate() const {
    if (grid_resolution < 2)
        throw std::invalid_argument("grid resolution must be >= 2");
    double k4 = std::pow(static_cast<double>(grid_resolution), 4);
    if (refine_seeds < 1 || static_cast<double>(refine_seeds) > k4)
        throw std::invalid_argument("refine seeds must lie in [1, k^4]");
    for (const ParamBounds* b : {&pan, &roll, &tilt, &hfov})
        if (!(b->hi > b->lo)) throw std::invalid_argument("empty bounds");
    if (iteration_cap < 0)
        throw std::invalid_argument("iteration cap must be >= 1 when set");
}

CameraParams Proposal::camera(int width, int height) const {
    CameraParams p;
    p.intrinsics = {fov_to_focal(hfov_deg, width), width, height};
    p.rotation = euler_to_rotation(angles);
    return p;
}

std::vector<double> GridEvaluation::objectives() const {
    std::vector<double> v;
    v.reserve(proposals.size());
    for (const auto& p : proposals) v.push_back(p.objective);
    return v;
}

namespace {

// (pan, roll, tilt, hfov) vector view of a proposal.
using Params4 = std::array<double, 4>;

Params4 to_vec(const Proposal& p) {
    return {p.angles.pan_deg, p.angles.roll_deg, p.angles.tilt_deg,
            p.hfov_deg};
}

Proposal from_vec(const Params4& v) {
    Proposal p;
    p.angles = {v[0], v[1], v[2]};
    p.hfov_deg = v[3];
    return p;
}

struct ObjectiveFn {
    std::span<const LineSegment> segments;
    int width, height;
    Measure m;
    const MixtureConfig* config;

    double operator()(const Params4& v) const {
        Proposal p = from_vec(v);
        return objective(segments, p.camera(width, height), m, *config);
    }
};

std::array<ParamBounds, 4> bounds_of(const SearchConfig& s) {
    return {s.pan, s.roll, s.tilt, s.hfov};
}

// Brent's method maximizing f along t in [a, b]; deterministic, no
// derivatives.  t_tol is an absolute tolerance on t.
template <typename F>
double brent_max(F&& f, double a, double b, double t_tol, double* fx_out) {
    const double gold = 0.5 * (3.0 - std::sqrt(5.0));
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (a + b);
        double tol1 = t_tol * std::abs(x) + 1e-15;
        double tol2 = 2.0 * tol1;
        if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) break;
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            // Parabolic fit through x, w, v (on -f).
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            double etemp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                double u = x + d;
                if (u - a < tol2 || b - u < tol2)
                    d = mid > x ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < mid ? b : a) - x;
            d = gold * e;
        }
        double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
        double fu = f(u);
        if (fu >= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw; w = x; fw = fx; x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu >= fw || w == x) {
                v = w; fv = fw; w = u; fw = fu;
            } else if (fu >= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    if (fx_out) *fx_out = fx;
    return x;
}

}  // namespace

GridEvaluation grid_stage(std::span<const LineSegment> segments,
                          int image_width, int image_height, Measure m,
                          const MixtureConfig& config,
                          const SearchConfig& search) {
    if (segments.empty()) throw std::invalid_argument("no segments");
    search.validate();
    config.validate();
    const int k = search.grid_resolution;
    auto bounds = bounds_of(search);
    auto sample = [&](int dim, int j) {
        return bounds[dim].lo +
               (j + 0.5) * bounds[dim].width() / static_cast<double>(k);
    };
    ObjectiveFn fn{segments, image_width, image_height, m, &config};
    GridEvaluation grid;
    grid.k = k;
    grid.proposals.reserve(static_cast<size_t>(k) * k * k * k);
    int index = 0;
    for (int ip = 0; ip < k; ++ip)
        for (int ir = 0; ir < k; ++ir)
            for (int it = 0; it < k; ++it)
                for (int jf = 0; jf < k; ++jf) {
                    Proposal p = from_vec({sample(0, ip), sample(1, ir),
                                           sample(2, it), sample(3, jf)});
                    p.linear_index = index++;
                    p.objective = fn(to_vec(p));
                    grid.proposals.push_back(p);
                }
    std::sort(grid.proposals.begin(), grid.proposals.end(),
              [](const Proposal& a, const Proposal& b) {
                  if (a.objective != b.objective)
                      return a.objective > b.objective;
                  return a.linear_index < b.linear_index;
              });
    return grid;
}

Proposal refine(const Proposal& seed, std::span<const LineSegment> segments,
                int image_width, int image_height, Measure m,
                const MixtureConfig& config, const SearchConfig& search,
                int* iterations_out) {
    search.validate();
    auto bounds = bounds_of(search);
    ObjectiveFn fn{segments, image_width, image_height, m, &config};

    Params4 x = to_vec(seed);
    for (int d = 0; d < 4; ++d) x[d] = bounds[d].clamp(x[d]);
    double fx = fn(x);

    // Cyclic ascent with Brent line searches over a window of one grid
    // cell around the current point.  Besides the four axes, the sweep
    // includes diagonal directions over the coupled pan/tilt/FOV
    // parameters, which follow the curved ridges where plain coordinate
    // ascent stalls.  One iteration is a full sweep over all
    // directions.
    const int k = search.grid_resolution;
    std::array<Params4, 10> directions{};
    for (int d = 0; d < 4; ++d)
        directions[d][d] = bounds[d].width() / static_cast<double>(k);
    {
        const int pairs[3][2] = {{0, 2}, {0, 3}, {2, 3}};
        int idx = 4;
        for (const auto& pr : pairs)
            for (double sign : {1.0, -1.0}) {
                directions[idx][pr[0]] = directions[pr[0]][pr[0]];
                directions[idx][pr[1]] = sign * directions[pr[1]][pr[1]];
                ++idx;
            }
    }
    auto dim_tol = [&](int d) {
        return d == 3 ? search.tolerance * x[3] : search.tolerance;
    };
    int iterations = 0;
    const int max_iterations =
        search.iteration_cap > 0 ? search.iteration_cap : 1000;
    // Line search along dir within the global bounds: a coarse scan
    // locates the best bracket (slices are multimodal, so Brent alone
    // would latch onto whichever local maximum it starts near), then
    // Brent polishes inside it.
    auto line_search = [&](const Params4& dir, double& max_move_rel) {
        double t_lo = -1e300, t_hi = 1e300, t_tol = 1e300, t_unit = 1e300;
        for (int d = 0; d < 4; ++d) {
            if (dir[d] == 0.0) continue;
            double lo = (bounds[d].lo - x[d]) / dir[d];
            double hi = (bounds[d].hi - x[d]) / dir[d];
            if (lo > hi) std::swap(lo, hi);
            t_lo = std::max(t_lo, lo);
            t_hi = std::min(t_hi, hi);
            t_tol = std::min(t_tol, 0.25 * dim_tol(d) / std::abs(dir[d]));
            // t at which this dimension has moved one grid cell.
            double window = bounds[d].width() / static_cast<double>(k);
            t_unit = std::min(t_unit, window / std::abs(dir[d]));
        }
        if (!(t_hi > t_lo)) return;
        auto value = [&](double tt) {
            Params4 y = x;
            for (int d = 0; d < 4; ++d) y[d] += tt * dir[d];
            return fn(y);
        };
        // Scan at three-quarter-cell steps, keeping t=0 in the grid.
        double step = 0.75 * t_unit;
        double best_t = 0.0, best_f = fx;
        for (double tt = step * std::ceil(t_lo / step); tt <= t_hi;
             tt += step) {
            double ft = value(tt);
            if (ft > best_f) {
                best_f = ft;
                best_t = tt;
            }
        }
        double a = std::max(t_lo, best_t - step);
        double b = std::min(t_hi, best_t + step);
        double fu = best_f;
        double t = brent_max(value, a, b, t_tol, &fu);
        if (fu < best_f) {
            t = best_t;
            fu = best_f;
        }
        if (fu > fx) {
            for (int d = 0; d < 4; ++d) {
                if (dir[d] == 0.0) continue;
                max_move_rel = std::max(max_move_rel,
                                        std::abs(t * dir[d]) / dim_tol(d));
                x[d] = bounds[d].clamp(x[d] + t * dir[d]);
            }
            fx = fu;
        }
    };
    while (iterations < max_iterations) {
        double max_move_rel = 0.0;
        Params4 sweep_start = x;
        for (const auto& dir : directions) line_search(dir, max_move_rel);
        // Powell-style acceleration along the accumulated move, which
        // tracks whatever ridge the individual searches crawled along.
        Params4 delta{};
        double delta_norm = 0.0;
        for (int d = 0; d < 4; ++d) {
            delta[d] = x[d] - sweep_start[d];
            delta_norm = std::max(delta_norm,
                                  std::abs(delta[d]) / dim_tol(d));
        }
        if (delta_norm >= 1.0) line_search(delta, max_move_rel);
        ++iterations;
        if (max_move_rel < 1.0) break;  // every move below tolerance
    }
    if (iterations_out) *iterations_out = iterations;

    if (fx < seed.objective) {
        // Non-improving refinement falls back to the seed.
        Proposal out = seed;
        out.linear_index = -1;
        if (iterations_out) *iterations_out = 0;
        return out;
    }
    Proposal out = from_vec(x);
    out.objective = fx;
    out.linear_index = -1;
    return out;
}

CalibrationResult calibrate(std::span<const LineSegment> segments,
                            int image_width, int image_height, Measure m,
                            const MixtureConfig& config,
                            const SearchConfig& search) {
    auto t0 = std::chrono::steady_clock::now();
    GridEvaluation grid =
        grid_stage(segments, image_width, image_height, m, config, search);

    CalibrationResult result;
    result.best_grid = grid.proposals.front();

    int seeds = std::min<int>(search.refine_seeds,
                              static_cast<int>(grid.proposals.size()));
    Proposal best;
    best.objective = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < seeds; ++s) {
        RefineTrace trace;
        trace.seed = grid.proposals[s];
        trace.refined = refine(trace.seed, segments, image_width, image_height,
                               m, config, search, &trace.iterations);
        if (trace.refined.objective > best.objective)
            best = trace.refined;
        result.traces.push_back(trace);
    }

    result.params = best.camera(image_width, image_height);
    result.hfov_deg = best.hfov_deg;
    result.objective = best.objective;
    result.scores = classify_segments(segments, result.params, m, config);
    std::vector<double> grid_obj = grid.objectives();
    result.cues = extract_cues(result.scores, grid_obj, result.objective);
    result.degenerate_scene = result.cues.min_segments < 1.0;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return result;
}

}  // namespace mcal
