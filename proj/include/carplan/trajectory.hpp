#pragma once

// Time-optimal trajectory reconstruction. The feedback law reads the solved
// value field u and picks
//
//     v = -sign(u_x cos(theta) + u_y sin(theta))
//     w = -sign(-d u_x sin(theta) + d u_y cos(theta) + u_theta)
//
// from centered differences of the interpolated field; where a switching
// argument sits inside a small dead band (or the gradient is undefined from
// INF neighbors) the control recorded at the nearest node during sweeping is
// used instead. The kinematics are then integrated with forward Euler until
// the goal is captured or a time cap expires.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "carplan/errors.hpp"
#include "carplan/geometry.hpp"
#include "carplan/grid.hpp"
#include "carplan/solver.hpp"

namespace carplan {

// One forward-Euler step of the car kinematics, controls held constant.
inline Config euler_step(const Config& q, ControlPair ctrl, const CarParams& car, double dt) {
    const double yaw_rate = ctrl.w * car.max_yaw_rate;
    const double drift = yaw_rate * car.axle_offset;
    const double c = std::cos(q.theta), s = std::sin(q.theta);
    return Config(q.x + dt * (ctrl.v * c - drift * s), q.y + dt * (ctrl.v * s + drift * c),
                  q.theta + dt * yaw_rate);
}

struct TraceParams {
    double dt = 0;               // 0 = auto: 0.25 * min(dx, dy)
    double goal_tol = 0;         // 0 = auto: 2 * max(dx, dy)
    double theta_tol = 0;        // 0 = auto: 2 * dtheta
    double max_time_factor = 1.5;
    double dead_band = 0;        // 0 = auto: 1e-3 * median |grad u|
    bool recorded_only = false;  // use only the controls recorded at nodes

    void validate() const {
        if (dt < 0 || goal_tol < 0 || theta_tol < 0 || dead_band < 0)
            throw ConfigurationError("trace: parameters must be non-negative");
        if (max_time_factor < 1) throw ConfigurationError("trace: max_time_factor must be >= 1");
    }
};

struct TrajectorySample {
    double t = 0;
    Config q;
    ControlPair control;  // applied over [t, t+dt); (0,0) on the terminal sample
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double duration = 0;
    bool reached_goal = false;
    int kink_count = 0;
};

// Integration failed: a sample left the admissible set (discretization too
// coarse for the scene) or the start is unusable.
struct TrajectoryError : Error {
    TrajectoryError(const std::string& msg, TrajectorySample s)
        : Error(msg + " at t=" + std::to_string(s.t) + ", (" + std::to_string(s.q.x) + ", " +
                std::to_string(s.q.y) + ", " + std::to_string(s.q.theta) + ")"),
          sample(s) {}
    TrajectorySample sample;
};

// Number of driving-direction reversals: sign changes between consecutive
// nonzero v commands. Coasting (v = 0) stretches are transparent, so
// +1 -> 0 -> -1 still counts as one kink.
inline int count_kinks(const Trajectory& traj) {
    int kinks = 0;
    int last = 0;
    for (const TrajectorySample& s : traj.samples) {
        const int v = s.control.v;
        if (v == 0) continue;
        if (last != 0 && v != last) ++kinks;
        last = v;
    }
    return kinks;
}

// Median gradient magnitude of the interpolated field over interior nodes
// with a fully finite stencil; used to scale the feedback dead band.
inline double gradient_scale(const Field3& u) {
    const GridSpec& spec = u.spec();
    std::vector<double> mags;
    mags.reserve(spec.node_count() / 2);
    for (int i = 1; i < spec.nx; ++i)
        for (int j = 1; j < spec.ny; ++j)
            for (int k = 0; k < spec.ntheta; ++k) {
                const double c0 = u.at(i - 1, j, k), c1 = u.at(i + 1, j, k);
                const double c2 = u.at(i, j - 1, k), c3 = u.at(i, j + 1, k);
                const double c4 = u.at(i, j, spec.wrap_k(k - 1)), c5 = u.at(i, j, spec.wrap_k(k + 1));
                if (is_infinite(c0) || is_infinite(c1) || is_infinite(c2) || is_infinite(c3) ||
                    is_infinite(c4) || is_infinite(c5))
                    continue;
                const double gx = (c1 - c0) / (2 * spec.dx);
                const double gy = (c3 - c2) / (2 * spec.dy);
                const double gt = (c5 - c4) / (2 * spec.dtheta);
                mags.push_back(std::sqrt(gx * gx + gy * gy + gt * gt));
            }
    if (mags.empty()) return 1.0;
    auto mid = mags.begin() + mags.size() / 2;
    std::nth_element(mags.begin(), mid, mags.end());
    return *mid;
}

// Controls recorded at the node nearest q during sweeping.
inline ControlPair recorded_control(const SolveResult& res, const Config& q) {
    const GridSpec& spec = res.u.spec();
    const NodeIndex n = spec.nearest_node(q);
    const std::size_t idx = spec.index(n.i, n.j, n.k);
    return ControlPair{res.v_opt[idx], res.w_opt[idx]};
}

// Feedback law on the interpolated value field, with dead-band and
// undefined-gradient fallback to the recorded node controls.
inline ControlPair control_law(const SolveResult& res, const Config& q, double dead_band) {
    const GridSpec& spec = res.u.spec();
    // central differences need one cell of room on each spatial side
    if (q.x < spec.xmin + spec.dx || q.x > spec.xmax - spec.dx || q.y < spec.ymin + spec.dy ||
        q.y > spec.ymax - spec.dy)
        return recorded_control(res, q);
    const auto grad = res.u.gradient(q);
    if (!grad) return recorded_control(res, q);

    const double c = std::cos(q.theta), s = std::sin(q.theta);
    const double d = res.car.axle_offset;
    const double v_arg = grad->ux * c + grad->uy * s;
    const double w_arg = -d * grad->ux * s + d * grad->uy * c + grad->utheta;

    ControlPair fallback{};
    bool have_fallback = false;
    auto fallback_ctrl = [&]() {
        if (!have_fallback) {
            fallback = recorded_control(res, q);
            have_fallback = true;
        }
        return fallback;
    };

    ControlPair out;
    if (std::fabs(v_arg) < dead_band)
        out.v = fallback_ctrl().v;
    else
        out.v = v_arg > 0 ? -1 : 1;
    if (std::fabs(w_arg) < dead_band)
        out.w = fallback_ctrl().w;
    else
        out.w = w_arg > 0 ? -1 : 1;
    return out;
}

// Forward-Euler rollout of the feedback law from `start` until the goal is
// captured (position within goal_tol and heading within theta_tol) or the
// time cap max_time_factor * u(start) expires. Every sample is checked for
// admissibility. Deterministic: identical inputs give identical samples.
inline Trajectory integrate(const SolveResult& res, const Scene& scene, const Config& start,
                            TraceParams params = {}) {
    params.validate();
    const GridSpec& spec = res.u.spec();

    const double dt = params.dt > 0 ? params.dt : 0.25 * std::min(spec.dx, spec.dy);
    const double goal_tol = params.goal_tol > 0 ? params.goal_tol : 2 * std::max(spec.dx, spec.dy);
    const double theta_tol = params.theta_tol > 0 ? params.theta_tol : 2 * spec.dtheta;

    if (!scene.contains(start.x, start.y))
        throw TrajectoryError("trace: start outside the domain", {0, start, {}});
    if (!is_admissible(scene.car, scene.obstacles, start))
        throw TrajectoryError("trace: start configuration is inadmissible", {0, start, {}});
    const double u_start = res.u.sample(start);
    if (is_infinite(u_start))
        throw TrajectoryError("trace: start has no finite travel time (unreachable)", {0, start, {}});

    const double dead_band =
        params.dead_band > 0 ? params.dead_band : (params.recorded_only ? 0 : 1e-3 * gradient_scale(res.u));
    const double time_cap = params.max_time_factor * u_start;

    auto captured = [&](const Config& q) {
        return std::hypot(q.x - res.goal.x, q.y - res.goal.y) <= goal_tol &&
               angular_distance(q.theta, res.goal.theta) <= theta_tol;
    };

    Trajectory traj;
    Config q = start;
    double t = 0;
    long step = 0;
    bool reached = captured(q);
    while (!reached && t <= time_cap) {
        const ControlPair ctrl =
            params.recorded_only ? recorded_control(res, q) : control_law(res, q, dead_band);
        traj.samples.push_back({t, q, ctrl});
        q = euler_step(q, ctrl, scene.car, dt);
        t = ++step * dt;
        if (!scene.contains(q.x, q.y))
            throw TrajectoryError("trace: sample left the domain", {t, q, ctrl});
        if (!is_admissible(scene.car, scene.obstacles, q))
            throw TrajectoryError("trace: sample is inadmissible", {t, q, ctrl});
        reached = captured(q);
    }
    traj.samples.push_back({t, q, {}});
    traj.duration = t;
    traj.reached_goal = reached;
    traj.kink_count = count_kinks(traj);
    return traj;
}

}  // namespace carplan
