#pragma once

// Brute-force travel-time oracle for desk-scale grids: shortest path on the
// directed graph whose edges are fixed-duration single-control motions,
// integrated with the same forward-Euler rule as the tracer and snapped to
// the nearest grid node. Dijkstra from the goal over the reversed edges
// yields the exact time-to-goal on that graph. Snapping is the dominant
// error against the PDE sweep; the comparison thresholds live in the tests
// that use it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "carplan/errors.hpp"
#include "carplan/geometry.hpp"
#include "carplan/grid.hpp"
#include "carplan/scene.hpp"
#include "carplan/solver.hpp"
#include "carplan/trajectory.hpp"

namespace carplan {

// Edge duration for one control: long enough that the fastest-moving axis
// advances about `step_cells` cells.
inline double oracle_edge_duration(const Scene& scene, const GridSpec& spec, ControlPair ctrl,
                                   int step_cells) {
    const double wd = ctrl.w * scene.car.max_yaw_rate * scene.car.axle_offset;
    const double spatial_speed = std::hypot(static_cast<double>(ctrl.v), wd);
    const double yaw_speed = std::abs(ctrl.w) * scene.car.max_yaw_rate;
    double tau = std::numeric_limits<double>::infinity();
    if (spatial_speed > 1e-12) tau = std::min(tau, std::min(spec.dx, spec.dy) / spatial_speed);
    if (yaw_speed > 1e-12) tau = std::min(tau, spec.dtheta / yaw_speed);
    return step_cells * tau;
}

// Exact shortest time-to-goal over the single-control transition graph.
// INF where the goal is unreachable. Intended for grids up to ~1e6 nodes.
inline Field3 dijkstra_travel_time(const Scene& scene, const GridSpec& spec, int step_cells = 1,
                                   const std::vector<ControlPair>& control_set = default_control_set()) {
    if (step_cells < 1) throw ConfigurationError("oracle: step_cells must be >= 1");
    if (!is_admissible(scene.car, scene.obstacles, scene.goal))
        throw ConfigurationError("oracle: goal configuration is inadmissible");

    const AdmissibilityMask mask = build_mask(scene.car, scene.obstacles, spec);
    const NodeIndex goal = spec.nearest_node(scene.goal);
    const std::size_t goal_idx = spec.index(goal.i, goal.j, goal.k);
    if (mask.blocked[goal_idx]) throw ConfigurationError("oracle: goal grid node is blocked");

    auto usable = [&](int i, int j, std::size_t idx) {
        return i >= 1 && i <= spec.nx - 1 && j >= 1 && j <= spec.ny - 1 && !mask.blocked[idx];
    };

    // Forward edges, bucketed by successor so Dijkstra can walk them backward.
    struct Edge {
        std::uint32_t from;
        float cost;
    };
    std::vector<std::vector<Edge>> incoming(spec.node_count());

    const double dt_pref = 0.25 * std::min(spec.dx, spec.dy);
    for (const ControlPair ctrl : control_set) {
        const double tau = oracle_edge_duration(scene, spec, ctrl, step_cells);
        const int substeps = std::max(1, static_cast<int>(std::ceil(tau / dt_pref)));
        const double dt = tau / substeps;
        for (int i = 1; i <= spec.nx - 1; ++i)
            for (int j = 1; j <= spec.ny - 1; ++j)
                for (int k = 0; k < spec.ntheta; ++k) {
                    const std::size_t from = spec.index(i, j, k);
                    if (mask.blocked[from]) continue;
                    Config q = spec.node_config(i, j, k);
                    for (int s = 0; s < substeps; ++s) q = euler_step(q, ctrl, scene.car, dt);
                    if (!spec.contains(q.x, q.y)) continue;
                    const NodeIndex to = spec.nearest_node(q);
                    const std::size_t to_idx = spec.index(to.i, to.j, to.k);
                    if (to_idx == from || !usable(to.i, to.j, to_idx)) continue;
                    incoming[to_idx].push_back(Edge{static_cast<std::uint32_t>(from),
                                                    static_cast<float>(tau)});
                }
    }

    Field3 dist(spec, kInf);
    std::vector<double>& d = dist.data();
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    d[goal_idx] = 0;
    heap.emplace(0.0, static_cast<std::uint32_t>(goal_idx));
    while (!heap.empty()) {
        auto [cost, node] = heap.top();
        heap.pop();
        if (cost > d[node]) continue;
        for (const Edge& e : incoming[node]) {
            const double alt = cost + e.cost;
            if (alt < d[e.from]) {
                d[e.from] = alt;
                heap.emplace(alt, e.from);
            }
        }
    }
    return dist;
}

struct FieldComparison {
    std::size_t both_finite = 0;
    std::size_t only_first = 0;   // finite in a, INF in b
    std::size_t only_second = 0;  // finite in b, INF in a
    double max_abs = 0;
    double median_abs = 0;
    double p90_abs = 0;
    double p99_abs = 0;
    // reachability disagreements farther than one cell from any blocked node
    // or the spatial boundary ring
    std::size_t mismatches_beyond_one_cell = 0;
};

// Node-wise comparison of two fields on the same grid. When a mask is given,
// reachability mismatches adjacent to blocked nodes or the boundary ring are
// tallied separately from unexplained ones.
inline FieldComparison compare_fields(const Field3& a, const Field3& b,
                                      const AdmissibilityMask* mask = nullptr) {
    const GridSpec& spec = a.spec();
    if (b.spec().node_count() != spec.node_count())
        throw CompatibilityError("compare_fields: grids differ");

    auto near_blocked_or_boundary = [&](int i, int j, int k) {
        if (i <= 1 || i >= spec.nx - 1 || j <= 1 || j >= spec.ny - 1) return true;
        if (!mask) return false;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj)
                for (int dk = -1; dk <= 1; ++dk)
                    if (mask->blocked[spec.index(i + di, j + dj, spec.wrap_k(k + dk))]) return true;
        return false;
    };

    FieldComparison cmp;
    std::vector<double> diffs;
    for (int i = 0; i <= spec.nx; ++i)
        for (int j = 0; j <= spec.ny; ++j)
            for (int k = 0; k < spec.ntheta; ++k) {
                const double va = a.at(i, j, k), vb = b.at(i, j, k);
                const bool fa = !is_infinite(va), fb = !is_infinite(vb);
                if (fa && fb) {
                    ++cmp.both_finite;
                    diffs.push_back(std::fabs(va - vb));
                } else if (fa != fb) {
                    fa ? ++cmp.only_first : ++cmp.only_second;
                    if (!near_blocked_or_boundary(i, j, k)) ++cmp.mismatches_beyond_one_cell;
                }
            }
    if (!diffs.empty()) {
        std::sort(diffs.begin(), diffs.end());
        cmp.max_abs = diffs.back();
        cmp.median_abs = diffs[diffs.size() / 2];
        cmp.p90_abs = diffs[static_cast<std::size_t>(0.90 * (diffs.size() - 1))];
        cmp.p99_abs = diffs[static_cast<std::size_t>(0.99 * (diffs.size() - 1))];
    }
    return cmp;
}

}  // namespace carplan
