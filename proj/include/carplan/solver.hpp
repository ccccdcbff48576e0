#pragma once

// Monotone upwind Gauss-Seidel sweeping solver for the minimum-travel-time
// value function of the kinematic car
//
//     x' = v cos(theta) - w W d sin(theta)
//     y' = v sin(theta) + w W d cos(theta)
//     theta' = w W,          (v, w) in [-1,1]^2,
//
// on a uniform (x, y, theta) grid. Each node repeatedly takes the minimum,
// over a finite candidate control set, of the first-order upwind update
//
//     u* = (1 + |A|/dx u_x-nbr + |B|/dy u_y-nbr + |w|W/dth u_th-nbr)
//          / (|A|/dx + |B|/dy + |w|W/dth),
//
// where A = v cos(theta_k) - w W d sin(theta_k), B = v sin(theta_k) + w W d
// cos(theta_k) pick the upwind neighbor on each axis through their signs.
// Updates are accepted only when they decrease the node value, so iterates
// are pointwise non-increasing. Spatial boundary nodes are never touched and
// stay at the INF sentinel, which keeps the car inside the domain; blocked
// (colliding) nodes likewise stay INF and any update referencing an INF
// neighbor saturates to INF.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "carplan/errors.hpp"
#include "carplan/geometry.hpp"
#include "carplan/grid.hpp"
#include "carplan/scene.hpp"

namespace carplan {

// One candidate control: tangential velocity command v and angular velocity
// command w, each in {-1, 0, +1}. The solver's candidate set never contains
// (0,0); traced trajectories may carry (0,0) meaning "no motion applied".
struct ControlPair {
    std::int8_t v = 0;
    std::int8_t w = 0;
    bool operator==(const ControlPair&) const = default;
};

// The 8 admissible bang/coast combinations, in the fixed enumeration order
// that argmin tie-breaking and golden outputs rely on.
inline const std::vector<ControlPair>& default_control_set() {
    static const std::vector<ControlPair> set = {
        {-1, -1}, {-1, 0}, {-1, +1}, {0, -1}, {0, +1}, {+1, -1}, {+1, 0}, {+1, +1}};
    return set;
}

struct SolverParams {
    double eps = 1e-6;
    int max_outer = 500;
    std::vector<ControlPair> control_set = default_control_set();

    void validate() const {
        if (!(eps > 0)) throw ConfigurationError("solver: eps must be > 0");
        if (max_outer < 1) throw ConfigurationError("solver: max_outer must be >= 1");
        if (control_set.empty()) throw ConfigurationError("solver: control set is empty");
        for (const ControlPair& p : control_set) {
            if (p.v < -1 || p.v > 1 || p.w < -1 || p.w > 1)
                throw ConfigurationError("solver: control components must lie in {-1,0,+1}");
            if (p.v == 0 && p.w == 0)
                throw ConfigurationError("solver: control set must exclude (0,0)");
        }
    }
};

namespace detail {

// Coefficients |A| below this are floating-point noise from axis-aligned
// headings (cos/sin of multiples of pi/2) and are snapped to exact zero so
// they neither pick a spurious upwind neighbor nor trip INF saturation.
inline constexpr double kCoeffSnap = 1e-12;

inline int sign_of(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace detail

// Precomputed per-(theta node, control pair) upwind data.
struct Coeff {
    double A = 0, B = 0;             // signed speeds along x and y
    std::int8_t sign_a = 0, sign_b = 0, sign_w = 0;
    double wx = 0, wy = 0, wt = 0;   // |A|/dx, |B|/dy, |w|W/dtheta
    double inv_den = 0;              // 1 / (wx + wy + wt)
    std::ptrdiff_t off_x = 0, off_y = 0, off_t = 0;  // flat-index neighbor offsets
};

class CoeffTable {
  public:
    CoeffTable(const CarParams& car, const GridSpec& spec, std::vector<ControlPair> control_set)
        : controls_(std::move(control_set)), pairs_(controls_.size()), entries_(spec.ntheta * pairs_) {
        const double wd = car.max_yaw_rate * car.axle_offset;
        const std::ptrdiff_t stride_i = static_cast<std::ptrdiff_t>(spec.ny + 1) * spec.ntheta;
        const std::ptrdiff_t stride_j = spec.ntheta;
        for (int k = 0; k < spec.ntheta; ++k) {
            const double th = k * spec.dtheta;
            const double ct = std::cos(th), st = std::sin(th);
            for (std::size_t p = 0; p < pairs_; ++p) {
                const ControlPair ctrl = controls_[p];
                Coeff c;
                c.A = ctrl.v * ct - ctrl.w * wd * st;
                c.B = ctrl.v * st + ctrl.w * wd * ct;
                if (std::fabs(c.A) < detail::kCoeffSnap) c.A = 0;
                if (std::fabs(c.B) < detail::kCoeffSnap) c.B = 0;
                c.sign_a = static_cast<std::int8_t>(detail::sign_of(c.A));
                c.sign_b = static_cast<std::int8_t>(detail::sign_of(c.B));
                c.sign_w = static_cast<std::int8_t>(detail::sign_of(ctrl.w));
                c.wx = std::fabs(c.A) / spec.dx;
                c.wy = std::fabs(c.B) / spec.dy;
                c.wt = std::abs(ctrl.w) * car.max_yaw_rate / spec.dtheta;
                c.inv_den = 1.0 / (c.wx + c.wy + c.wt);
                c.off_x = c.sign_a * stride_i;
                c.off_y = c.sign_b * stride_j;
                c.off_t = spec.wrap_k(k + c.sign_w) - k;
                entries_[k * pairs_ + p] = c;
            }
        }
    }

    std::size_t pair_count() const { return pairs_; }
    const std::vector<ControlPair>& controls() const { return controls_; }
    const Coeff& at(int k, std::size_t pair) const { return entries_[k * pairs_ + pair]; }
    const Coeff* row(int k) const { return entries_.data() + k * pairs_; }

  private:
    std::vector<ControlPair> controls_;
    std::size_t pairs_;
    std::vector<Coeff> entries_;
};

inline CoeffTable precompute_coeffs(const CarParams& car, const GridSpec& spec,
                                    const std::vector<ControlPair>& control_set = default_control_set()) {
    return CoeffTable(car, spec, control_set);
}

namespace detail {

// Upwind candidate value at flat index `idx`; saturates to INF when any
// neighbor with nonzero weight is INF.
inline double candidate(const double* u, std::size_t idx, const Coeff& c) {
    double num = 1.0;
    if (c.wx != 0) {
        const double n = u[idx + c.off_x];
        if (n >= kInfThreshold) return kInf;
        num += c.wx * n;
    }
    if (c.wy != 0) {
        const double n = u[idx + c.off_y];
        if (n >= kInfThreshold) return kInf;
        num += c.wy * n;
    }
    if (c.wt != 0) {
        const double n = u[idx + c.off_t];
        if (n >= kInfThreshold) return kInf;
        num += c.wt * n;
    }
    return num * c.inv_den;
}

}  // namespace detail

// Single-control upwind update at one node (the closed-form u*). The node
// must be interior in (i, j); theta wraps.
inline double local_update(const Field3& u, const CoeffTable& coeffs, NodeIndex node,
                           ControlPair pair) {
    const GridSpec& spec = u.spec();
    if (node.i < 1 || node.i > spec.nx - 1 || node.j < 1 || node.j > spec.ny - 1 ||
        node.k < 0 || node.k >= spec.ntheta)
        throw std::out_of_range("local_update: node must be interior in (i, j)");
    const auto& controls = coeffs.controls();
    for (std::size_t p = 0; p < controls.size(); ++p)
        if (controls[p] == pair)
            return detail::candidate(u.data().data(), spec.index(node.i, node.j, node.k),
                                     coeffs.at(node.k, p));
    throw std::invalid_argument("local_update: control pair not in the precomputed set");
}

struct SweepDirection {
    int di = 1, dj = 1, dk = 1;
};

// Fixed Gray-code-like enumeration of the 8 sweep directions. The order
// affects the iteration count, never the fixed point.
inline constexpr std::array<SweepDirection, 8> kSweepOrder = {{{+1, +1, +1},
                                                               {+1, +1, -1},
                                                               {+1, -1, -1},
                                                               {+1, -1, +1},
                                                               {-1, -1, +1},
                                                               {-1, -1, -1},
                                                               {-1, +1, -1},
                                                               {-1, +1, +1}}};

// One Gauss-Seidel pass over the interior unblocked nodes in the given index
// order. Each node takes min(current, min over controls of u*), in place, so
// later nodes in the same pass see fresh values. Controls are recorded when
// the value strictly improves. Returns the largest pointwise decrease.
inline double sweep(Field3& u, std::vector<std::int8_t>& v_opt, std::vector<std::int8_t>& w_opt,
                    const AdmissibilityMask& mask, const CoeffTable& coeffs, SweepDirection dir) {
    const GridSpec& spec = u.spec();
    double* data = u.data().data();
    const std::uint8_t* blocked = mask.blocked.data();
    const std::size_t pairs = coeffs.pair_count();
    const std::vector<ControlPair>& controls = coeffs.controls();

    const int i_begin = dir.di > 0 ? 1 : spec.nx - 1;
    const int i_end = dir.di > 0 ? spec.nx : 0;  // exclusive
    const int j_begin = dir.dj > 0 ? 1 : spec.ny - 1;
    const int j_end = dir.dj > 0 ? spec.ny : 0;
    const int k_begin = dir.dk > 0 ? 0 : spec.ntheta - 1;
    const int k_end = dir.dk > 0 ? spec.ntheta : -1;

    double max_change = 0;
    for (int i = i_begin; i != i_end; i += dir.di) {
        for (int j = j_begin; j != j_end; j += dir.dj) {
            const std::size_t row = spec.index(i, j, 0);
            for (int k = k_begin; k != k_end; k += dir.dk) {
                const std::size_t idx = row + k;
                if (blocked[idx]) continue;
                const Coeff* crow = coeffs.row(k);
                double best = kInf;
                std::size_t best_p = pairs;
                for (std::size_t p = 0; p < pairs; ++p) {
                    const double cand = detail::candidate(data, idx, crow[p]);
                    if (cand < best) {
                        best = cand;
                        best_p = p;
                    }
                }
                if (best < data[idx]) {
                    max_change = std::max(max_change, data[idx] - best);
                    data[idx] = best;
                    v_opt[idx] = controls[best_p].v;
                    w_opt[idx] = controls[best_p].w;
                }
            }
        }
    }
    return max_change;
}

struct SolveResult {
    Field3 u;
    std::vector<std::int8_t> v_opt;
    std::vector<std::int8_t> w_opt;
    int outer_iterations = 0;
    double final_residual = 0;
    bool converged = false;
    CarParams car;
    Config goal;
    NodeIndex goal_node;
};

// Called after every outer iteration (one pass over all 8 sweep directions)
// with the iteration number, the sup-norm change, and the current field.
using SolveObserver = std::function<void(int outer, double max_change, const Field3& u)>;

// Full solve: seed the goal node with 0 and everything else with INF, mark
// blocked nodes, then repeat 8-direction sweep rounds until the sup-norm
// change drops below eps or the iteration cap is reached (the result is then
// flagged non-converged rather than throwing).
inline SolveResult solve(const Scene& scene, const GridSpec& spec, const SolverParams& params = {},
                         const SolveObserver& observer = {}) {
    params.validate();
    scene.car.validate();
    if (!scene.contains(scene.goal.x, scene.goal.y))
        throw ConfigurationError("solve: goal lies outside the domain");
    if (!is_admissible(scene.car, scene.obstacles, scene.goal))
        throw ConfigurationError("solve: goal configuration is inadmissible");

    const NodeIndex goal_node = spec.nearest_node(scene.goal);
    if (goal_node.i < 1 || goal_node.i > spec.nx - 1 || goal_node.j < 1 || goal_node.j > spec.ny - 1)
        throw ConfigurationError("solve: goal node falls on the spatial boundary ring");

    AdmissibilityMask mask = build_mask(scene.car, scene.obstacles, spec);
    if (mask.is_blocked(goal_node.i, goal_node.j, goal_node.k))
        throw ConfigurationError(
            "solve: the grid node nearest the goal is blocked; refine the grid or move the goal");

    const CoeffTable coeffs = precompute_coeffs(scene.car, spec, params.control_set);

    SolveResult res;
    res.u = Field3(spec, kInf);
    res.v_opt.assign(spec.node_count(), 0);
    res.w_opt.assign(spec.node_count(), 0);
    res.car = scene.car;
    res.goal = scene.goal;
    res.goal_node = goal_node;
    res.u.at(goal_node.i, goal_node.j, goal_node.k) = 0;

    double residual = kInf;
    int outer = 0;
    while (outer < params.max_outer) {
        ++outer;
        double max_change = 0;
        for (const SweepDirection& dir : kSweepOrder)
            max_change = std::max(max_change, sweep(res.u, res.v_opt, res.w_opt, mask, coeffs, dir));
        residual = max_change;
        if (observer) observer(outer, max_change, res.u);
        if (max_change < params.eps) {
            res.converged = true;
            break;
        }
    }
    res.outer_iterations = outer;
    res.final_residual = residual;
    return res;
}

}  // namespace carplan
