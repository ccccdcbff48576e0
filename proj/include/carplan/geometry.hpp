#pragma once

// Car footprint construction and exact rectangle-vs-convex-polygon collision
// testing (separating axis theorem, closed-set semantics: touching counts as
// overlap). Also precomputes the per-node admissibility mask the solver skips.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "carplan/errors.hpp"
#include "carplan/grid.hpp"

namespace carplan {

struct Vec2 {
    double x = 0;
    double y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Kinematic car parameters: the axle has length 2*half_width, the center of
// mass sits axle_offset ahead of the axle midpoint, and max_yaw_rate bounds
// the angular velocity (equivalently, 1/max_yaw_rate bounds path curvature
// at unit speed).
struct CarParams {
    double half_width = 0;    // R
    double axle_offset = 0;   // d
    double max_yaw_rate = 0;  // W

    void validate() const {
        if (!(half_width > 0)) throw ConfigurationError("car: half_width must be > 0");
        if (!(axle_offset >= 0)) throw ConfigurationError("car: axle_offset must be >= 0");
        if (!(max_yaw_rate > 0)) throw ConfigurationError("car: max_yaw_rate must be > 0");
    }
};

// Convex polygon, counterclockwise vertex order.
struct ConvexPolygon {
    std::vector<Vec2> pts;
};

inline double polygon_area(const ConvexPolygon& p) {
    double s = 0;
    for (std::size_t i = 0; i < p.pts.size(); ++i)
        s += cross(p.pts[i], p.pts[(i + 1) % p.pts.size()]);
    return 0.5 * s;
}

// Convexity check for a CCW polygon: every turn is a left turn (collinear
// vertices allowed).
inline bool is_convex_ccw(const ConvexPolygon& p) {
    const std::size_t n = p.pts.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 e0 = p.pts[(i + 1) % n] - p.pts[i];
        Vec2 e1 = p.pts[(i + 2) % n] - p.pts[(i + 1) % n];
        if (cross(e0, e1) < 0) return false;
    }
    return true;
}

struct ObstacleSet {
    std::vector<ConvexPolygon> polygons;

    bool empty() const { return polygons.empty(); }
};

// The rectangle occupied by the car: length 2*axle_offset along the heading,
// width 2*half_width across it, centered on (x,y). Corners in CCW order.
struct Footprint {
    std::array<Vec2, 4> corners;
};

inline Footprint footprint(const CarParams& car, const Config& q) {
    const double c = std::cos(q.theta), s = std::sin(q.theta);
    const double d = car.axle_offset, r = car.half_width;
    auto rot = [&](double lx, double ly) { return Vec2{q.x + c * lx - s * ly, q.y + s * lx + c * ly}; };
    return Footprint{{rot(d, r), rot(-d, r), rot(-d, -r), rot(d, -r)}};
}

namespace detail {

template <typename Pts>
inline std::pair<double, double> project(const Pts& pts, Vec2 axis) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec2& p : pts) {
        double t = dot(p, axis);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return {lo, hi};
}

// Strict separation test along the edge normals of one shape.
template <typename PtsA, typename PtsB>
inline bool separated_by_edges(const PtsA& a, const PtsB& b) {
    const std::size_t n = std::size(a);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 e = a[(i + 1) % n] - a[i];
        if (e.x == 0 && e.y == 0) continue;  // degenerate edge (zero-length car)
        Vec2 axis{-e.y, e.x};
        auto [alo, ahi] = project(a, axis);
        auto [blo, bhi] = project(b, axis);
        if (ahi < blo || bhi < alo) return true;
    }
    return false;
}

}  // namespace detail

// True iff the closed rectangle and the closed convex polygon intersect;
// touching boundaries count as overlap.
inline bool convex_overlap(const Footprint& rect, const ConvexPolygon& poly) {
    if (poly.pts.size() < 3 || std::fabs(polygon_area(poly)) == 0)
        throw std::invalid_argument("convex_overlap: degenerate obstacle polygon");
    return !detail::separated_by_edges(rect.corners, poly.pts) &&
           !detail::separated_by_edges(poly.pts, rect.corners);
}

inline bool is_admissible(const CarParams& car, const ObstacleSet& obstacles, const Config& q) {
    if (obstacles.empty()) return true;
    const Footprint fp = footprint(car, q);
    for (const ConvexPolygon& poly : obstacles.polygons)
        if (convex_overlap(fp, poly)) return false;
    return true;
}

// Per-node inadmissibility flags: blocked(i,j,k) is true iff the footprint at
// that node intersects any obstacle.
struct AdmissibilityMask {
    GridSpec spec;
    std::vector<std::uint8_t> blocked;

    bool is_blocked(int i, int j, int k) const { return blocked[spec.index(i, j, k)] != 0; }

    std::size_t blocked_count() const {
        return static_cast<std::size_t>(std::count(blocked.begin(), blocked.end(), std::uint8_t{1}));
    }
};

inline AdmissibilityMask build_mask(const CarParams& car, const ObstacleSet& obstacles,
                                    const GridSpec& spec) {
    AdmissibilityMask mask{spec, std::vector<std::uint8_t>(spec.node_count(), 0)};
    if (obstacles.empty()) return mask;

    // Bounding boxes expanded by the footprint circumradius reject most nodes
    // before the exact test runs.
    const double reach = std::hypot(car.axle_offset, car.half_width);
    struct Box {
        double xlo, xhi, ylo, yhi;
    };
    std::vector<Box> boxes;
    boxes.reserve(obstacles.polygons.size());
    for (const ConvexPolygon& poly : obstacles.polygons) {
        Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        for (const Vec2& p : poly.pts) {
            b.xlo = std::min(b.xlo, p.x);
            b.xhi = std::max(b.xhi, p.x);
            b.ylo = std::min(b.ylo, p.y);
            b.yhi = std::max(b.yhi, p.y);
        }
        b.xlo -= reach;
        b.xhi += reach;
        b.ylo -= reach;
        b.yhi += reach;
        boxes.push_back(b);
    }

    for (int k = 0; k < spec.ntheta; ++k) {
        // corner offsets are fixed within one heading plane
        const Footprint base = footprint(car, Config(0, 0, k * spec.dtheta));
        for (int i = 0; i <= spec.nx; ++i) {
            const double x = spec.xmin + i * spec.dx;
            for (int j = 0; j <= spec.ny; ++j) {
                const double y = spec.ymin + j * spec.dy;
                std::uint8_t hit = 0;
                for (std::size_t o = 0; o < boxes.size() && !hit; ++o) {
                    const Box& b = boxes[o];
                    if (x < b.xlo || x > b.xhi || y < b.ylo || y > b.yhi) continue;
                    Footprint fp = base;
                    for (Vec2& p : fp.corners) p = p + Vec2{x, y};
                    hit = convex_overlap(fp, obstacles.polygons[o]) ? 1 : 0;
                }
                mask.blocked[spec.index(i, j, k)] = hit;
            }
        }
    }
    return mask;
}

}  // namespace carplan
