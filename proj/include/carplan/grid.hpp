#pragma once

// Uniform discretization of the configuration space [xmin,xmax] x [ymin,ymax] x [0,2pi),
// with periodic handling of the heading axis, plus trilinear sampling and central
// finite differences on scalar fields stored over that grid.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carplan/errors.hpp"

namespace carplan {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Finite stand-in for +infinity. Kept finite so the update formula never
// produces NaN; anything at or above kInfThreshold counts as infinite.
inline constexpr double kInf = 1e10;
inline constexpr double kInfThreshold = kInf / 2;

inline bool is_infinite(double v) { return v >= kInfThreshold; }

// Maps any angle into [0, 2pi).
inline double normalize_angle(double theta) {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0;  // fmod result of -eps can round up to exactly 2pi
    return r;
}

// Shortest periodic distance between two headings, in [0, pi].
inline double angular_distance(double a, double b) {
    double d = std::fabs(normalize_angle(a) - normalize_angle(b));
    return d > kTwoPi / 2 ? kTwoPi - d : d;
}

// A car configuration. The heading is stored normalized to [0, 2pi).
struct Config {
    double x = 0;
    double y = 0;
    double theta = 0;

    Config() = default;
    Config(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}
};

struct NodeIndex {
    int i = 0;
    int j = 0;
    int k = 0;
    bool operator==(const NodeIndex&) const = default;
};

// Uniform grid over [xmin,xmax] x [ymin,ymax] x [0,2pi). nx/ny/ntheta are cell
// counts: spatial axes carry nx+1 / ny+1 nodes, the heading axis carries ntheta
// unique nodes with wraparound indexing (node ntheta is identified with node 0).
struct GridSpec {
    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    int nx = 0, ny = 0, ntheta = 0;
    double dx = 0, dy = 0, dtheta = 0;

    GridSpec() = default;
    GridSpec(double xmin_, double xmax_, double ymin_, double ymax_, int nx_, int ny_, int nth_)
        : xmin(xmin_), xmax(xmax_), ymin(ymin_), ymax(ymax_), nx(nx_), ny(ny_), ntheta(nth_) {
        if (xmax <= xmin || ymax <= ymin)
            throw ConfigurationError("grid: domain bounds must satisfy xmin < xmax and ymin < ymax");
        if (nx < 4 || ny < 4 || ntheta < 4)
            throw ConfigurationError("grid: need at least 4 cells per axis");
        dx = (xmax - xmin) / nx;
        dy = (ymax - ymin) / ny;
        dtheta = kTwoPi / ntheta;
    }

    std::size_t node_count() const {
        return static_cast<std::size_t>(nx + 1) * (ny + 1) * ntheta;
    }

    // Index map (documented bijection): theta is the innermost axis.
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * (ny + 1) + j) * ntheta + k;
    }

    int wrap_k(int k) const {
        k %= ntheta;
        return k < 0 ? k + ntheta : k;
    }

    bool contains(double x, double y) const {
        return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
    }

    bool valid_node(int i, int j, int k) const {
        return i >= 0 && i <= nx && j >= 0 && j <= ny && k >= 0 && k < ntheta;
    }

    Config node_config(int i, int j, int k) const {
        if (!valid_node(i, j, k))
            throw std::out_of_range("grid: node index (" + std::to_string(i) + "," +
                                    std::to_string(j) + "," + std::to_string(k) + ") out of range");
        return Config(xmin + i * dx, ymin + j * dy, k * dtheta);
    }

    // Node closest to q in per-axis grid distance (hence in max-norm), heading
    // measured periodically. Exact midpoints round toward the lower index.
    NodeIndex nearest_node(const Config& q) const {
        if (!contains(q.x, q.y))
            throw std::domain_error("grid: configuration outside spatial domain");
        auto round_low = [](double t) { return static_cast<int>(std::ceil(t - 0.5)); };
        NodeIndex n;
        n.i = std::min(std::max(round_low((q.x - xmin) / dx), 0), nx);
        n.j = std::min(std::max(round_low((q.y - ymin) / dy), 0), ny);
        n.k = wrap_k(round_low(normalize_angle(q.theta) / dtheta));
        return n;
    }
};

struct Gradient {
    double ux = 0;
    double uy = 0;
    double utheta = 0;
};

// Scalar field over a GridSpec. Entries are either finite and >= 0 or the kInf
// sentinel. Immutable-after-construction for readers; solver sweeps mutate it
// single-writer.
class Field3 {
  public:
    Field3() = default;
    explicit Field3(const GridSpec& spec, double fill = kInf)
        : spec_(spec), data_(spec.node_count(), fill) {}

    const GridSpec& spec() const { return spec_; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    double& at(int i, int j, int k) { return data_[spec_.index(i, j, k)]; }
    double at(int i, int j, int k) const { return data_[spec_.index(i, j, k)]; }

    // Trilinear interpolation over the 8 surrounding nodes, periodic in theta.
    // If any corner is the INF sentinel the sample is INF.
    double sample(const Config& q) const {
        if (!spec_.contains(q.x, q.y))
            throw std::domain_error("field: sample outside spatial domain");
        double tx = (q.x - spec_.xmin) / spec_.dx;
        double ty = (q.y - spec_.ymin) / spec_.dy;
        double tt = normalize_angle(q.theta) / spec_.dtheta;

        auto cell = [](double t, int cells) {
            int c = static_cast<int>(std::floor(t));
            if (c < 0) c = 0;
            if (c > cells - 1) c = cells - 1;
            return c;
        };
        const int i0 = cell(tx, spec_.nx);
        const int j0 = cell(ty, spec_.ny);
        const int k0 = cell(tt, spec_.ntheta);
        const int k1 = spec_.wrap_k(k0 + 1);
        const double fx = std::min(std::max(tx - i0, 0.0), 1.0);
        const double fy = std::min(std::max(ty - j0, 0.0), 1.0);
        const double ft = std::min(std::max(tt - k0, 0.0), 1.0);

        double c[8];
        int n = 0;
        for (int di = 0; di <= 1; ++di)
            for (int dj = 0; dj <= 1; ++dj)
                for (int dk = 0; dk <= 1; ++dk) {
                    double v = at(i0 + di, j0 + dj, dk ? k1 : k0);
                    if (is_infinite(v)) return kInf;
                    c[n++] = v;
                }
        // c ordered as (di,dj,dk) with dk fastest
        double c00 = c[0] * (1 - ft) + c[1] * ft;
        double c01 = c[2] * (1 - ft) + c[3] * ft;
        double c10 = c[4] * (1 - ft) + c[5] * ft;
        double c11 = c[6] * (1 - ft) + c[7] * ft;
        double c0 = c00 * (1 - fy) + c01 * fy;
        double c1 = c10 * (1 - fy) + c11 * fy;
        return c0 * (1 - fx) + c1 * fx;
    }

    // Central differences of the interpolated field, one grid spacing per axis;
    // the heading offsets wrap periodically. Returns nullopt if any of the six
    // samples touches the INF sentinel (caller decides the fallback). Requires q
    // at least one cell away from the spatial boundary.
    std::optional<Gradient> gradient(const Config& q) const {
        const double hx = spec_.dx, hy = spec_.dy, ht = spec_.dtheta;
        double s[6] = {
            sample(Config(q.x + hx, q.y, q.theta)), sample(Config(q.x - hx, q.y, q.theta)),
            sample(Config(q.x, q.y + hy, q.theta)), sample(Config(q.x, q.y - hy, q.theta)),
            sample(Config(q.x, q.y, q.theta + ht)), sample(Config(q.x, q.y, q.theta - ht))};
        for (double v : s)
            if (is_infinite(v)) return std::nullopt;
        return Gradient{(s[0] - s[1]) / (2 * hx), (s[2] - s[3]) / (2 * hy), (s[4] - s[5]) / (2 * ht)};
    }

  private:
    GridSpec spec_;
    std::vector<double> data_;
};

}  // namespace carplan
