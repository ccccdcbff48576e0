#pragma once

// Binary container for solved value fields (.cpf). Fixed little-endian
// layout, documented byte-exactly in docs/formats.md: an 8-byte magic,
// version/flags words, the grid spec, car parameters, goal, sentinel and
// iteration metadata, followed by the raw f64 value array and the two i8
// recorded-control arrays. Save/load round-trips are bit-identical.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "carplan/errors.hpp"
#include "carplan/grid.hpp"
#include "carplan/solver.hpp"

namespace carplan {

inline constexpr char kFieldMagic[8] = {'C', 'A', 'R', 'P', 'L', 'A', 'N', '\0'};
inline constexpr std::uint32_t kFieldVersion = 1;

namespace detail {

template <typename T>
void write_raw(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in, const char* what) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw IoError(std::string("field file truncated while reading ") + what);
    return v;
}

}  // namespace detail

inline void save_field(const std::string& path, const SolveResult& res) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    const GridSpec& spec = res.u.spec();

    out.write(kFieldMagic, sizeof(kFieldMagic));
    detail::write_raw(out, kFieldVersion);
    detail::write_raw(out, static_cast<std::uint32_t>(res.converged ? 1 : 0));
    for (double v : {spec.xmin, spec.xmax, spec.ymin, spec.ymax}) detail::write_raw(out, v);
    detail::write_raw(out, static_cast<std::uint32_t>(spec.nx));
    detail::write_raw(out, static_cast<std::uint32_t>(spec.ny));
    detail::write_raw(out, static_cast<std::uint32_t>(spec.ntheta));
    detail::write_raw(out, static_cast<std::uint32_t>(res.outer_iterations));
    for (double v : {res.car.half_width, res.car.axle_offset, res.car.max_yaw_rate})
        detail::write_raw(out, v);
    for (double v : {res.goal.x, res.goal.y, res.goal.theta}) detail::write_raw(out, v);
    detail::write_raw(out, kInf);
    detail::write_raw(out, res.final_residual);

    const std::size_t n = spec.node_count();
    out.write(reinterpret_cast<const char*>(res.u.data().data()),
              static_cast<std::streamsize>(n * sizeof(double)));
    out.write(reinterpret_cast<const char*>(res.v_opt.data()), static_cast<std::streamsize>(n));
    out.write(reinterpret_cast<const char*>(res.w_opt.data()), static_cast<std::streamsize>(n));
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline SolveResult load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kFieldMagic, sizeof(magic)) != 0)
        throw IoError("'" + path + "' is not a carplan field file (bad magic)");
    const auto version = detail::read_raw<std::uint32_t>(in, "version");
    if (version != kFieldVersion)
        throw IoError("unsupported field file version " + std::to_string(version));
    const auto flags = detail::read_raw<std::uint32_t>(in, "flags");

    const double xmin = detail::read_raw<double>(in, "xmin");
    const double xmax = detail::read_raw<double>(in, "xmax");
    const double ymin = detail::read_raw<double>(in, "ymin");
    const double ymax = detail::read_raw<double>(in, "ymax");
    const auto nx = detail::read_raw<std::uint32_t>(in, "nx");
    const auto ny = detail::read_raw<std::uint32_t>(in, "ny");
    const auto ntheta = detail::read_raw<std::uint32_t>(in, "ntheta");
    const auto iterations = detail::read_raw<std::uint32_t>(in, "iterations");

    SolveResult res;
    res.car.half_width = detail::read_raw<double>(in, "half_width");
    res.car.axle_offset = detail::read_raw<double>(in, "axle_offset");
    res.car.max_yaw_rate = detail::read_raw<double>(in, "max_yaw_rate");
    const double gx = detail::read_raw<double>(in, "goal.x");
    const double gy = detail::read_raw<double>(in, "goal.y");
    const double gt = detail::read_raw<double>(in, "goal.theta");
    res.goal = Config(gx, gy, gt);
    const double sentinel = detail::read_raw<double>(in, "sentinel");
    if (sentinel != kInf) throw IoError("field file uses an unexpected INF sentinel");
    res.final_residual = detail::read_raw<double>(in, "residual");

    GridSpec spec(xmin, xmax, ymin, ymax, static_cast<int>(nx), static_cast<int>(ny),
                  static_cast<int>(ntheta));
    const std::size_t n = spec.node_count();
    res.u = Field3(spec, 0);
    if (!in.read(reinterpret_cast<char*>(res.u.data().data()),
                 static_cast<std::streamsize>(n * sizeof(double))))
        throw IoError("field file truncated while reading values");
    res.v_opt.resize(n);
    res.w_opt.resize(n);
    if (!in.read(reinterpret_cast<char*>(res.v_opt.data()), static_cast<std::streamsize>(n)) ||
        !in.read(reinterpret_cast<char*>(res.w_opt.data()), static_cast<std::streamsize>(n)))
        throw IoError("field file truncated while reading controls");

    res.converged = (flags & 1) != 0;
    res.outer_iterations = static_cast<int>(iterations);
    res.goal_node = spec.nearest_node(res.goal);
    return res;
}

// A saved field is usable with a scene only if the domain, car and goal match.
inline void ensure_compatible(const SolveResult& res, const Scene& scene) {
    const GridSpec& spec = res.u.spec();
    const bool same_domain = spec.xmin == scene.xmin && spec.xmax == scene.xmax &&
                             spec.ymin == scene.ymin && spec.ymax == scene.ymax;
    const bool same_car = res.car.half_width == scene.car.half_width &&
                          res.car.axle_offset == scene.car.axle_offset &&
                          res.car.max_yaw_rate == scene.car.max_yaw_rate;
    const bool same_goal = res.goal.x == scene.goal.x && res.goal.y == scene.goal.y &&
                           res.goal.theta == scene.goal.theta;
    if (!same_domain) throw CompatibilityError("field/scene mismatch: domain bounds differ");
    if (!same_car) throw CompatibilityError("field/scene mismatch: car parameters differ");
    if (!same_goal) throw CompatibilityError("field/scene mismatch: goal configuration differs");
}

}  // namespace carplan
