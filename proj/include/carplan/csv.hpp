#pragma once

// CSV writers for trajectories and value-field slices. Numbers are rendered
// with std::to_chars (shortest round-trip form), so output is locale
// independent and identical runs produce identical bytes.

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "carplan/errors.hpp"
#include "carplan/grid.hpp"
#include "carplan/trajectory.hpp"

namespace carplan {

namespace detail {

inline void append_number(std::string& out, double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, p);
}

inline double parse_csv_number(const std::string& field, const std::string& where) {
    double v = 0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || p != field.data() + field.size())
        throw IoError(where + ": expected a number, got '" + field + "'");
    return v;
}

inline void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);  // binary: no newline translation
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace detail

inline std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,x,y,theta,v,omega\n";
    for (const TrajectorySample& s : traj.samples) {
        detail::append_number(out, s.t);
        out.push_back(',');
        detail::append_number(out, s.q.x);
        out.push_back(',');
        detail::append_number(out, s.q.y);
        out.push_back(',');
        detail::append_number(out, s.q.theta);
        out.push_back(',');
        out += std::to_string(static_cast<int>(s.control.v));
        out.push_back(',');
        out += std::to_string(static_cast<int>(s.control.w));
        out.push_back('\n');
    }
    return out;
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    detail::write_text(path, trajectory_csv(traj));
}

// Reads back a trajectory table written by trajectory_csv (used by `render`).
inline Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line != "t,x,y,theta,v,omega")
        throw IoError(path + ": missing trajectory CSV header");
    Trajectory traj;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        fields.push_back(cur);
        if (fields.size() != 6)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected 6 columns");
        const std::string where = path + ":" + std::to_string(lineno);
        TrajectorySample s;
        s.t = detail::parse_csv_number(fields[0], where);
        s.q = Config(detail::parse_csv_number(fields[1], where),
                     detail::parse_csv_number(fields[2], where),
                     detail::parse_csv_number(fields[3], where));
        s.control.v = static_cast<std::int8_t>(detail::parse_csv_number(fields[4], where));
        s.control.w = static_cast<std::int8_t>(detail::parse_csv_number(fields[5], where));
        traj.samples.push_back(s);
    }
    if (!traj.samples.empty()) traj.duration = traj.samples.back().t;
    traj.kink_count = count_kinks(traj);
    return traj;
}

// u(x, y) over the heading plane nearest `theta`: rows "x,y,u", INF cells
// written as the sentinel value.
inline std::string slice_csv(const Field3& field, double theta) {
    const GridSpec& spec = field.spec();
    const int k = spec.nearest_node(Config(spec.xmin, spec.ymin, theta)).k;
    std::string out = "x,y,u\n";
    for (int i = 0; i <= spec.nx; ++i)
        for (int j = 0; j <= spec.ny; ++j) {
            detail::append_number(out, spec.xmin + i * spec.dx);
            out.push_back(',');
            detail::append_number(out, spec.ymin + j * spec.dy);
            out.push_back(',');
            detail::append_number(out, field.at(i, j, k));
            out.push_back('\n');
        }
    return out;
}

// Full finite point cloud "x,y,theta,u" for isocontour plots; nodes with
// u > max_value (when positive) are skipped, INF nodes always are.
inline std::string cloud_csv(const Field3& field, double max_value = 0) {
    const GridSpec& spec = field.spec();
    std::string out = "x,y,theta,u\n";
    for (int i = 0; i <= spec.nx; ++i)
        for (int j = 0; j <= spec.ny; ++j)
            for (int k = 0; k < spec.ntheta; ++k) {
                const double v = field.at(i, j, k);
                if (is_infinite(v)) continue;
                if (max_value > 0 && v > max_value) continue;
                detail::append_number(out, spec.xmin + i * spec.dx);
                out.push_back(',');
                detail::append_number(out, spec.ymin + j * spec.dy);
                out.push_back(',');
                detail::append_number(out, k * spec.dtheta);
                out.push_back(',');
                detail::append_number(out, v);
                out.push_back('\n');
            }
    return out;
}

}  // namespace carplan
