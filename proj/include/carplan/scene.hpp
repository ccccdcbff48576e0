#pragma once

// Scene files: a line-oriented key/value text format describing the domain,
// car, obstacles, goal and named start configurations. See docs/formats.md
// for the exact grammar.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "carplan/errors.hpp"
#include "carplan/geometry.hpp"
#include "carplan/grid.hpp"

namespace carplan {

struct Scene {
    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    CarParams car;
    ObstacleSet obstacles;
    Config goal;
    std::vector<std::pair<std::string, Config>> starts;

    bool contains(double x, double y) const {
        return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
    }

    GridSpec make_grid(int nx, int ny, int ntheta) const {
        return GridSpec(xmin, xmax, ymin, ymax, nx, ny, ntheta);
    }

    const Config* find_start(const std::string& name) const {
        for (const auto& [n, q] : starts)
            if (n == name) return &q;
        return nullptr;
    }

    void validate() const {
        if (!(xmin < xmax && ymin < ymax))
            throw SceneError("domain bounds must satisfy xmin < xmax and ymin < ymax");
        car.validate();
        for (const ConvexPolygon& p : obstacles.polygons) {
            if (p.pts.size() < 3) throw SceneError("obstacle polygon needs at least 3 vertices");
            if (polygon_area(p) <= 0) throw SceneError("obstacle polygon has zero area");
            if (!is_convex_ccw(p)) throw SceneError("obstacle polygon is not convex");
        }
        if (!contains(goal.x, goal.y)) throw SceneError("goal lies outside the domain");
        if (!is_admissible(car, obstacles, goal))
            throw SceneError("goal configuration is inadmissible (car would overlap an obstacle)");
        for (const auto& [name, q] : starts) {
            if (!contains(q.x, q.y))
                throw SceneError("start '" + name + "' lies outside the domain");
            if (!is_admissible(car, obstacles, q))
                throw SceneError("start '" + name + "' is inadmissible");
        }
    }
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string tok;
    for (char ch : line) {
        if (ch == '#') break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!tok.empty()) out.push_back(std::move(tok)), tok.clear();
        } else {
            tok.push_back(ch);
        }
    }
    if (!tok.empty()) out.push_back(std::move(tok));
    return out;
}

inline double parse_number(const std::string& tok, const std::string& where) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+') ++first;  // from_chars rejects a leading '+'
    double v = 0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last || first == last)
        throw SceneError("expected a number, got '" + tok + "'", where);
    return v;
}

}  // namespace detail

// Parses a scene from a stream. Clockwise obstacle polygons are reversed to
// counterclockwise with a warning. Throws SceneError with "name:line"
// locations on malformed input.
inline Scene parse_scene(std::istream& in, const std::string& name,
                         std::vector<std::string>* warnings = nullptr) {
    Scene scene;
    bool saw_domain = false, saw_car = false, saw_goal = false;
    std::string line;
    int lineno = 0;
    auto where = [&] { return name + ":" + std::to_string(lineno); };

    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = detail::tokenize(line);
        if (tok.empty()) continue;
        const std::string& key = tok[0];
        auto need = [&](std::size_t n) {
            if (tok.size() != n + 1)
                throw SceneError("'" + key + "' expects " + std::to_string(n) + " values", where());
        };
        auto num = [&](std::size_t idx) { return detail::parse_number(tok[idx], where()); };

        if (key == "domain") {
            need(4);
            scene.xmin = num(1);
            scene.xmax = num(2);
            scene.ymin = num(3);
            scene.ymax = num(4);
            saw_domain = true;
        } else if (key == "car") {
            need(3);
            scene.car = CarParams{num(1), num(2), num(3)};
            saw_car = true;
        } else if (key == "goal") {
            need(3);
            scene.goal = Config(num(1), num(2), num(3));
            saw_goal = true;
        } else if (key == "obstacle") {
            if (tok.size() < 7 || (tok.size() - 1) % 2 != 0)
                throw SceneError("'obstacle' expects at least 3 x y vertex pairs", where());
            ConvexPolygon poly;
            for (std::size_t t = 1; t < tok.size(); t += 2)
                poly.pts.push_back(Vec2{num(t), num(t + 1)});
            if (polygon_area(poly) == 0)
                throw SceneError("obstacle polygon has zero area", where());
            if (polygon_area(poly) < 0) {
                std::reverse(poly.pts.begin(), poly.pts.end());
                if (warnings)
                    warnings->push_back(where() + ": clockwise obstacle reversed to counterclockwise");
            }
            if (!is_convex_ccw(poly))
                throw SceneError("obstacle polygon is not convex", where());
            scene.obstacles.polygons.push_back(std::move(poly));
        } else if (key == "rect") {
            need(4);
            const double x0 = num(1), x1 = num(2), y0 = num(3), y1 = num(4);
            if (!(x0 < x1 && y0 < y1))
                throw SceneError("'rect' expects xmin < xmax and ymin < ymax", where());
            scene.obstacles.polygons.push_back(
                ConvexPolygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}});
        } else if (key == "start") {
            if (tok.size() != 5)
                throw SceneError("'start' expects a name followed by x y theta", where());
            scene.starts.emplace_back(tok[1], Config(num(2), num(3), num(4)));
        } else {
            throw SceneError("unknown key '" + key + "'", where());
        }
    }

    if (!saw_domain) throw SceneError("missing required 'domain' line", name);
    if (!saw_car) throw SceneError("missing required 'car' line", name);
    if (!saw_goal) throw SceneError("missing required 'goal' line", name);
    scene.validate();
    return scene;
}

inline Scene load_scene(const std::string& path, std::vector<std::string>* warnings = nullptr) {
    std::ifstream in(path);
    if (!in) throw SceneError("cannot open scene file", path);
    return parse_scene(in, path, warnings);
}

}  // namespace carplan
