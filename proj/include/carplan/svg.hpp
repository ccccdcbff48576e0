#pragma once

// Standalone SVG renderings of a scene: domain frame, obstacles, traced
// trajectory polyline and car footprints at selected waypoints (start, each
// driving-direction reversal, final position). Footprints are drawn through
// the geometry module, so the picture shows the exact tested rectangles.

#include <cstdio>
#include <string>
#include <vector>

#include "carplan/csv.hpp"
#include "carplan/geometry.hpp"
#include "carplan/scene.hpp"
#include "carplan/trajectory.hpp"

namespace carplan {

struct RenderOptions {
    int width_px = 800;
    int extra_footprints = 0;  // evenly spaced footprints in addition to start/kinks/end
};

namespace detail {

class SvgCanvas {
  public:
    SvgCanvas(const Scene& scene, int width_px)
        : xmin_(scene.xmin), ymax_(scene.ymax),
          scale_(width_px / (scene.xmax - scene.xmin)),
          w_(width_px),
          h_(static_cast<int>(scale_ * (scene.ymax - scene.ymin) + 0.5)) {
        char head[256];
        std::snprintf(head, sizeof(head),
                      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                      "viewBox=\"0 0 %d %d\">\n",
                      w_, h_, w_, h_);
        body_ = head;
        body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    std::string px(double x) const { return fmt(scale_ * (x - xmin_)); }
    std::string py(double y) const { return fmt(scale_ * (ymax_ - y)); }

    void polygon(const std::vector<Vec2>& pts, const std::string& style) {
        body_ += "<polygon points=\"";
        for (const Vec2& p : pts) body_ += px(p.x) + "," + py(p.y) + " ";
        body_ += "\" " + style + "/>\n";
    }

    void polyline(const std::vector<Vec2>& pts, const std::string& style) {
        if (pts.size() < 2) return;
        body_ += "<polyline points=\"";
        for (const Vec2& p : pts) body_ += px(p.x) + "," + py(p.y) + " ";
        body_ += "\" fill=\"none\" " + style + "/>\n";
    }

    void line(Vec2 a, Vec2 b, const std::string& style) {
        body_ += "<line x1=\"" + px(a.x) + "\" y1=\"" + py(a.y) + "\" x2=\"" + px(b.x) +
                 "\" y2=\"" + py(b.y) + "\" " + style + "/>\n";
    }

    void circle(Vec2 c, double r_domain, const std::string& style) {
        body_ += "<circle cx=\"" + px(c.x) + "\" cy=\"" + py(c.y) + "\" r=\"" +
                 fmt(r_domain * scale_) + "\" " + style + "/>\n";
    }

    void frame() {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"0\" y=\"0\" width=\"%d\" height=\"%d\" fill=\"none\" "
                      "stroke=\"#444\" stroke-width=\"2\"/>\n",
                      w_, h_);
        body_ += buf;
    }

    std::string finish() {
        body_ += "</svg>\n";
        return body_;
    }

  private:
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return buf;
    }

    double xmin_, ymax_, scale_;
    int w_, h_;
    std::string body_;
};

inline void draw_footprint(SvgCanvas& canvas, const CarParams& car, const Config& q,
                           const std::string& fill) {
    const Footprint fp = footprint(car, q);
    canvas.polygon({fp.corners.begin(), fp.corners.end()},
                   "fill=\"" + fill + "\" fill-opacity=\"0.35\" stroke=\"#205080\" stroke-width=\"1.5\"");
    // heading tick: center to the middle of the front edge
    const Vec2 front = 0.5 * (fp.corners[0] + fp.corners[3]);
    canvas.line(Vec2{q.x, q.y}, front, "stroke=\"#205080\" stroke-width=\"1.5\"");
}

// Sample indices worth a footprint: start, each sample where v reverses
// sign, and the final sample.
inline std::vector<std::size_t> waypoint_indices(const Trajectory& traj, int extra) {
    std::vector<std::size_t> idx;
    if (traj.samples.empty()) return idx;
    idx.push_back(0);
    int last = 0;
    for (std::size_t s = 0; s < traj.samples.size(); ++s) {
        const int v = traj.samples[s].control.v;
        if (v == 0) continue;
        if (last != 0 && v != last) idx.push_back(s);
        last = v;
    }
    for (int e = 1; e <= extra; ++e)
        idx.push_back(e * (traj.samples.size() - 1) / (extra + 1));
    idx.push_back(traj.samples.size() - 1);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

}  // namespace detail

inline std::string render_svg(const Scene& scene, const Trajectory* traj = nullptr,
                              RenderOptions opts = {}) {
    detail::SvgCanvas canvas(scene, opts.width_px);
    canvas.frame();
    for (const ConvexPolygon& poly : scene.obstacles.polygons)
        canvas.polygon(poly.pts, "fill=\"black\"");

    // goal marker: footprint outline plus a dot, like the figures readers expect
    detail::draw_footprint(canvas, scene.car, scene.goal, "#e0b0b0");
    canvas.circle(Vec2{scene.goal.x, scene.goal.y}, 0.012 * (scene.xmax - scene.xmin),
                  "fill=\"#c02020\"");

    if (traj && !traj->samples.empty()) {
        std::vector<Vec2> pts;
        pts.reserve(traj->samples.size());
        for (const TrajectorySample& s : traj->samples) pts.push_back(Vec2{s.q.x, s.q.y});
        canvas.polyline(pts, "stroke=\"#2060c0\" stroke-width=\"2\"");
        for (std::size_t idx : detail::waypoint_indices(*traj, opts.extra_footprints))
            detail::draw_footprint(canvas, scene.car, traj->samples[idx].q, "#a0c0e0");
    }
    return canvas.finish();
}

inline void write_svg(const std::string& path, const Scene& scene, const Trajectory* traj = nullptr,
                      RenderOptions opts = {}) {
    detail::write_text(path, render_svg(scene, traj, opts));
}

}  // namespace carplan
