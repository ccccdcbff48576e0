// carplan command-line interface: solve a scene for its travel-time field,
// trace and export time-optimal trajectories, extract plot-ready slices, and
// render SVG pictures. See README.md for formats and exit codes.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "carplan/carplan.hpp"

namespace {

constexpr int kExitLoadError = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitTrajectoryFailure = 4;
constexpr int kExitCompatibility = 5;
constexpr int kExitIoError = 6;
constexpr int kExitInternal = 10;

struct GridArg {
    int nx = 100, ny = 100, ntheta = 100;
};

GridArg parse_grid(const std::string& text) {
    GridArg g;
    const auto parse_int = [&](const std::string& tok) {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size() || v < 4) throw CLI::ValidationError("--grid", "expected integers >= 4");
        return v;
    };
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    if (parts.size() == 1) {
        g.nx = g.ny = g.ntheta = parse_int(parts[0]);
    } else if (parts.size() == 3) {
        g.nx = parse_int(parts[0]);
        g.ny = parse_int(parts[1]);
        g.ntheta = parse_int(parts[2]);
    } else {
        throw CLI::ValidationError("--grid", "expected I or I,J,K");
    }
    return g;
}

carplan::Config parse_config(const std::string& text) {
    double v[3];
    int field = 0;
    std::string cur;
    auto flush = [&] {
        if (field >= 3 || cur.empty()) throw CLI::ValidationError("--start", "expected x,y,theta");
        v[field++] = std::stod(cur);
        cur.clear();
    };
    for (char ch : text) {
        if (ch == ',')
            flush();
        else if (!std::isspace(static_cast<unsigned char>(ch)))
            cur.push_back(ch);
    }
    flush();
    if (field != 3) throw CLI::ValidationError("--start", "expected x,y,theta");
    return carplan::Config(v[0], v[1], v[2]);
}

carplan::Scene load_scene_or_report(const std::string& path) {
    std::vector<std::string> warnings;
    carplan::Scene scene = carplan::load_scene(path, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    return scene;
}

void warn_if_goal_off_grid(const carplan::Scene& scene, const carplan::GridSpec& spec) {
    const carplan::NodeIndex n = spec.nearest_node(scene.goal);
    const carplan::Config snapped = spec.node_config(n.i, n.j, n.k);
    const double off = std::max({std::fabs(snapped.x - scene.goal.x), std::fabs(snapped.y - scene.goal.y),
                                 carplan::angular_distance(snapped.theta, scene.goal.theta)});
    if (off > 1e-6)
        std::cerr << "warning: goal is " << off << " off-grid; value 0 is seeded at node (" << n.i
                  << "," << n.j << "," << n.k << ")\n";
}

int cmd_solve(const std::string& scene_path, const GridArg& grid, double eps, int max_iters,
              const std::string& out_path) {
    const carplan::Scene scene = load_scene_or_report(scene_path);
    const carplan::GridSpec spec = scene.make_grid(grid.nx, grid.ny, grid.ntheta);
    warn_if_goal_off_grid(scene, spec);

    carplan::SolverParams params;
    params.eps = eps;
    params.max_outer = max_iters;

    const auto t0 = std::chrono::steady_clock::now();
    const carplan::SolveResult res = carplan::solve(scene, spec, params);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::size_t finite = 0;
    for (double v : res.u.data())
        if (!carplan::is_infinite(v)) ++finite;

    carplan::save_field(out_path, res);
    std::printf("grid: %d x %d x %d (%zu nodes)\n", spec.nx, spec.ny, spec.ntheta, spec.node_count());
    std::printf("goal node: (%d, %d, %d)\n", res.goal_node.i, res.goal_node.j, res.goal_node.k);
    std::printf("outer iterations: %d (converged: %s)\n", res.outer_iterations,
                res.converged ? "yes" : "no");
    std::printf("final residual: %.3e\n", res.final_residual);
    std::printf("finite nodes: %zu (%.1f%%)\n", finite, 100.0 * finite / spec.node_count());
    std::printf("solve time: %.2fs\n", secs);
    std::printf("field written to %s\n", out_path.c_str());
    if (!res.converged) {
        std::cerr << "error: no convergence within " << max_iters << " outer iterations\n";
        return kExitNoConvergence;
    }
    return 0;
}

int cmd_trace(const std::string& scene_path, const std::string& field_path,
              const std::optional<std::string>& start_text, const std::optional<std::string>& start_name,
              carplan::TraceParams params, const std::optional<std::string>& out_path) {
    const carplan::Scene scene = load_scene_or_report(scene_path);
    const carplan::SolveResult res = carplan::load_field(field_path);
    carplan::ensure_compatible(res, scene);

    carplan::Config start;
    if (start_text) {
        start = parse_config(*start_text);
    } else if (start_name) {
        const carplan::Config* named = scene.find_start(*start_name);
        if (!named) throw carplan::SceneError("scene has no start named '" + *start_name + "'");
        start = *named;
    } else {
        throw carplan::SceneError("trace needs --start or --start-name");
    }

    const carplan::Trajectory traj = carplan::integrate(res, scene, start, params);
    if (out_path) carplan::write_trajectory_csv(*out_path, traj);
    std::printf("duration: %.6f (u(start) = %.6f)\n", traj.duration, res.u.sample(start));
    std::printf("kinks: %d\n", traj.kink_count);
    std::printf("reached_goal: %s\n", traj.reached_goal ? "yes" : "no");
    std::printf("samples: %zu\n", traj.samples.size());
    if (out_path) std::printf("trajectory written to %s\n", out_path->c_str());
    return traj.reached_goal ? 0 : kExitTrajectoryFailure;
}

int cmd_slice(const std::string& field_path, double theta, bool cloud, double max_value,
              const std::string& out_path) {
    const carplan::SolveResult res = carplan::load_field(field_path);
    const std::string body =
        cloud ? carplan::cloud_csv(res.u, max_value) : carplan::slice_csv(res.u, theta);
    carplan::detail::write_text(out_path, body);
    std::printf("%s written to %s\n", cloud ? "point cloud" : "slice", out_path.c_str());
    return 0;
}

int cmd_render(const std::string& scene_path, const std::optional<std::string>& traj_path,
               int extra_footprints, int width_px, const std::string& out_path) {
    const carplan::Scene scene = load_scene_or_report(scene_path);
    carplan::RenderOptions opts;
    opts.width_px = width_px;
    opts.extra_footprints = extra_footprints;
    if (traj_path) {
        const carplan::Trajectory traj = carplan::read_trajectory_csv(*traj_path);
        carplan::write_svg(out_path, scene, &traj, opts);
    } else {
        carplan::write_svg(out_path, scene, nullptr, opts);
    }
    std::printf("rendering written to %s\n", out_path.c_str());
    return 0;
}

int cmd_oracle(const std::string& scene_path, const GridArg& grid, int step_cells,
               const std::string& field_path, const std::optional<std::string>& out_path) {
    const carplan::Scene scene = load_scene_or_report(scene_path);
    const carplan::SolveResult res = carplan::load_field(field_path);
    ensure_compatible(res, scene);
    const carplan::GridSpec spec = res.u.spec();
    if (spec.nx != grid.nx || spec.ny != grid.ny || spec.ntheta != grid.ntheta)
        throw carplan::CompatibilityError("oracle: --grid does not match the saved field's grid");
    if (spec.node_count() > 2'000'000)
        throw carplan::ConfigurationError("oracle: grid too large for brute force (max ~2e6 nodes)");

    const carplan::Field3 oracle = carplan::dijkstra_travel_time(scene, spec, step_cells);
    const carplan::AdmissibilityMask mask = carplan::build_mask(scene.car, scene.obstacles, spec);
    const carplan::FieldComparison cmp = carplan::compare_fields(res.u, oracle, &mask);

    std::string report;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "both finite nodes: %zu\n", cmp.both_finite);
    report += buf;
    std::snprintf(buf, sizeof(buf), "finite only in solve: %zu\nfinite only in oracle: %zu\n",
                  cmp.only_first, cmp.only_second);
    report += buf;
    std::snprintf(buf, sizeof(buf),
                  "|solve - oracle|: median %.6f  p90 %.6f  p99 %.6f  max %.6f\n", cmp.median_abs,
                  cmp.p90_abs, cmp.p99_abs, cmp.max_abs);
    report += buf;
    std::snprintf(buf, sizeof(buf), "reachability mismatches beyond one cell of obstacles/boundary: %zu\n",
                  cmp.mismatches_beyond_one_cell);
    report += buf;

    std::fputs(report.c_str(), stdout);
    if (out_path) carplan::detail::write_text(*out_path, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"carplan: time-optimal kinematic-car path planning on a configuration grid"};
    app.require_subcommand(1);

    std::string scene_path, field_path, out_path, grid_text = "100", traj_path;
    std::optional<std::string> start_text, start_name, opt_out, opt_traj;
    double eps = 1e-6, theta = 0, max_value = 0;
    int max_iters = 500, step_cells = 1, width_px = 800, extra_footprints = 0;
    bool cloud = false;
    carplan::TraceParams trace_params;

    CLI::App* solve = app.add_subcommand("solve", "solve a scene for its travel-time field");
    solve->add_option("--scene", scene_path, "scene file")->required();
    solve->add_option("--grid", grid_text, "cells per axis: I or I,J,K (default 100)");
    solve->add_option("--eps", eps, "convergence tolerance (default 1e-6)");
    solve->add_option("--max-iters", max_iters, "outer iteration cap (default 500)");
    solve->add_option("--out", out_path, "output field container (.cpf)")->required();

    CLI::App* trace = app.add_subcommand("trace", "trace a trajectory on a solved field");
    trace->add_option("--scene", scene_path, "scene file")->required();
    trace->add_option("--field", field_path, "solved field (.cpf)")->required();
    trace->add_option("--start", start_text, "start configuration \"x,y,theta\"");
    trace->add_option("--start-name", start_name, "named start from the scene file");
    trace->add_option("--dt", trace_params.dt, "integration step (default 0.25*min(dx,dy))");
    trace->add_option("--goal-tol", trace_params.goal_tol, "capture radius (default 2*max(dx,dy))");
    trace->add_option("--theta-tol", trace_params.theta_tol, "heading capture (default 2*dtheta)");
    trace->add_option("--time-factor", trace_params.max_time_factor,
                      "time cap as a multiple of u(start) (default 1.5)");
    trace->add_option("--dead-band", trace_params.dead_band,
                      "switching dead band (default 1e-3 * median |grad u|)");
    trace->add_flag("--recorded-only", trace_params.recorded_only,
                    "use only node-recorded controls (no interpolated feedback law)");
    trace->add_option("--out", opt_out, "trajectory CSV output");

    CLI::App* slice = app.add_subcommand("slice", "export u(x,y,theta=const) or a point cloud");
    slice->add_option("--field", field_path, "solved field (.cpf)")->required();
    slice->add_option("--theta", theta, "heading of the slice plane (default 0)");
    slice->add_flag("--cloud", cloud, "emit the full finite (x,y,theta,u) point cloud");
    slice->add_option("--max-value", max_value, "skip nodes with u above this (cloud mode)");
    slice->add_option("--out", out_path, "CSV output")->required();

    CLI::App* render = app.add_subcommand("render", "render scene and trajectory to SVG");
    render->add_option("--scene", scene_path, "scene file")->required();
    render->add_option("--traj", opt_traj, "trajectory CSV from `trace`");
    render->add_option("--footprints", extra_footprints, "extra evenly spaced footprints");
    render->add_option("--width", width_px, "image width in pixels (default 800)");
    render->add_option("--out", out_path, "SVG output")->required();

    CLI::App* oracle = app.add_subcommand("oracle", "compare a solved field against brute force");
    oracle->add_option("--scene", scene_path, "scene file")->required();
    oracle->add_option("--grid", grid_text, "grid, must match the field (default 24,24,16)")
        ->default_val("24,24,16");
    oracle->add_option("--step-cells", step_cells, "cells per graph edge (default 1)");
    oracle->add_option("--field", field_path, "solved field to compare against")->required();
    oracle->add_option("--out", opt_out, "also write the report to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(scene_path, parse_grid(grid_text), eps, max_iters, out_path);
        if (trace->parsed())
            return cmd_trace(scene_path, field_path, start_text, start_name, trace_params, opt_out);
        if (slice->parsed()) return cmd_slice(field_path, theta, cloud, max_value, out_path);
        if (render->parsed())
            return cmd_render(scene_path, opt_traj, extra_footprints, width_px, out_path);
        if (oracle->parsed())
            return cmd_oracle(scene_path, parse_grid(grid_text), step_cells, field_path, opt_out);
    } catch (const carplan::SceneError& e) {
        std::cerr << "scene error: " << e.what() << "\n";
        return kExitLoadError;
    } catch (const carplan::TrajectoryError& e) {
        std::cerr << "trajectory error: " << e.what() << "\n";
        return kExitTrajectoryFailure;
    } catch (const carplan::CompatibilityError& e) {
        std::cerr << "compatibility error: " << e.what() << "\n";
        return kExitCompatibility;
    } catch (const carplan::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
