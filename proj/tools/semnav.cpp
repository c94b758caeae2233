// semnav - command-line driver: simulate episodes, plan on a static map, render a
// scenario, or run the reference segmenter on a single RGB-D frame.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "semnav/semnav.hpp"

namespace fs = std::filesystem;
using namespace semnav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUnsafe = 2;
constexpr int kExitUnreached = 3;

/// Failure tagged with the pipeline stage that raised it.
struct StageError {
    std::string stage;
    std::string message;
};

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw StageError{name, e.what()};
    }
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("semnav");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SEMNAV_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"
        if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
        else spdlog::warn("SEMNAV_LOG: unknown level '{}'", env);
    }
}

Vec2 parse_xy(const std::string& s, const std::string& what) {
    const auto parts = text::split(s, ',');
    if (parts.size() != 2) throw Error(ErrorKind::InvalidInput, what + ": expected x,y");
    return {text::parse_double(parts[0], what), text::parse_double(parts[1], what)};
}

Rgb parse_rgb(const std::string& s) {
    const auto parts = text::split(s, ',');
    if (parts.size() != 3) throw Error(ErrorKind::InvalidInput, "--beware-color: expected r,g,b");
    Rgb c;
    std::uint8_t* ch[3] = {&c.r, &c.g, &c.b};
    for (int i = 0; i < 3; ++i) {
        const long long v = text::parse_int(parts[i], "--beware-color");
        if (v < 0 || v > 255) throw Error(ErrorKind::InvalidInput, "--beware-color: channel out of range");
        *ch[i] = static_cast<std::uint8_t>(v);
    }
    return c;
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides,
                       std::optional<std::uint64_t> seed) {
    Scenario sc = stage("parse", [&] { return parse_scenario(io::read_file(path)); });
    if (!overrides.empty()) sc = stage("override", [&] { return apply_overrides(sc, overrides); });
    if (seed) sc.seed = *seed;
    stage("validate", [&] {
        validate_scenario(sc);
        return 0;
    });
    return sc;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    std::vector<std::string> scenarios;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
    bool debug_frames = false;
    int jobs = 1;
};

int exit_code_for(const EpisodeLog& log) {
    switch (log.outcome) {
    case Outcome::Success: return log.hazard_violations > 0 ? kExitUnsafe : kExitOk;
    case Outcome::Collision: return kExitUnsafe;
    case Outcome::Timeout:
    case Outcome::Unreachable: return kExitUnreached;
    case Outcome::None: break;
    }
    return kExitUnreached;
}

int simulate_one(const std::string& path, const fs::path& out, const SimulateArgs& a) {
    try {
        const Scenario sc = load_scenario(path, a.overrides, a.seed);
        EpisodeOptions opts;
        if (a.debug_frames) {
            const fs::path frames = out / "frames";
            fs::create_directories(frames);
            opts.render_rgb = true;
            opts.on_frame = [frames](std::size_t i, const Pose2D&, const SensorFrame& f) {
                char stem[32];
                std::snprintf(stem, sizeof stem, "%05zu", i);
                io::write_file(frames / (std::string(stem) + "_rgb.ppm"), io::encode_ppm(f.rgb));
                io::write_file(frames / (std::string(stem) + "_depth.pgm"),
                               io::encode_pgm16(io::depth_to_millimeters(f.depth)));
                io::write_file(frames / (std::string(stem) + "_mask.pgm"),
                               io::encode_pgm(io::mask_to_pgm_image(f.mask)));
            };
        }
        spdlog::info("{}: running episode (seed {})", sc.name, sc.seed);
        const EpisodeLog log = stage("simulate", [&] { return run_episode(sc, opts); });
        stage("write", [&] {
            write_outputs(log, out);
            return 0;
        });
        for (const auto& e : log.events)
            if (e.kind == "plan_failed") spdlog::warn("{}: planning failed at t={}: {}", sc.name, text::num(e.t), e.detail);
        const int code = exit_code_for(log);
        std::cout << sc.name << ": outcome=" << to_string(log.outcome) << " distance_m=" << text::fixed(log.distance_m, 2)
                  << " time_s=" << text::fixed(log.duration_s, 1) << " hazard_violations=" << log.hazard_violations
                  << " collisions=" << log.collisions << " exit=" << code << "\n";
        return code;
    } catch (const StageError& e) {
        std::cerr << "semnav: " << path << ": " << e.stage << ": " << e.message << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "semnav: " << path << ": " << e.what() << "\n";
        return kExitInput;
    }
}

int run_simulate(const SimulateArgs& a) {
    if (a.scenarios.size() == 1) return simulate_one(a.scenarios.front(), a.out, a);

    // batch mode: one sub-directory per scenario file, episodes share nothing
    std::vector<int> codes(a.scenarios.size(), kExitOk);
    std::atomic<std::size_t> next{0};
    std::mutex print;
    auto worker = [&] {
        for (std::size_t i = next++; i < a.scenarios.size(); i = next++) {
            const fs::path out = fs::path(a.out) / (std::to_string(i) + "_" + fs::path(a.scenarios[i]).stem().string());
            codes[i] = simulate_one(a.scenarios[i], out, a);
        }
    };
    const int jobs = std::clamp<int>(a.jobs, 1, static_cast<int>(a.scenarios.size()));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (std::count(codes.begin(), codes.end(), kExitInput)) return kExitInput;
    return *std::max_element(codes.begin(), codes.end());
}

// ---------------------------------------------------------------------------
// plan

struct PlanArgs {
    std::string map;
    std::string out = "out";
    std::string start, goal;
    bool cells = false;
    double resolution = 0.05;
    double vehicle_width = 0.7;
    double safety_margin = 0.1;
    double theta_th_deg = 10.0;
    double max_spacing = 2.0;
    long long max_expansions = 0;
};

int run_plan(const PlanArgs& a) {
    try {
        const OccupancyGrid raw =
            stage("load", [&] { return OccupancyGrid::from_pgm(io::read_pgm(a.map), a.resolution); });
        const GridConfig& gc = raw.config();
        const int r_i = inflation_radius({a.vehicle_width, a.safety_margin}, a.resolution);
        const OccupancyGrid inflated = inflate(raw, r_i);

        auto to_cell = [&](const std::string& s, const std::string& what) {
            const Vec2 p = parse_xy(s, what);
            if (a.cells) {
                const Cell c{static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
                if (!gc.contains(c)) throw Error(ErrorKind::OutOfBounds, what + " cell lies outside the map");
                return c;
            }
            return world_to_pixel(p.x, p.y, gc);
        };
        const Cell start = stage("input", [&] { return to_cell(a.start, "--start"); });
        const Cell goal = stage("input", [&] { return to_cell(a.goal, "--goal"); });

        PlannerConfig cfg;
        cfg.theta_th = deg2rad(a.theta_th_deg);
        cfg.max_spacing = a.max_spacing;
        cfg.max_expansions = a.max_expansions;
        cfg.validate();

        CellPath path;
        try {
            const auto s = snap_to_free(inflated, start, 2 * r_i);
            const auto g = snap_to_free(inflated, goal, 2 * r_i);
            if (!s) throw Error(ErrorKind::GoalUnreachable, "no free cell near the start");
            if (!g) throw Error(ErrorKind::GoalUnreachable, "no free cell near the goal");
            path = astar(inflated, *s, *g, cfg);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NoPath || e.kind() == ErrorKind::GoalUnreachable) {
                std::cerr << "semnav: plan: " << to_string(e.kind()) << ": " << e.what() << "\n";
                return kExitUnsafe;
            }
            throw StageError{"plan", e.what()};
        }
        const Waypoints wp = refine_waypoints(path, cfg, gc);

        stage("write", [&] {
            fs::create_directories(a.out);
            io::write_file(fs::path(a.out) / "path.csv", path_to_csv(path, gc));
            io::write_file(fs::path(a.out) / "waypoints.csv", waypoints_to_csv(wp));
            OverlayLayers layers;
            layers.raw = &raw;
            layers.inflated = &inflated;
            layers.path = path.cells;
            layers.waypoints = wp.points;
            io::write_file(fs::path(a.out) / "overlay.ppm",
                           io::encode_ppm(render_overlay(gc, CellWindow::full(gc), layers)));
            return 0;
        });
        std::cout << "cost_cells=" << text::num(path.total_cost())
                  << " cost_m=" << text::num(path.total_cost() * a.resolution) << " cells=" << path.cells.size()
                  << " waypoints=" << wp.points.size() << "\n";
        return kExitOk;
    } catch (const StageError& e) {
        std::cerr << "semnav: plan: " << e.stage << ": " << e.message << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "semnav: plan: " << e.what() << "\n";
        return kExitInput;
    }
}

// ---------------------------------------------------------------------------
// render

Image<Rgb> render_world(const Scenario& sc) {
    const GridConfig& g = sc.grid;
    const CellWindow win = CellWindow::covering(sc.world.bounds, g);
    Image<Rgb> img(win.width(), win.height(), kOverlayBackground);
    for (int v = win.v0; v < win.v1; ++v) {
        for (int u = win.u0; u < win.u1; ++u) {
            const Vec2 p = pixel_to_world({u, v}, g);
            Rgb& px = img.at(v - win.v0, u - win.u0);
            for (const auto& z : sc.world.zones)
                if (point_in_polygon(p, z.polygon)) px = sc.color_of(z.cls);
            for (const auto& it : sc.world.beware_items)
                if (it.shape.distance_to(p) == 0.0) px = sc.color_of(it.cls);
            for (const auto& o : sc.world.obstacles)
                if (o.shape.distance_to(p) == 0.0) px = kOverlayObstacle;
        }
    }
    OverlayLayers marks;
    marks.waypoints = {{sc.robot.x, sc.robot.y}};
    marks.goals = sc.goals;
    const Image<Rgb> m = render_overlay(g, win, marks);
    for (std::size_t i = 0; i < m.data.size(); ++i)
        if (!(m.data[i] == kOverlayBackground)) img.data[i] = m.data[i];
    return img;
}

int run_render(const SimulateArgs& a) {
    if (a.scenarios.size() != 1) {
        std::cerr << "semnav: render: exactly one --scenario is required\n";
        return kExitInput;
    }
    try {
        const Scenario sc = load_scenario(a.scenarios.front(), a.overrides, a.seed);
        stage("render", [&] {
            fs::create_directories(a.out);
            const fs::path out(a.out);
            io::write_file(out / "world.ppm", io::encode_ppm(render_world(sc)));
            Scene scene(sc.world, sc.beware_list, [&](const std::string& c) { return sc.color_of(c); }, sc.seed);
            const SensorFrame f = scene.sense(sc.robot.start(), SensorModel::from_spec(sc.sensor), true);
            io::write_file(out / "rgb.ppm", io::encode_ppm(f.rgb));
            io::write_file(out / "depth.pgm", io::encode_pgm16(io::depth_to_millimeters(f.depth)));
            io::write_file(out / "mask.pgm", io::encode_pgm(io::mask_to_pgm_image(f.mask)));
            return 0;
        });
        return kExitOk;
    } catch (const StageError& e) {
        std::cerr << "semnav: render: " << e.stage << ": " << e.message << "\n";
        return kExitInput;
    }
}

// ---------------------------------------------------------------------------
// segment

struct SegmentArgs {
    std::string rgb, depth, scenario;
    std::string out = "out";
    std::vector<std::string> colors;
    double threshold = 60.0 / 441.0;
};

int run_segment(const SegmentArgs& a) {
    try {
        SensorSpec sensor;
        FilterConfig filter;
        if (!a.scenario.empty()) {
            const Scenario sc = load_scenario(a.scenario, {}, std::nullopt);
            sensor = sc.sensor;
            filter = sc.perception.filter;
        }
        const ColorFrame rgb = stage("load", [&] { return io::read_ppm(a.rgb); });
        const auto mm = stage("load", [&] { return io::read_pgm(a.depth); });
        if (!rgb.same_shape(mm.width, mm.height))
            throw StageError{"input", "rgb is " + std::to_string(rgb.width) + "x" + std::to_string(rgb.height) +
                                          " but depth is " + std::to_string(mm.width) + "x" + std::to_string(mm.height)};
        sensor.width = mm.width;
        sensor.height = mm.height;
        const CameraIntrinsics k = sensor.intrinsics();
        const DepthFrame depth = io::depth_from_millimeters(mm, k);

        std::vector<Rgb> colors;
        for (const auto& c : a.colors) colors.push_back(stage("input", [&] { return parse_rgb(c); }));
        const ColorThresholdSegmenter seg(colors, a.threshold);
        const SemanticMask mask = stage("segment", [&] { return seg.segment(rgb, depth); });

        const SensorMount mount = sensor.mount();
        auto to_robot = [&](PointCloud pc) {
            for (auto& q : pc.points) q.p = camera_to_robot(q.p, mount);
            return pc;
        };
        PointCloud composite = filter_geometric(to_robot(back_project(depth, Provenance::Geometric)), filter);
        const PointCloud semantic = to_robot(back_project(apply_mask(depth, mask), Provenance::Semantic));
        composite.append(semantic);

        stage("write", [&] {
            fs::create_directories(a.out);
            io::write_file(fs::path(a.out) / "mask.pgm", io::encode_pgm(io::mask_to_pgm_image(mask)));
            std::string csv = "x,y,z,provenance\n";
            for (const auto& q : composite.points)
                csv += text::num(q.p.x) + ',' + text::num(q.p.y) + ',' + text::num(q.p.z) + ',' +
                       (q.prov == Provenance::Semantic ? "S" : "G") + '\n';
            io::write_file(fs::path(a.out) / "cloud.csv", csv);
            return 0;
        });
        std::cout << "points=" << composite.size() << " semantic=" << semantic.size() << "\n";
        return kExitOk;
    } catch (const StageError& e) {
        std::cerr << "semnav: segment: " << e.stage << ": " << e.message << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "semnav: segment: " << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Semantic-aware navigation pipeline: simulation, planning, rendering and segmentation"};
    app.require_subcommand(1);

    SimulateArgs sim;
    std::uint64_t seed = 0;
    auto add_scenario_flags = [&](CLI::App* sub) {
        sub->add_option("--scenario", sim.scenarios, "Scenario JSON file (repeatable)")->required();
        sub->add_option("--out", sim.out, "Output directory");
        sub->add_option("--seed", seed, "Override the scenario seed");
        sub->add_option("--override", sim.overrides, "Dotted-path override key=value (repeatable)");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "Run closed-loop episodes and write logs");
    add_scenario_flags(simulate);
    simulate->add_flag("--debug-frames", sim.debug_frames, "Dump every sensor frame");
    simulate->add_option("--jobs", sim.jobs, "Concurrent episodes in batch mode")->check(CLI::PositiveNumber);

    CLI::App* render = app.add_subcommand("render", "Render the world and the start-pose sensor frame");
    add_scenario_flags(render);

    PlanArgs pl;
    CLI::App* plan_cmd = app.add_subcommand("plan", "Inflate, search and refine on a static PGM map");
    plan_cmd->add_option("--map", pl.map, "Binary PGM map (nonzero = occupied)")->required()->check(CLI::ExistingFile);
    plan_cmd->add_option("--start", pl.start, "Start x,y")->required();
    plan_cmd->add_option("--goal", pl.goal, "Goal x,y")->required();
    plan_cmd->add_flag("--cells", pl.cells, "Interpret --start/--goal as cell u,v");
    plan_cmd->add_option("--resolution", pl.resolution, "Meters per cell")->check(CLI::PositiveNumber);
    plan_cmd->add_option("--vehicle-width", pl.vehicle_width, "Vehicle width (m)");
    plan_cmd->add_option("--safety-margin", pl.safety_margin, "Safety margin (m)");
    plan_cmd->add_option("--theta-th", pl.theta_th_deg, "Waypoint turn threshold (deg)");
    plan_cmd->add_option("--max-spacing", pl.max_spacing, "Maximum waypoint spacing (m)");
    plan_cmd->add_option("--max-expansions", pl.max_expansions, "A* expansion budget (0 = 4*W*H)");
    plan_cmd->add_option("--out", pl.out, "Output directory");

    SegmentArgs sg;
    CLI::App* segment = app.add_subcommand("segment", "Segment one RGB-D frame and emit the composite cloud");
    segment->add_option("--rgb", sg.rgb, "PPM color image")->required()->check(CLI::ExistingFile);
    segment->add_option("--depth", sg.depth, "16-bit PGM depth in millimeters")->required()->check(CLI::ExistingFile);
    segment->add_option("--beware-color", sg.colors, "Beware color r,g,b (repeatable)");
    segment->add_option("--threshold", sg.threshold, "Color distance threshold as a fraction of the RGB diagonal");
    segment->add_option("--scenario", sg.scenario, "Scenario providing sensor and filter settings");
    segment->add_option("--out", sg.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }
    if (simulate->count("--seed") || render->count("--seed")) sim.seed = seed;

    if (*simulate) return run_simulate(sim);
    if (*render) return run_render(sim);
    if (*plan_cmd) return run_plan(pl);
    return run_segment(sg);
}
