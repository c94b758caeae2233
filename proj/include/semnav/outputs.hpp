#pragma once
// outputs.hpp - episode artifacts: CSV logs, summary.json, map PGM and overlay PPM.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semnav/image_io.hpp"
#include "semnav/occupancy_grid.hpp"
#include "semnav/simulator.hpp"
#include "semnav/text.hpp"

namespace semnav {

/// Cell window [u0, u1) x [v0, v1) of a grid.
struct CellWindow {
    int u0 = 0, v0 = 0, u1 = 0, v1 = 0;
    int width() const { return u1 - u0; }
    int height() const { return v1 - v0; }

    static CellWindow full(const GridConfig& g) { return {0, 0, g.width, g.height}; }
    /// Cells covering `b`, clipped to the grid.
    static CellWindow covering(const Bounds& b, const GridConfig& g) {
        const Cell lo = world_to_pixel_unchecked(b.min.x, b.min.y, g);
        const Cell hi = world_to_pixel_unchecked(b.max.x, b.max.y, g);
        return {std::clamp(lo.u, 0, g.width - 1), std::clamp(lo.v, 0, g.height - 1),
                std::clamp(hi.u, 0, g.width - 1) + 1, std::clamp(hi.v, 0, g.height - 1) + 1};
    }
};

struct OverlayLayers {
    const OccupancyGrid* raw = nullptr;       // black
    const OccupancyGrid* semantic = nullptr;  // red
    const OccupancyGrid* inflated = nullptr;  // light gray margin
    std::vector<Cell> path;                   // green
    std::vector<Vec2> trajectory;             // green polyline
    std::vector<Vec2> waypoints;              // blue
    std::vector<Vec2> goals;                  // blue crosses
};

inline constexpr Rgb kOverlayBackground{255, 255, 255};
inline constexpr Rgb kOverlayMargin{210, 210, 210};
inline constexpr Rgb kOverlayObstacle{0, 0, 0};
inline constexpr Rgb kOverlaySemantic{255, 0, 0};
inline constexpr Rgb kOverlayPath{0, 170, 0};
inline constexpr Rgb kOverlayWaypoint{0, 0, 255};

inline Image<Rgb> render_overlay(const GridConfig& g, const CellWindow& win, const OverlayLayers& layers) {
    Image<Rgb> img(win.width(), win.height(), kOverlayBackground);
    auto put = [&](Cell c, Rgb color) {
        if (c.u >= win.u0 && c.u < win.u1 && c.v >= win.v0 && c.v < win.v1) img.at(c.v - win.v0, c.u - win.u0) = color;
    };
    auto paint = [&](const OccupancyGrid* grid, Rgb color) {
        if (!grid) return;
        for (int v = win.v0; v < win.v1; ++v)
            for (int u = win.u0; u < win.u1; ++u)
                if (grid->occupied({u, v})) put({u, v}, color);
    };
    paint(layers.inflated, kOverlayMargin);
    paint(layers.raw, kOverlayObstacle);
    paint(layers.semantic, kOverlaySemantic);
    for (const Cell c : layers.path) put(c, kOverlayPath);
    for (std::size_t i = 0; i < layers.trajectory.size(); ++i) {
        const Vec2 a = layers.trajectory[i];
        const Vec2 b = i + 1 < layers.trajectory.size() ? layers.trajectory[i + 1] : a;
        const int n = std::max(1, static_cast<int>(std::ceil(distance(a, b) / (0.5 * g.resolution))));
        for (int k = 0; k <= n; ++k) {
            const Vec2 p = a + (static_cast<double>(k) / n) * (b - a);
            put(world_to_pixel_unchecked(p.x, p.y, g), kOverlayPath);
        }
    }
    for (const Vec2 w : layers.waypoints) {
        const Cell c = world_to_pixel_unchecked(w.x, w.y, g);
        for (int dv = -1; dv <= 1; ++dv)
            for (int du = -1; du <= 1; ++du) put({c.u + du, c.v + dv}, kOverlayWaypoint);
    }
    for (const Vec2 w : layers.goals) {
        const Cell c = world_to_pixel_unchecked(w.x, w.y, g);
        for (int d = -3; d <= 3; ++d) {
            put({c.u + d, c.v + d}, kOverlayWaypoint);
            put({c.u + d, c.v - d}, kOverlayWaypoint);
        }
    }
    return img;
}

inline std::string trajectory_csv(const EpisodeLog& log) {
    std::string out = "t,x,y,theta,v,omega,plan_id\n";
    for (const auto& r : log.ticks) {
        out += text::num(r.t) + ',' + text::num(r.pose.x) + ',' + text::num(r.pose.y) + ',' + text::num(r.pose.theta) +
               ',' + text::num(r.cmd.v) + ',' + text::num(r.cmd.omega) + ',' + std::to_string(r.plan_id) + '\n';
    }
    return out;
}

inline std::string commands_csv(const EpisodeLog& log) {
    std::string out = "t,v,omega\n";
    for (const auto& r : log.ticks) out += text::num(r.t) + ',' + text::num(r.cmd.v) + ',' + text::num(r.cmd.omega) + '\n';
    return out;
}

inline std::string metrics_csv(const EpisodeLog& log) {
    std::string out = "t,explored_area_m2,distance_m\n";
    for (const auto& m : log.metrics)
        out += text::num(m.t) + ',' + text::num(m.explored_area_m2) + ',' + text::num(m.distance_m) + '\n';
    return out;
}

inline std::string events_csv(const EpisodeLog& log) {
    std::string out = "t,event,index,detail\n";
    for (const auto& e : log.events) {
        std::string detail = e.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        std::replace(detail.begin(), detail.end(), '\n', ' ');
        out += text::num(e.t) + ',' + e.kind + ',' + std::to_string(e.index) + ',' + detail + '\n';
    }
    return out;
}

inline nlohmann::ordered_json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json summary_json(const EpisodeLog& log) {
    nlohmann::ordered_json j;
    j["scenario"] = log.scenario;
    j["outcome"] = std::string(to_string(log.outcome));
    j["distance_m"] = log.distance_m;
    j["time_s"] = log.duration_s;
    j["hazard_violations"] = log.hazard_violations;
    j["collisions"] = log.collisions;
    j["min_clearance_m"] = finite_or_null(log.min_clearance_m);
    j["plan_min_clearance_m"] = finite_or_null(log.plan_clearance_min());
    j["goals_reached"] = log.goals_reached;
    j["goals_total"] = log.goals.size();
    j["plans"] = log.plans.size();
    j["sensor_frames"] = log.sensor_frames;
    j["wall_time_s"] = log.wall_time_s;
    return j;
}

inline Image<Rgb> episode_overlay(const EpisodeLog& log) {
    if (log.raw.cells().empty()) return Image<Rgb>(1, 1, kOverlayBackground);
    OverlayLayers layers;
    layers.raw = &log.raw;
    layers.semantic = &log.semantic;
    layers.inflated = &log.inflated;
    for (const auto& t : log.ticks) layers.trajectory.push_back(t.pose.position());
    layers.waypoints = log.last_waypoints;
    layers.goals = log.goals;
    return render_overlay(log.grid, CellWindow::covering(log.bounds, log.grid), layers);
}

/// Writes the episode artifact set into `dir` (created if missing).
inline void write_outputs(const EpisodeLog& log, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, dir.string() + ": " + ec.message());
    io::write_file(dir / "trajectory.csv", trajectory_csv(log));
    io::write_file(dir / "commands.csv", commands_csv(log));
    io::write_file(dir / "metrics.csv", metrics_csv(log));
    io::write_file(dir / "events.csv", events_csv(log));
    io::write_file(dir / "summary.json", summary_json(log).dump(2) + "\n");
    const OccupancyGrid& map = log.raw;
    io::write_file(dir / "map.pgm", map.cells().empty() ? io::encode_pgm(Image<std::uint8_t>(1, 1, 0))
                                                                   : map.to_pgm());
    io::write_file(dir / "overlay.ppm", io::encode_ppm(episode_overlay(log)));
}

}  // namespace semnav
