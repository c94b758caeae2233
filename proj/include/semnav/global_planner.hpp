#pragma once
// global_planner.hpp - full A* replanning on the inflated grid and turning-angle
// waypoint refinement.
//
// Costs are 1 per orthogonal step and sqrt(2) per diagonal step. A path cost is
// always evaluated as n_orth + n_diag * sqrt(2) from integer step counts, so two
// searches that find paths with the same step counts report bit-identical costs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "semnav/error.hpp"
#include "semnav/geometry.hpp"
#include "semnav/global_map.hpp"
#include "semnav/occupancy_grid.hpp"
#include "semnav/text.hpp"

namespace semnav {

struct PlannerConfig {
    double theta_th = deg2rad(10.0);  // rad
    double heuristic_weight = 1.0;
    long long max_expansions = 0;  // 0: 4 * W * H
    int snap_radius = -1;          // cells; -1: 2 * r_i
    double max_spacing = 2.0;      // m between consecutive waypoints on straight runs

    void validate() const {
        if (!(theta_th > 0 && theta_th < kPi)) throw Error(ErrorKind::InvalidInput, "theta_th must lie in (0, pi)");
        if (!(heuristic_weight >= 1.0)) throw Error(ErrorKind::InvalidInput, "heuristic_weight must be >= 1");
        if (max_expansions < 0) throw Error(ErrorKind::InvalidInput, "max_expansions must be >= 0");
        if (!(max_spacing > 0)) throw Error(ErrorKind::InvalidInput, "max_spacing must be positive");
    }
    friend constexpr bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

struct StepCount {
    std::int32_t orth = 0;
    std::int32_t diag = 0;
    double cost() const { return orth + diag * kSqrt2; }
    friend constexpr bool operator==(StepCount, StepCount) = default;
};

struct CellPath {
    std::vector<Cell> cells;
    StepCount steps;
    double total_cost() const { return steps.cost(); }
};

struct Waypoints {
    std::vector<Vec2> points;        // world frame
    std::vector<std::size_t> index;  // position of each waypoint in the source path
};

/// Octile distance between two cells.
inline double heuristic(Cell n, Cell goal) {
    const int dx = std::abs(n.u - goal.u), dy = std::abs(n.v - goal.v);
    return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

/// Nearest free cell within `radius` (Euclidean, in cells); ties go to the smaller (v, u).
inline std::optional<Cell> snap_to_free(const OccupancyGrid& grid, Cell c, int radius) {
    if (grid.contains(c) && !grid.occupied(c)) return c;
    std::optional<Cell> best;
    long best_d2 = std::numeric_limits<long>::max();
    for (int dv = -radius; dv <= radius; ++dv) {
        for (int du = -radius; du <= radius; ++du) {
            const long d2 = long(du) * du + long(dv) * dv;
            if (d2 > long(radius) * radius || d2 > best_d2) continue;
            const Cell n{c.u + du, c.v + dv};
            if (grid.blocked(n)) continue;
            if (!best || d2 < best_d2 || n < *best) {
                best = n;
                best_d2 = d2;
            }
        }
    }
    return best;
}

namespace detail {

// Neighbor order is fixed so that expansion, and therefore the returned path, is deterministic.
inline constexpr int kDu[8] = {1, -1, 0, 0, 1, 1, -1, -1};
inline constexpr int kDv[8] = {0, 0, 1, -1, 1, -1, 1, -1};

// A diagonal move is allowed unless both orthogonal cells it squeezes between are blocked.
inline bool diagonal_allowed(const OccupancyGrid& g, Cell from, int du, int dv) {
    return !(g.blocked({from.u + du, from.v}) && g.blocked({from.u, from.v + dv}));
}

}  // namespace detail

/// Minimum-cost 8-connected path over free cells. Occupied endpoints are snapped to the
/// nearest free cell within cfg.snap_radius (when >= 0).
inline CellPath astar(const OccupancyGrid& grid, Cell start, Cell goal, const PlannerConfig& cfg) {
    cfg.validate();
    const GridConfig& gc = grid.config();
    if (!gc.contains(start)) throw Error(ErrorKind::OutOfBounds, "start cell outside grid");
    if (!gc.contains(goal)) throw Error(ErrorKind::OutOfBounds, "goal cell outside grid");
    const int snap = std::max(cfg.snap_radius, 0);
    const auto s = snap_to_free(grid, start, snap);
    if (!s) throw Error(ErrorKind::GoalUnreachable, "no free cell near start within snap radius");
    const auto g = snap_to_free(grid, goal, snap);
    if (!g) throw Error(ErrorKind::GoalUnreachable, "no free cell near goal within snap radius");
    start = *s;
    goal = *g;

    const std::size_t n = gc.cell_count();
    const long long budget = cfg.max_expansions > 0 ? cfg.max_expansions : 4LL * gc.width * gc.height;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> gcost(n, inf);
    std::vector<StepCount> steps(n);
    std::vector<std::int32_t> parent(n, -1);
    std::vector<std::uint8_t> closed(n, 0);

    struct Node {
        double f;
        double g;
        Cell c;
    };
    // pop smallest f, then largest g, then smallest (v, u)
    auto worse = [](const Node& a, const Node& b) {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;
        return b.c < a.c;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);

    const std::size_t si = gc.index(start), gi = gc.index(goal);
    gcost[si] = 0.0;
    open.push({cfg.heuristic_weight * heuristic(start, goal), 0.0, start});
    long long expansions = 0;
    bool found = false;
    while (!open.empty()) {
        const Node top = open.top();
        open.pop();
        const std::size_t ci = gc.index(top.c);
        if (closed[ci] || top.g != gcost[ci]) continue;
        closed[ci] = 1;
        if (++expansions > budget)
            throw Error(ErrorKind::ExpansionBudgetExceeded, "A* exceeded " + std::to_string(budget) + " expansions");
        if (ci == gi) {
            found = true;
            break;
        }
        for (int k = 0; k < 8; ++k) {
            const int du = detail::kDu[k], dv = detail::kDv[k];
            const Cell nb{top.c.u + du, top.c.v + dv};
            if (grid.blocked(nb)) continue;
            const std::size_t ni = gc.index(nb);
            if (closed[ni]) continue;
            const bool diagonal = du != 0 && dv != 0;
            if (diagonal && !detail::diagonal_allowed(grid, top.c, du, dv)) continue;
            StepCount st = steps[ci];
            (diagonal ? st.diag : st.orth) += 1;
            const double tentative = st.cost();
            if (tentative < gcost[ni]) {
                gcost[ni] = tentative;
                steps[ni] = st;
                parent[ni] = static_cast<std::int32_t>(ci);
                open.push({tentative + cfg.heuristic_weight * heuristic(nb, goal), tentative, nb});
            }
        }
    }
    if (!found) throw Error(ErrorKind::NoPath, "open set exhausted before reaching the goal");

    CellPath path;
    path.steps = steps[gi];
    for (std::int64_t i = static_cast<std::int64_t>(gi); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
        path.cells.push_back({static_cast<int>(i % gc.width), static_cast<int>(i / gc.width)});
        if (static_cast<std::size_t>(i) == si) break;
    }
    std::reverse(path.cells.begin(), path.cells.end());
    return path;
}

/// Keeps endpoints, turning points (angle >= theta_th between incoming and outgoing step
/// directions) and enough intermediate cells that consecutive waypoints are at most
/// max_spacing apart along the path.
inline Waypoints refine_waypoints(const CellPath& path, const PlannerConfig& cfg, const GridConfig& gc) {
    if (path.cells.empty()) throw Error(ErrorKind::InvalidInput, "cannot refine an empty path");
    Waypoints out;
    const auto& p = path.cells;
    auto keep = [&](std::size_t i) {
        out.points.push_back(pixel_to_world(p[i], gc));
        out.index.push_back(i);
    };
    keep(0);
    if (p.size() == 1) return out;

    auto step_len = [&](std::size_t i) {  // length of p[i] -> p[i+1] in meters
        const bool diag = p[i + 1].u != p[i].u && p[i + 1].v != p[i].v;
        return (diag ? kSqrt2 : 1.0) * gc.resolution;
    };
    double since_last = 0.0;  // arc length from the last kept waypoint to p[i]
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        since_last += step_len(i - 1);
        const double ax = p[i].u - p[i - 1].u, ay = p[i].v - p[i - 1].v;
        const double bx = p[i + 1].u - p[i].u, by = p[i + 1].v - p[i].v;
        const double c = (ax * bx + ay * by) / (std::hypot(ax, ay) * std::hypot(bx, by));
        const double turn = std::acos(std::clamp(c, -1.0, 1.0));
        const bool corner = turn >= cfg.theta_th;
        const bool spacing = since_last + step_len(i) > cfg.max_spacing + 1e-9;
        if (corner || spacing) {
            keep(i);
            since_last = 0.0;
        }
    }
    keep(p.size() - 1);
    return out;
}

struct PlanResult {
    CellPath path;
    Waypoints waypoints;
    Cell start;  // after snapping
    Cell goal;   // after snapping
};

/// world_to_pixel -> astar -> refine_waypoints, on an inflated grid. Stateless: every call
/// replans from scratch from the robot's current cell.
inline PlanResult plan(const OccupancyGrid& inflated, const Pose2D& robot, Vec2 goal_world, PlannerConfig cfg,
                       int inflation_radius_cells) {
    const GridConfig& gc = inflated.config();
    if (cfg.snap_radius < 0) cfg.snap_radius = 2 * inflation_radius_cells;
    const Cell s = world_to_pixel(robot.x, robot.y, gc);
    const Cell g = world_to_pixel(goal_world.x, goal_world.y, gc);
    PlanResult r;
    r.path = astar(inflated, s, g, cfg);
    r.start = r.path.cells.front();
    r.goal = r.path.cells.back();
    r.waypoints = refine_waypoints(r.path, cfg, gc);
    return r;
}

inline std::string path_to_csv(const CellPath& path, const GridConfig& gc) {
    std::string out = "x,y\n";
    for (const Cell c : path.cells) {
        const Vec2 w = pixel_to_world(c, gc);
        out += text::num(w.x) + ',' + text::num(w.y) + '\n';
    }
    return out;
}

inline std::string waypoints_to_csv(const Waypoints& wp) {
    std::string out = "x,y\n";
    for (const Vec2 w : wp.points) out += text::num(w.x) + ',' + text::num(w.y) + '\n';
    return out;
}

}  // namespace semnav
