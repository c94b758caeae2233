#pragma once
// Shared generators and brute-force oracles for the test suite.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "semnav/semnav.hpp"

namespace semnav::test {

inline std::filesystem::path scenario_dir() { return SEMNAV_SCENARIO_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("semnav_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    std::mt19937_64& engine() { return rng_; }

    OccupancyGrid grid(int w, int h, double occupancy, double res = 0.05) {
        OccupancyGrid g(GridConfig{res, w, h});
        for (auto& c : g.cells()) c = chance(occupancy) ? kOccupied : kFree;
        return g;
    }
    Cell free_cell(const OccupancyGrid& g) {
        for (;;) {
            const Cell c{integer(0, g.width() - 1), integer(0, g.height() - 1)};
            if (!g.occupied(c)) return c;
        }
    }
    Pose2D pose(double extent = 20.0) {
        return {uniform(-extent, extent), uniform(-extent, extent), uniform(-kPi, kPi)};
    }
    PointCloud cloud(int max_points, double extent = 10.0) {
        PointCloud pc;
        const int n = integer(0, max_points);
        for (int i = 0; i < n; ++i)
            pc.points.push_back({{uniform(-extent, extent), uniform(-extent, extent), uniform(0.0, 2.0)},
                                 chance(0.3) ? Provenance::Semantic : Provenance::Geometric});
        return pc;
    }

private:
    std::mt19937_64 rng_;
};

/// Exact-arithmetic path cost: orthogonal and diagonal step counts.
struct OracleCost {
    long long orth = 0;
    long long diag = 0;
    double value() const { return static_cast<double>(orth) + static_cast<double>(diag) * std::sqrt(2.0); }
};

/// Plain Dijkstra over the same move model as the planner: 8-connected, out-of-grid and
/// occupied cells blocked, a diagonal forbidden only when both side cells are blocked.
inline std::optional<double> dijkstra_cost(const OccupancyGrid& g, Cell s, Cell t) {
    const int w = g.width(), h = g.height();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(w) * h, inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    auto idx = [w](Cell c) { return c.v * w + c.u; };
    auto blocked = [&](int u, int v) { return u < 0 || v < 0 || u >= w || v >= h || g.occupied({u, v}); };
    if (blocked(s.u, s.v) || blocked(t.u, t.v)) return std::nullopt;
    dist[idx(s)] = 0;
    pq.push({0.0, idx(s)});
    while (!pq.empty()) {
        auto [d, i] = pq.top();
        pq.pop();
        if (d > dist[i]) continue;
        const int u = i % w, v = i / w;
        if (u == t.u && v == t.v) return d;
        for (int dv = -1; dv <= 1; ++dv) {
            for (int du = -1; du <= 1; ++du) {
                if (!du && !dv) continue;
                if (blocked(u + du, v + dv)) continue;
                if (du && dv && blocked(u + du, v) && blocked(u, v + dv)) continue;
                const double nd = d + ((du && dv) ? std::sqrt(2.0) : 1.0);
                const int j = (v + dv) * w + (u + du);
                if (nd < dist[j] - 1e-12) {
                    dist[j] = nd;
                    pq.push({nd, j});
                }
            }
        }
    }
    return std::nullopt;
}

/// Cell-for-cell disc dilation: occupied iff some occupied cell lies within `r` cells.
inline OccupancyGrid brute_dilate(const OccupancyGrid& g, int r) {
    OccupancyGrid out(g.config(), true);
    for (int v = 0; v < g.height(); ++v)
        for (int u = 0; u < g.width(); ++u) {
            bool hit = false;
            for (int dv = -r; dv <= r && !hit; ++dv)
                for (int du = -r; du <= r && !hit; ++du)
                    if (du * du + dv * dv <= r * r && g.contains({u + du, v + dv}) && g.occupied({u + du, v + dv}))
                        hit = true;
            if (hit) out.set({u, v});
        }
    return out;
}

/// Squared distance (cells) to the nearest occupied cell, by exhaustive search.
inline double brute_sq_distance(const OccupancyGrid& g, Cell c) {
    double best = std::numeric_limits<double>::infinity();
    for (int v = 0; v < g.height(); ++v)
        for (int u = 0; u < g.width(); ++u)
            if (g.occupied({u, v})) best = std::min(best, double((u - c.u) * (u - c.u) + (v - c.v) * (v - c.v)));
    return best;
}

inline Scenario load_shipped(const std::string& name) {
    return parse_scenario(io::read_file(scenario_dir() / (name + ".json")));
}

/// Scenario with no obstacles and a small grid, for fast closed-loop tests.
inline Scenario open_field(Vec2 goal) {
    Scenario s;
    s.name = "open";
    s.world.bounds = {{-5, -5}, {5, 5}};
    s.goals = {goal};
    s.grid = {0.05, 240, 240};
    s.sim.timeout_s = 60;
    return s;
}

}  // namespace semnav::test
