#pragma once
// metrics.hpp - explored area, travelled distance, clearance and hazard counts.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "semnav/distance_field.hpp"
#include "semnav/error.hpp"
#include "semnav/global_map.hpp"
#include "semnav/occupancy_grid.hpp"
#include "semnav/world.hpp"

namespace semnav {

struct MetricSample {
    double t = 0.0;
    double explored_area_m2 = 0.0;
    double distance_m = 0.0;
};

/// Monotone set of observed cells. Used only for reporting; planning never reads it.
class ExploredArea {
public:
    explicit ExploredArea(const GridConfig& cfg) : cfg_(cfg), observed_(cfg.cell_count(), 0) {}

    void mark(Cell c) {
        if (!cfg_.contains(c)) return;
        auto& o = observed_[cfg_.index(c)];
        count_ += o == 0;
        o = 1;
    }
    void mark_world(Vec2 p) { mark(world_to_pixel_unchecked(p.x, p.y, cfg_)); }

    /// Marks the cells along the segment a -> b, sampled at half-cell steps.
    void carve(Vec2 a, Vec2 b) {
        const double len = distance(a, b);
        const int n = std::max(1, static_cast<int>(std::ceil(len / (0.5 * cfg_.resolution))));
        for (int k = 0; k <= n; ++k) mark_world(a + (static_cast<double>(k) / n) * (b - a));
    }

    std::size_t count() const { return count_; }
    double area_m2() const { return static_cast<double>(count_) * cfg_.resolution * cfg_.resolution; }
    const std::vector<std::uint8_t>& mask() const { return observed_; }

private:
    GridConfig cfg_;
    std::vector<std::uint8_t> observed_;
    std::size_t count_ = 0;
};

/// Area series from per-tick observed masks. Cells may never become unobserved.
inline std::vector<double> explored_area(const std::vector<std::vector<std::uint8_t>>& masks, double resolution) {
    std::vector<double> out;
    out.reserve(masks.size());
    for (std::size_t t = 0; t < masks.size(); ++t) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < masks[t].size(); ++i) {
            n += masks[t][i] != 0;
            if (t > 0 && masks[t - 1][i] != 0 && masks[t][i] == 0)
                throw Error(ErrorKind::InternalError, "cell " + std::to_string(i) + " un-observed at tick " +
                                                          std::to_string(t));
        }
        out.push_back(static_cast<double>(n) * resolution * resolution);
    }
    return out;
}

inline std::vector<double> cumulative_distance(const std::vector<Pose2D>& poses) {
    std::vector<double> out;
    out.reserve(poses.size());
    double d = 0.0;
    for (std::size_t i = 0; i < poses.size(); ++i) {
        if (i > 0) d += distance(poses[i - 1].position(), poses[i].position());
        out.push_back(d);
    }
    return out;
}

/// Smallest distance (m) from any trajectory pose's cell to an occupied cell of the raw
/// grid; +inf when the grid holds no obstacle.
inline double min_clearance(const std::vector<Pose2D>& trajectory, const OccupancyGrid& raw) {
    if (trajectory.empty()) throw Error(ErrorKind::InvalidInput, "empty trajectory");
    const DistanceField field(raw);
    double best = std::numeric_limits<double>::infinity();
    for (const Pose2D& p : trajectory) {
        const Cell c = world_to_pixel_unchecked(p.x, p.y, raw.config());
        if (!raw.contains(c)) continue;
        best = std::min(best, field.meters(c));
    }
    return best;
}

/// Same measure over grid cells (e.g. a planned path) against a precomputed field.
inline double min_clearance(const std::vector<Cell>& cells, const DistanceField& field) {
    double best = std::numeric_limits<double>::infinity();
    for (const Cell c : cells) best = std::min(best, field.meters(c));
    return best;
}

/// Ticks at which the robot disc overlaps any beware item or zone (geometric ground truth).
inline std::size_t hazard_violations(const std::vector<Pose2D>& trajectory, const World& world, double robot_radius) {
    std::size_t n = 0;
    for (const Pose2D& p : trajectory) n += disc_in_hazard(world, p.position(), robot_radius);
    return n;
}

}  // namespace semnav
