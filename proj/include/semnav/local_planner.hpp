#pragma once
// local_planner.hpp - constant-(v, omega) arc primitives scored against the
// current waypoint, plus the waypoint-following mission state machine.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "semnav/distance_field.hpp"
#include "semnav/error.hpp"
#include "semnav/geometry.hpp"
#include "semnav/global_map.hpp"
#include "semnav/global_planner.hpp"
#include "semnav/occupancy_grid.hpp"

namespace semnav {

struct VelocityCommand {
    double v = 0.0;      // m/s
    double omega = 0.0;  // rad/s
    friend constexpr bool operator==(const VelocityCommand&, const VelocityCommand&) = default;
};

struct LocalConfig {
    double v_max = 1.0;
    double omega_max = 1.5;
    double horizon = 2.0;  // s
    double dt = 0.1;       // s
    int speeds = 5;
    int curvatures = 15;
    double waypoint_radius = 0.5;
    double goal_radius = 0.3;
    double w_distance = 1.0;
    double w_heading = 0.3;
    double w_clearance = 0.2;
    double clearance_cap = 1.0;  // m; clearance at or beyond this scores as fully clear

    void validate() const {
        if (!(v_max > 0) || !(omega_max > 0)) throw Error(ErrorKind::InvalidInput, "velocity limits must be positive");
        if (!(dt > 0 && dt < horizon)) throw Error(ErrorKind::InvalidInput, "need 0 < dt < horizon");
        if (speeds < 1 || curvatures < 1) throw Error(ErrorKind::InvalidInput, "primitive grid must be non-empty");
        if (!(waypoint_radius > 0) || !(goal_radius > 0))
            throw Error(ErrorKind::InvalidInput, "reach radii must be positive");
        if (!(clearance_cap > 0)) throw Error(ErrorKind::InvalidInput, "clearance_cap must be positive");
    }
    friend constexpr bool operator==(const LocalConfig&, const LocalConfig&) = default;
};

struct MotionPrimitive {
    double v = 0.0;
    double omega = 0.0;
    double horizon = 0.0;
    std::vector<Pose2D> samples;  // robot frame, one per dt step, excluding the origin
};

/// Forward-Euler unicycle rollout from the origin. The final step is shortened so the
/// rollout covers exactly `horizon` seconds.
inline MotionPrimitive integrate_primitive(double v, double omega, double horizon, double dt) {
    MotionPrimitive p{v, omega, horizon, {}};
    double x = 0, y = 0, th = 0, t = 0;
    const auto steps = static_cast<int>(std::ceil(horizon / dt - 1e-9));
    p.samples.reserve(steps);
    for (int k = 0; k < steps; ++k) {
        const double h = std::min(dt, horizon - t);
        x += v * std::cos(th) * h;
        y += v * std::sin(th) * h;
        th += omega * h;
        t += h;
        p.samples.push_back({x, y, th});
    }
    return p;
}

/// Speeds v_max/n .. v_max crossed with angular rates spread evenly over
/// [-omega_max, omega_max], followed by the rotate-in-place pair (0, +-omega_max/2).
inline std::vector<MotionPrimitive> generate_primitives(const LocalConfig& cfg) {
    cfg.validate();
    std::vector<MotionPrimitive> prims;
    for (int i = 1; i <= cfg.speeds; ++i) {
        const double v = cfg.v_max * i / cfg.speeds;
        for (int j = 0; j < cfg.curvatures; ++j) {
            const double w = cfg.curvatures == 1
                                 ? 0.0
                                 : -cfg.omega_max + 2.0 * cfg.omega_max * j / (cfg.curvatures - 1);
            prims.push_back(integrate_primitive(v, w, cfg.horizon, cfg.dt));
        }
    }
    prims.push_back(integrate_primitive(0.0, cfg.omega_max / 2.0, cfg.horizon, cfg.dt));
    prims.push_back(integrate_primitive(0.0, -cfg.omega_max / 2.0, cfg.horizon, cfg.dt));
    return prims;
}

inline Pose2D compose(const Pose2D& base, const Pose2D& local) {
    const double c = std::cos(base.theta), s = std::sin(base.theta);
    return {base.x + c * local.x - s * local.y, base.y + s * local.x + c * local.y,
            normalize_angle(base.theta + local.theta)};
}

struct CommandChoice {
    VelocityCommand cmd;
    std::optional<std::size_t> primitive;  // empty when the rotate fallback fired
    double score = std::numeric_limits<double>::infinity();
};

inline VelocityCommand rotate_toward(const Pose2D& pose, Vec2 target, const LocalConfig& cfg) {
    const double bearing = normalize_angle(std::atan2(target.y - pose.y, target.x - pose.x) - pose.theta);
    // never turn past the bearing within one control period
    const double rate = std::min(cfg.omega_max / 2.0, std::abs(bearing) / cfg.dt);
    return {0.0, bearing >= 0 ? rate : -rate};
}

/// Scores every collision-free primitive and returns the cheapest; falls back to rotating
/// in place toward the waypoint. `clearance` must be the distance field of `inflated`.
///
/// When the robot already sits on an occupied inflated cell, a primitive is admissible if
/// its occupied samples form a prefix and it ends on a free cell.
inline CommandChoice select_command(const OccupancyGrid& inflated, const DistanceField& clearance,
                                    const Pose2D& pose, Vec2 waypoint, const std::vector<MotionPrimitive>& prims,
                                    const LocalConfig& cfg) {
    const GridConfig& gc = inflated.config();
    auto blocked_at = [&](const Pose2D& p) {
        return inflated.blocked(world_to_pixel_unchecked(p.x, p.y, gc));
    };
    const bool escaping = blocked_at(pose);

    CommandChoice best;
    for (std::size_t k = 0; k < prims.size(); ++k) {
        const MotionPrimitive& prim = prims[k];
        bool ok = true;
        bool seen_free = false;
        double min_clear = std::numeric_limits<double>::infinity();
        Pose2D end = pose;
        for (const Pose2D& s : prim.samples) {
            end = compose(pose, s);
            const Cell c = world_to_pixel_unchecked(end.x, end.y, gc);
            const bool blocked = inflated.blocked(c);
            if (blocked) {
                if (!escaping || seen_free) {
                    ok = false;
                    break;
                }
                min_clear = 0.0;
            } else {
                seen_free = true;
                min_clear = std::min(min_clear, clearance.meters(c));
            }
        }
        if (!ok || (escaping && !seen_free)) continue;
        if (escaping && blocked_at(end)) continue;

        const double dist = distance(end.position(), waypoint);
        // an endpoint already on the waypoint has no meaningful bearing to it
        const double heading =
            dist <= cfg.goal_radius
                ? 0.0
                : std::abs(normalize_angle(std::atan2(waypoint.y - end.y, waypoint.x - end.x) - end.theta));
        const double clear = std::clamp(min_clear / cfg.clearance_cap, 0.0, 1.0);
        const double score = cfg.w_distance * dist + cfg.w_heading * heading + cfg.w_clearance * (1.0 - clear);
        if (score < best.score) {
            best.score = score;
            best.primitive = k;
            best.cmd = {prim.v, prim.omega};
        }
    }
    if (!best.primitive) best.cmd = rotate_toward(pose, waypoint, cfg);
    return best;
}

inline CommandChoice select_command(const OccupancyGrid& inflated, const Pose2D& pose, Vec2 waypoint,
                                    const std::vector<MotionPrimitive>& prims, const LocalConfig& cfg) {
    return select_command(inflated, DistanceField(inflated), pose, waypoint, prims, cfg);
}

// ---------------------------------------------------------------------------
// Mission state

struct WaypointAdvanced {
    std::size_t index = 0;  // new target waypoint
};
struct GoalReached {
    std::size_t goal = 0;
};
struct PlanStale {
    VelocityCommand stop;  // always (0, 0)
};
using MissionEvent = std::variant<VelocityCommand, WaypointAdvanced, GoalReached, PlanStale>;

/// Tracks the active goal and the waypoint list of the latest plan.
class Mission {
public:
    Mission(std::vector<Vec2> goals, LocalConfig cfg) : goals_(std::move(goals)), cfg_(cfg) {
        if (goals_.empty()) throw Error(ErrorKind::InvalidInput, "mission needs at least one goal");
    }

    void set_plan(const Waypoints& wp, std::uint64_t grid_revision) {
        waypoints_ = wp.points;
        // the first waypoint is the robot's own cell; target the next one straight away
        target_ = waypoints_.size() > 1 ? 1 : 0;
        plan_revision_ = grid_revision;
        has_plan_ = !waypoints_.empty();
    }

    bool has_plan() const { return has_plan_; }
    bool finished() const { return goal_index_ >= goals_.size(); }
    std::size_t goal_index() const { return goal_index_; }
    Vec2 current_goal() const { return goals_.at(goal_index_); }
    const std::vector<Vec2>& goals() const { return goals_; }
    std::size_t target_index() const { return target_; }
    const std::vector<Vec2>& waypoints() const { return waypoints_; }
    std::uint64_t plan_revision() const { return plan_revision_; }

    /// Moves on to the next goal; the caller must supply a fresh plan.
    void advance_goal() {
        ++goal_index_;
        has_plan_ = false;
        waypoints_.clear();
        target_ = 0;
    }

    /// One decision tick. Order: goal check, staleness, waypoint advance, command.
    MissionEvent step(const Pose2D& pose, const OccupancyGrid& inflated, const DistanceField& clearance,
                      std::uint64_t grid_revision, const std::vector<MotionPrimitive>& prims) {
        if (finished()) return VelocityCommand{};
        if (distance(pose.position(), current_goal()) <= cfg_.goal_radius) return GoalReached{goal_index_};
        if (!has_plan_ || grid_revision != plan_revision_) return PlanStale{};
        if (target_ + 1 < waypoints_.size() && distance(pose.position(), waypoints_[target_]) <= cfg_.waypoint_radius) {
            ++target_;
            return WaypointAdvanced{target_};
        }
        return select_command(inflated, clearance, pose, waypoints_[target_], prims, cfg_).cmd;
    }

private:
    std::vector<Vec2> goals_;
    LocalConfig cfg_;
    std::vector<Vec2> waypoints_;
    std::size_t target_ = 0;
    std::size_t goal_index_ = 0;
    std::uint64_t plan_revision_ = 0;
    bool has_plan_ = false;
};

}  // namespace semnav
