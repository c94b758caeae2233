#pragma once
// world.hpp - 2.5D world description: vertical prisms (static obstacles, beware
// items), flat ground zones and disc agents that loop along a path.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "semnav/geometry.hpp"

namespace semnav {

struct Shape {
    enum class Kind { Polygon, Disc };
    Kind kind = Kind::Polygon;
    std::vector<Vec2> points;  // polygon vertices
    Vec2 center;               // disc
    double radius = 0.0;       // disc

    static Shape polygon(std::vector<Vec2> pts) { return {Kind::Polygon, std::move(pts), {}, 0.0}; }
    static Shape disc(Vec2 c, double r) { return {Kind::Disc, {}, c, r}; }

    /// Distance from p to the shape region (zero inside).
    double distance_to(Vec2 p) const {
        if (kind == Kind::Disc) return std::max(0.0, distance(p, center) - radius);
        return point_polygon_distance(p, points);
    }

    /// Center and radius of a circle enclosing the shape.
    std::pair<Vec2, double> bounding_circle() const {
        if (kind == Kind::Disc) return {center, radius};
        Vec2 c;
        for (const Vec2 q : points) c = c + q;
        c = (1.0 / static_cast<double>(points.size())) * c;
        double r = 0.0;
        for (const Vec2 q : points) r = std::max(r, distance(c, q));
        return {c, r};
    }

    /// Parameter interval of origin + t*dir inside the footprint.
    std::optional<std::pair<double, double>> ray_interval(Vec2 origin, Vec2 dir) const {
        if (kind == Kind::Disc) return ray_disc_interval(origin, dir, center, radius);
        return ray_convex_interval(origin, dir, points);
    }

    friend bool operator==(const Shape&, const Shape&) = default;
};

/// A solid prism: obstacles must be tall enough to register geometrically.
struct StaticEntity {
    std::string name;
    Shape shape;
    double height = 1.0;
    friend bool operator==(const StaticEntity&, const StaticEntity&) = default;
};

/// Small object below the obstacle-height threshold, tagged with a semantic class.
struct BewareItem {
    std::string cls;
    Shape shape;
    double height = 0.05;
    friend bool operator==(const BewareItem&, const BewareItem&) = default;
};

/// Flat ground marking (height 0).
struct Zone {
    std::string cls;
    std::vector<Vec2> polygon;
    friend bool operator==(const Zone&, const Zone&) = default;
};

struct DynamicAgent {
    std::string name;
    double radius = 0.3;
    double height = 1.7;
    double speed = 0.5;          // m/s along the loop
    std::vector<Vec2> path;      // closed loop through these points
    double speed_jitter = 0.0;   // fractional speed perturbation drawn from the scenario seed
    bool random_phase = false;   // start at a seeded arc-length offset
    friend bool operator==(const DynamicAgent&, const DynamicAgent&) = default;
};

struct Bounds {
    Vec2 min{-10, -10};
    Vec2 max{10, 10};
    bool contains(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
    double area() const { return (max.x - min.x) * (max.y - min.y); }
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct World {
    Bounds bounds;
    std::vector<StaticEntity> obstacles;
    std::vector<BewareItem> beware_items;
    std::vector<Zone> zones;
    std::vector<DynamicAgent> agents;
    friend bool operator==(const World&, const World&) = default;
};

/// Arc-length bookkeeping for an agent moving around its closed loop.
class AgentLoop {
public:
    AgentLoop() = default;
    AgentLoop(std::vector<Vec2> path, double speed, double phase = 0.0) : path_(std::move(path)), speed_(speed) {
        cumulative_.push_back(0.0);
        for (std::size_t i = 0; i < path_.size() && path_.size() > 1; ++i)
            cumulative_.push_back(cumulative_.back() + distance(path_[i], path_[(i + 1) % path_.size()]));
        s_ = perimeter() > 0 ? std::fmod(phase, perimeter()) : 0.0;
    }

    double perimeter() const { return cumulative_.back(); }
    double speed() const { return speed_; }
    double arc_position() const { return s_; }

    void advance(double dt) {
        const double L = perimeter();
        if (L <= 0 || speed_ == 0) return;
        s_ = std::fmod(s_ + speed_ * dt, L);
    }

    Vec2 position() const {
        if (path_.size() == 1 || perimeter() <= 0) return path_.front();
        std::size_t i = 0;
        while (i + 1 < cumulative_.size() - 1 && cumulative_[i + 1] <= s_) ++i;
        const Vec2 a = path_[i], b = path_[(i + 1) % path_.size()];
        const double seg = cumulative_[i + 1] - cumulative_[i];
        const double f = seg > 0 ? (s_ - cumulative_[i]) / seg : 0.0;
        return a + f * (b - a);
    }

private:
    std::vector<Vec2> path_;
    std::vector<double> cumulative_;
    double speed_ = 0.0;
    double s_ = 0.0;
};

/// Robot disc overlapping a static obstacle or an agent disc.
inline bool disc_collides(const World& w, const std::vector<Vec2>& agent_positions, Vec2 center, double radius) {
    for (const auto& e : w.obstacles)
        if (e.shape.distance_to(center) < radius) return true;
    for (std::size_t i = 0; i < w.agents.size() && i < agent_positions.size(); ++i)
        if (distance(agent_positions[i], center) < radius + w.agents[i].radius) return true;
    return false;
}

/// Robot disc overlapping any beware item or zone, whatever its class.
inline bool disc_in_hazard(const World& w, Vec2 center, double radius) {
    for (const auto& it : w.beware_items)
        if (it.shape.distance_to(center) < radius) return true;
    for (const auto& z : w.zones)
        if (point_polygon_distance(center, z.polygon) < radius) return true;
    return false;
}

}  // namespace semnav
