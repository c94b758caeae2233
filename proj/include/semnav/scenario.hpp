#pragma once
// scenario.hpp - JSON scenario files: strict parsing, validation, canonical
// serialization and dotted-path overrides.
//
// Angles are written in degrees in the file and kept in degrees here so that
// parse(serialize(s)) == s holds exactly; runtime configs are derived on demand.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semnav/error.hpp"
#include "semnav/geometry.hpp"
#include "semnav/global_map.hpp"
#include "semnav/global_planner.hpp"
#include "semnav/local_planner.hpp"
#include "semnav/occupancy_grid.hpp"
#include "semnav/perception.hpp"
#include "semnav/world.hpp"

namespace semnav {

using ojson = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct SensorSpec {
    int width = 160;
    int height = 120;
    double h_fov_deg = 87.0;
    double v_fov_deg = 58.0;
    double depth_min = 0.4;
    double depth_max = 8.0;
    double mount_height = 0.6;
    double mount_pitch_deg = -15.0;
    double rate_hz = 2.0;
    double mask_flip_prob = 0.0;

    CameraIntrinsics intrinsics() const {
        return CameraIntrinsics::from_fov(width, height, deg2rad(h_fov_deg), deg2rad(v_fov_deg), depth_min, depth_max);
    }
    SensorMount mount() const { return {mount_height, deg2rad(mount_pitch_deg)}; }
    friend bool operator==(const SensorSpec&, const SensorSpec&) = default;
};

struct PerceptionSpec {
    FilterConfig filter;
    std::string segmenter = "oracle";  // "oracle" | "color"
    double color_threshold = 60.0 / 441.0;
    friend bool operator==(const PerceptionSpec&, const PerceptionSpec&) = default;
};

struct MapSpec {
    double pose_quantum_m = 0.25;
    double pose_quantum_deg = 15.0;
    PoseQuantization quantization() const { return {pose_quantum_m, deg2rad(pose_quantum_deg)}; }
    friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

struct PlannerSpec {
    double theta_th_deg = 10.0;
    double heuristic_weight = 1.0;
    long long max_expansions = 0;
    int snap_radius = -1;
    double max_spacing = 2.0;
    double path_margin = 0.1;  // m of extra inflation seen by the global search only
    PlannerConfig config() const {
        return {deg2rad(theta_th_deg), heuristic_weight, max_expansions, snap_radius, max_spacing};
    }
    friend bool operator==(const PlannerSpec&, const PlannerSpec&) = default;
};

struct SimSpec {
    double control_rate_hz = 10.0;
    double timeout_s = 300.0;
    double noise_v_sigma = 0.0;
    double noise_omega_sigma = 0.0;
    friend bool operator==(const SimSpec&, const SimSpec&) = default;
};

struct RobotSpec {
    double x = 0.0, y = 0.0, theta_deg = 0.0;
    double width = 0.7;
    double length = 1.0;
    Pose2D start() const { return {x, y, normalize_angle(deg2rad(theta_deg))}; }
    friend bool operator==(const RobotSpec&, const RobotSpec&) = default;
};

struct Scenario {
    int schema_version = kSchemaVersion;
    std::string name = "scenario";
    std::uint64_t seed = 0;
    World world;
    RobotSpec robot;
    std::vector<Vec2> goals;
    std::vector<std::string> beware_list;
    std::map<std::string, Rgb> class_colors;  // explicit colors only
    SensorSpec sensor;
    PerceptionSpec perception;
    MapSpec map;
    GridConfig grid;
    double safety_margin = 0.1;
    PlannerSpec planner;
    LocalConfig local_planner;
    SimSpec sim;

    InflationParams inflation() const { return {robot.width, safety_margin}; }
    int inflation_radius() const { return semnav::inflation_radius(inflation(), grid.resolution); }
    /// Inflation radius (cells) of the grid the global search runs on.
    int planning_radius() const {
        return inflation_radius() + static_cast<int>(std::ceil(planner.path_margin / grid.resolution - 1e-9));
    }
    bool is_beware(const std::string& cls) const {
        return std::find(beware_list.begin(), beware_list.end(), cls) != beware_list.end();
    }

    /// Explicit color, else a built-in color for common classes, else a fixed fallback.
    Rgb color_of(const std::string& cls) const {
        if (auto it = class_colors.find(cls); it != class_colors.end()) return it->second;
        static const std::map<std::string, Rgb> builtin = {
            {"red_zone", {255, 0, 0}}, {"cup", {0, 0, 255}},      {"book", {255, 200, 0}},
            {"landmine", {255, 0, 255}}, {"cable", {0, 255, 255}}, {"bottle", {0, 160, 0}},
        };
        if (auto it = builtin.find(cls); it != builtin.end()) return it->second;
        return {255, 120, 0};
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------------------
namespace detail {

inline std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}
inline std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

inline double as_number(const ojson& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path, "expected a number");
    return j.get<double>();
}
inline long long as_integer(const ojson& j, const std::string& path) {
    if (!j.is_number_integer()) throw ValidationError(path, "expected an integer");
    return j.get<long long>();
}
inline std::uint64_t as_unsigned(const ojson& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ValidationError(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}
inline std::string as_string(const ojson& j, const std::string& path) {
    if (!j.is_string()) throw ValidationError(path, "expected a string");
    return j.get<std::string>();
}
inline bool as_bool(const ojson& j, const std::string& path) {
    if (!j.is_boolean()) throw ValidationError(path, "expected true or false");
    return j.get<bool>();
}
inline Vec2 as_vec2(const ojson& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ValidationError(path, "expected [x, y]");
    return {as_number(j[0], index_path(path, 0)), as_number(j[1], index_path(path, 1))};
}
inline std::vector<Vec2> as_points(const ojson& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path, "expected an array of [x, y] points");
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(as_vec2(j[i], index_path(path, i)));
    return pts;
}
inline Rgb as_rgb(const ojson& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw ValidationError(path, "expected [r, g, b]");
    Rgb c;
    std::uint8_t* ch[3] = {&c.r, &c.g, &c.b};
    for (std::size_t i = 0; i < 3; ++i) {
        const long long v = as_integer(j[i], index_path(path, i));
        if (v < 0 || v > 255) throw ValidationError(index_path(path, i), "color channel must lie in [0, 255]");
        *ch[i] = static_cast<std::uint8_t>(v);
    }
    return c;
}

/// Walks one JSON object, remembering which keys were consumed so leftovers can be rejected.
class ObjectReader {
public:
    ObjectReader(const ojson& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    const ojson* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }
    const ojson& require(const std::string& key) {
        const ojson* v = find(key);
        if (!v) throw ValidationError(path(key), "required field is missing");
        return *v;
    }
    std::string path(const std::string& key) const { return join_path(path_, key); }

    void number(const std::string& key, double& out) {
        if (auto* v = find(key)) out = as_number(*v, path(key));
    }
    void integer(const std::string& key, int& out) {
        if (auto* v = find(key)) {
            const long long x = as_integer(*v, path(key));
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                throw ValidationError(path(key), "integer out of range");
            out = static_cast<int>(x);
        }
    }
    void integer(const std::string& key, long long& out) {
        if (auto* v = find(key)) out = as_integer(*v, path(key));
    }
    void string(const std::string& key, std::string& out) {
        if (auto* v = find(key)) out = as_string(*v, path(key));
    }
    void boolean(const std::string& key, bool& out) {
        if (auto* v = find(key)) out = as_bool(*v, path(key));
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ValidationError(join_path(path_, it.key()), "unknown key");
    }

private:
    const ojson& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Shape read_shape(ObjectReader& r) {
    const ojson* poly = r.find("polygon");
    const ojson* disc = r.find("disc");
    if ((poly != nullptr) == (disc != nullptr))
        throw ValidationError(r.path("polygon"), "exactly one of 'polygon' or 'disc' is required");
    if (poly) return Shape::polygon(as_points(*poly, r.path("polygon")));
    ObjectReader d(*disc, r.path("disc"));
    Shape s = Shape::disc(as_vec2(d.require("center"), d.path("center")), 0.0);
    s.radius = as_number(d.require("radius"), d.path("radius"));
    d.finish();
    return s;
}

inline ojson points_json(const std::vector<Vec2>& pts) {
    ojson a = ojson::array();
    for (const Vec2 p : pts) a.push_back({p.x, p.y});
    return a;
}

inline void shape_json(ojson& o, const Shape& s) {
    if (s.kind == Shape::Kind::Polygon) {
        o["polygon"] = points_json(s.points);
    } else {
        ojson d;
        d["center"] = {s.center.x, s.center.y};
        d["radius"] = s.radius;
        o["disc"] = d;
    }
}

inline void validate_shape(const Shape& s, const std::string& path, bool require_convex) {
    if (s.kind == Shape::Kind::Disc) {
        if (!(s.radius > 0)) throw ValidationError(path + ".disc.radius", "radius must be positive");
        return;
    }
    if (s.points.size() < 3) throw ValidationError(path + ".polygon", "polygon needs at least 3 vertices");
    if (std::abs(polygon_signed_area(s.points)) <= 1e-12)
        throw ValidationError(path + ".polygon", "polygon has zero area");
    if (require_convex && !is_convex(s.points))
        throw ValidationError(path + ".polygon", "solid footprints must be strictly convex");
}

inline void check_finite(double v, const std::string& path) {
    if (!std::isfinite(v)) throw ValidationError(path, "must be finite");
}

}  // namespace detail

/// Semantic checks on a fully populated scenario; throws ValidationError naming the field.
inline void validate_scenario(const Scenario& s) {
    using detail::index_path;
    if (s.schema_version != kSchemaVersion)
        throw ValidationError("schema_version", "unsupported version " + std::to_string(s.schema_version));
    const Bounds& b = s.world.bounds;
    if (!(b.min.x < b.max.x && b.min.y < b.max.y)) throw ValidationError("bounds", "min must be below max");
    if (!b.contains({s.robot.x, s.robot.y})) throw ValidationError("robot.start", "start lies outside bounds");
    if (!(s.robot.width > 0)) throw ValidationError("robot.width", "must be positive");
    if (!(s.robot.length > 0)) throw ValidationError("robot.length", "must be positive");
    if (s.goals.empty()) throw ValidationError("goals", "at least one goal is required");
    for (std::size_t i = 0; i < s.goals.size(); ++i)
        if (!b.contains(s.goals[i])) throw ValidationError(index_path("goals", i), "goal lies outside bounds");

    std::set<std::string> classes;
    for (std::size_t i = 0; i < s.world.obstacles.size(); ++i) {
        const auto& e = s.world.obstacles[i];
        const std::string p = index_path("world.obstacles", i);
        detail::validate_shape(e.shape, p, true);
        if (!(e.height > 0)) throw ValidationError(p + ".height", "must be positive");
    }
    for (std::size_t i = 0; i < s.world.beware_items.size(); ++i) {
        const auto& it = s.world.beware_items[i];
        const std::string p = index_path("world.beware_items", i);
        if (it.cls.empty()) throw ValidationError(p + ".class", "must not be empty");
        detail::validate_shape(it.shape, p, true);
        if (!(it.height > 0 && it.height < s.perception.filter.obstacle_min_height))
            throw ValidationError(p + ".height", "beware items must be lower than the obstacle height threshold");
        classes.insert(it.cls);
    }
    for (std::size_t i = 0; i < s.world.zones.size(); ++i) {
        const auto& z = s.world.zones[i];
        const std::string p = index_path("world.zones", i);
        if (z.cls.empty()) throw ValidationError(p + ".class", "must not be empty");
        detail::validate_shape(Shape::polygon(z.polygon), p, false);
        classes.insert(z.cls);
    }
    for (std::size_t i = 0; i < s.world.agents.size(); ++i) {
        const auto& a = s.world.agents[i];
        const std::string p = index_path("world.agents", i);
        if (!(a.radius > 0)) throw ValidationError(p + ".radius", "must be positive");
        if (!(a.height > 0)) throw ValidationError(p + ".height", "must be positive");
        if (!(a.speed >= 0)) throw ValidationError(p + ".speed", "must be non-negative");
        if (!(a.speed_jitter >= 0 && a.speed_jitter < 1)) throw ValidationError(p + ".speed_jitter", "must lie in [0, 1)");
        if (a.path.empty()) throw ValidationError(p + ".path", "needs at least one point");
        for (std::size_t k = 0; k < a.path.size(); ++k)
            if (!b.contains(a.path[k])) throw ValidationError(index_path(p + ".path", k), "outside bounds");
    }
    for (std::size_t i = 0; i < s.beware_list.size(); ++i)
        if (!classes.count(s.beware_list[i]))
            throw ValidationError(index_path("beware_list", i), "class '" + s.beware_list[i] + "' does not occur in the world");

    const SensorSpec& se = s.sensor;
    if (se.width <= 0 || se.height <= 0) throw ValidationError("sensor.width", "image size must be positive");
    if (!(se.h_fov_deg > 0 && se.h_fov_deg < 180)) throw ValidationError("sensor.h_fov_deg", "must lie in (0, 180)");
    if (!(se.v_fov_deg > 0 && se.v_fov_deg < 180)) throw ValidationError("sensor.v_fov_deg", "must lie in (0, 180)");
    if (!(se.depth_min > 0 && se.depth_min < se.depth_max))
        throw ValidationError("sensor.depth_min", "need 0 < depth_min < depth_max");
    if (!(se.mount_height > 0)) throw ValidationError("sensor.mount_height", "must be positive");
    if (!(se.mount_pitch_deg > -90 && se.mount_pitch_deg < 90))
        throw ValidationError("sensor.mount_pitch_deg", "must lie in (-90, 90)");
    if (!(se.rate_hz > 0)) throw ValidationError("sensor.rate_hz", "must be positive");
    if (!(se.mask_flip_prob >= 0 && se.mask_flip_prob <= 1))
        throw ValidationError("sensor.mask_flip_prob", "must lie in [0, 1]");

    const auto& pf = s.perception.filter;
    if (!(pf.ground_max_z >= 0 && pf.ground_max_z < pf.ceiling_min_z))
        throw ValidationError("perception.ground_max_z", "need 0 <= ground_max_z < ceiling_min_z");
    if (s.perception.segmenter != "oracle" && s.perception.segmenter != "color")
        throw ValidationError("perception.segmenter", "must be 'oracle' or 'color'");
    if (!(s.perception.color_threshold >= 0 && s.perception.color_threshold <= 1))
        throw ValidationError("perception.color_threshold", "must lie in [0, 1]");

    if (!(s.map.pose_quantum_m > 0)) throw ValidationError("map.pose_quantum_m", "must be positive");
    if (!(s.map.pose_quantum_deg > 0 && s.map.pose_quantum_deg <= 180))
        throw ValidationError("map.pose_quantum_deg", "must lie in (0, 180]");

    try {
        s.grid.validate();
    } catch (const Error& e) {
        throw ValidationError("grid", e.what());
    }
    const double half_w = s.grid.width / 2 * s.grid.resolution, half_h = s.grid.height / 2 * s.grid.resolution;
    if (b.min.x < -half_w || b.max.x >= half_w || b.min.y < -half_h || b.max.y >= half_h)
        throw ValidationError("grid", "grid does not cover the world bounds");
    if (!(s.safety_margin >= 0)) throw ValidationError("inflation.safety_margin", "must be non-negative");

    if (!(s.planner.theta_th_deg > 0 && s.planner.theta_th_deg < 180))
        throw ValidationError("planner.theta_th_deg", "must lie in (0, 180)");
    if (!(s.planner.heuristic_weight >= 1)) throw ValidationError("planner.heuristic_weight", "must be >= 1");
    if (s.planner.max_expansions < 0) throw ValidationError("planner.max_expansions", "must be >= 0");
    if (s.planner.snap_radius < -1) throw ValidationError("planner.snap_radius", "must be >= -1");
    if (!(s.planner.max_spacing > 0)) throw ValidationError("planner.max_spacing", "must be positive");
    if (!(s.planner.path_margin >= 0)) throw ValidationError("planner.path_margin", "must be non-negative");

    try {
        s.local_planner.validate();
    } catch (const Error& e) {
        throw ValidationError("local_planner", e.what());
    }

    if (!(s.sim.control_rate_hz > 0)) throw ValidationError("sim.control_rate_hz", "must be positive");
    const double ratio = s.sim.control_rate_hz / se.rate_hz;
    if (ratio < 1 || std::abs(ratio - std::round(ratio)) > 1e-9)
        throw ValidationError("sensor.rate_hz", "control rate must be an integer multiple of the sensor rate");
    if (!(s.sim.timeout_s > 0)) throw ValidationError("sim.timeout_s", "must be positive");
    if (!(s.sim.noise_v_sigma >= 0)) throw ValidationError("sim.noise_v_sigma", "must be non-negative");
    if (!(s.sim.noise_omega_sigma >= 0)) throw ValidationError("sim.noise_omega_sigma", "must be non-negative");
}

/// Builds a Scenario from an already-parsed JSON document (strict keys, defaults applied).
inline Scenario scenario_from_json(const ojson& root) {
    using namespace detail;
    Scenario s;
    ObjectReader r(root, "");
    long long version = kSchemaVersion;
    r.integer("schema_version", version);
    s.schema_version = static_cast<int>(version);
    r.string("name", s.name);
    if (auto* v = r.find("seed")) s.seed = as_unsigned(*v, "seed");

    {
        ObjectReader b(r.require("bounds"), "bounds");
        s.world.bounds.min = as_vec2(b.require("min"), "bounds.min");
        s.world.bounds.max = as_vec2(b.require("max"), "bounds.max");
        b.finish();
    }
    {
        ObjectReader rb(r.require("robot"), "robot");
        const ojson& st = rb.require("start");
        if (!st.is_array() || (st.size() != 2 && st.size() != 3))
            throw ValidationError("robot.start", "expected [x, y] or [x, y, theta_deg]");
        s.robot.x = as_number(st[0], "robot.start[0]");
        s.robot.y = as_number(st[1], "robot.start[1]");
        if (st.size() == 3) s.robot.theta_deg = as_number(st[2], "robot.start[2]");
        rb.number("width", s.robot.width);
        rb.number("length", s.robot.length);
        rb.finish();
    }
    {
        const ojson& g = r.require("goals");
        if (!g.is_array()) throw ValidationError("goals", "expected an array of [x, y]");
        for (std::size_t i = 0; i < g.size(); ++i) s.goals.push_back(as_vec2(g[i], index_path("goals", i)));
    }
    if (auto* bl = r.find("beware_list")) {
        if (!bl->is_array()) throw ValidationError("beware_list", "expected an array of class names");
        for (std::size_t i = 0; i < bl->size(); ++i)
            s.beware_list.push_back(as_string((*bl)[i], index_path("beware_list", i)));
    }
    if (auto* cc = r.find("class_colors")) {
        if (!cc->is_object()) throw ValidationError("class_colors", "expected an object");
        for (auto it = cc->begin(); it != cc->end(); ++it)
            s.class_colors[it.key()] = as_rgb(it.value(), "class_colors." + it.key());
    }
    if (auto* w = r.find("world")) {
        ObjectReader wr(*w, "world");
        if (auto* obs = wr.find("obstacles")) {
            if (!obs->is_array()) throw ValidationError("world.obstacles", "expected an array");
            for (std::size_t i = 0; i < obs->size(); ++i) {
                ObjectReader e((*obs)[i], index_path("world.obstacles", i));
                StaticEntity ent;
                e.string("name", ent.name);
                ent.shape = read_shape(e);
                e.number("height", ent.height);
                e.finish();
                s.world.obstacles.push_back(std::move(ent));
            }
        }
        if (auto* items = wr.find("beware_items")) {
            if (!items->is_array()) throw ValidationError("world.beware_items", "expected an array");
            for (std::size_t i = 0; i < items->size(); ++i) {
                ObjectReader e((*items)[i], index_path("world.beware_items", i));
                BewareItem it;
                it.cls = as_string(e.require("class"), e.path("class"));
                it.shape = read_shape(e);
                e.number("height", it.height);
                e.finish();
                s.world.beware_items.push_back(std::move(it));
            }
        }
        if (auto* zones = wr.find("zones")) {
            if (!zones->is_array()) throw ValidationError("world.zones", "expected an array");
            for (std::size_t i = 0; i < zones->size(); ++i) {
                ObjectReader e((*zones)[i], index_path("world.zones", i));
                Zone z;
                z.cls = as_string(e.require("class"), e.path("class"));
                z.polygon = as_points(e.require("polygon"), e.path("polygon"));
                e.finish();
                s.world.zones.push_back(std::move(z));
            }
        }
        if (auto* agents = wr.find("agents")) {
            if (!agents->is_array()) throw ValidationError("world.agents", "expected an array");
            for (std::size_t i = 0; i < agents->size(); ++i) {
                ObjectReader e((*agents)[i], index_path("world.agents", i));
                DynamicAgent a;
                e.string("name", a.name);
                e.number("radius", a.radius);
                e.number("height", a.height);
                e.number("speed", a.speed);
                a.path = as_points(e.require("path"), e.path("path"));
                e.number("speed_jitter", a.speed_jitter);
                e.boolean("random_phase", a.random_phase);
                e.finish();
                s.world.agents.push_back(std::move(a));
            }
        }
        wr.finish();
    }
    if (auto* v = r.find("sensor")) {
        ObjectReader o(*v, "sensor");
        o.integer("width", s.sensor.width);
        o.integer("height", s.sensor.height);
        o.number("h_fov_deg", s.sensor.h_fov_deg);
        o.number("v_fov_deg", s.sensor.v_fov_deg);
        o.number("depth_min", s.sensor.depth_min);
        o.number("depth_max", s.sensor.depth_max);
        o.number("mount_height", s.sensor.mount_height);
        o.number("mount_pitch_deg", s.sensor.mount_pitch_deg);
        o.number("rate_hz", s.sensor.rate_hz);
        o.number("mask_flip_prob", s.sensor.mask_flip_prob);
        o.finish();
    }
    if (auto* v = r.find("perception")) {
        ObjectReader o(*v, "perception");
        o.number("ground_max_z", s.perception.filter.ground_max_z);
        o.number("ceiling_min_z", s.perception.filter.ceiling_min_z);
        o.number("obstacle_min_height", s.perception.filter.obstacle_min_height);
        o.string("segmenter", s.perception.segmenter);
        o.number("color_threshold", s.perception.color_threshold);
        o.finish();
    }
    if (auto* v = r.find("map")) {
        ObjectReader o(*v, "map");
        o.number("pose_quantum_m", s.map.pose_quantum_m);
        o.number("pose_quantum_deg", s.map.pose_quantum_deg);
        o.finish();
    }
    if (auto* v = r.find("grid")) {
        ObjectReader o(*v, "grid");
        o.number("resolution", s.grid.resolution);
        o.integer("width", s.grid.width);
        o.integer("height", s.grid.height);
        o.finish();
    }
    if (auto* v = r.find("inflation")) {
        ObjectReader o(*v, "inflation");
        o.number("safety_margin", s.safety_margin);
        o.finish();
    }
    if (auto* v = r.find("planner")) {
        ObjectReader o(*v, "planner");
        o.number("theta_th_deg", s.planner.theta_th_deg);
        o.number("heuristic_weight", s.planner.heuristic_weight);
        o.integer("max_expansions", s.planner.max_expansions);
        o.integer("snap_radius", s.planner.snap_radius);
        o.number("max_spacing", s.planner.max_spacing);
        o.number("path_margin", s.planner.path_margin);
        o.finish();
    }
    if (auto* v = r.find("local_planner")) {
        ObjectReader o(*v, "local_planner");
        LocalConfig& l = s.local_planner;
        o.number("v_max", l.v_max);
        o.number("omega_max", l.omega_max);
        o.number("horizon", l.horizon);
        o.number("dt", l.dt);
        o.integer("speeds", l.speeds);
        o.integer("curvatures", l.curvatures);
        o.number("waypoint_radius", l.waypoint_radius);
        o.number("goal_radius", l.goal_radius);
        o.number("w_distance", l.w_distance);
        o.number("w_heading", l.w_heading);
        o.number("w_clearance", l.w_clearance);
        o.number("clearance_cap", l.clearance_cap);
        o.finish();
    }
    if (auto* v = r.find("sim")) {
        ObjectReader o(*v, "sim");
        o.number("control_rate_hz", s.sim.control_rate_hz);
        o.number("timeout_s", s.sim.timeout_s);
        o.number("noise_v_sigma", s.sim.noise_v_sigma);
        o.number("noise_omega_sigma", s.sim.noise_omega_sigma);
        o.finish();
    }
    r.finish();
    validate_scenario(s);
    return s;
}

/// Parses JSON text; syntax errors report line and column.
inline ojson parse_json_text(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                                                e.what());
    }
}

inline Scenario parse_scenario(const std::string& text) { return scenario_from_json(parse_json_text(text)); }

/// Canonical form: every field present, fixed key order.
inline ojson scenario_to_json(const Scenario& s) {
    using detail::points_json;
    ojson j;
    j["schema_version"] = s.schema_version;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["bounds"] = {{"min", {s.world.bounds.min.x, s.world.bounds.min.y}},
                   {"max", {s.world.bounds.max.x, s.world.bounds.max.y}}};
    j["robot"] = {{"start", {s.robot.x, s.robot.y, s.robot.theta_deg}},
                  {"width", s.robot.width},
                  {"length", s.robot.length}};
    j["goals"] = points_json(s.goals);
    j["beware_list"] = s.beware_list;
    ojson cc = ojson::object();
    for (const auto& [k, c] : s.class_colors) cc[k] = {c.r, c.g, c.b};
    j["class_colors"] = cc;

    ojson w;
    ojson obs = ojson::array();
    for (const auto& e : s.world.obstacles) {
        ojson o;
        o["name"] = e.name;
        detail::shape_json(o, e.shape);
        o["height"] = e.height;
        obs.push_back(o);
    }
    ojson items = ojson::array();
    for (const auto& it : s.world.beware_items) {
        ojson o;
        o["class"] = it.cls;
        detail::shape_json(o, it.shape);
        o["height"] = it.height;
        items.push_back(o);
    }
    ojson zones = ojson::array();
    for (const auto& z : s.world.zones) zones.push_back({{"class", z.cls}, {"polygon", points_json(z.polygon)}});
    ojson agents = ojson::array();
    for (const auto& a : s.world.agents) {
        ojson o;
        o["name"] = a.name;
        o["radius"] = a.radius;
        o["height"] = a.height;
        o["speed"] = a.speed;
        o["path"] = points_json(a.path);
        o["speed_jitter"] = a.speed_jitter;
        o["random_phase"] = a.random_phase;
        agents.push_back(o);
    }
    w["obstacles"] = obs;
    w["beware_items"] = items;
    w["zones"] = zones;
    w["agents"] = agents;
    j["world"] = w;

    const SensorSpec& se = s.sensor;
    j["sensor"] = {{"width", se.width},
                   {"height", se.height},
                   {"h_fov_deg", se.h_fov_deg},
                   {"v_fov_deg", se.v_fov_deg},
                   {"depth_min", se.depth_min},
                   {"depth_max", se.depth_max},
                   {"mount_height", se.mount_height},
                   {"mount_pitch_deg", se.mount_pitch_deg},
                   {"rate_hz", se.rate_hz},
                   {"mask_flip_prob", se.mask_flip_prob}};
    j["perception"] = {{"ground_max_z", s.perception.filter.ground_max_z},
                       {"ceiling_min_z", s.perception.filter.ceiling_min_z},
                       {"obstacle_min_height", s.perception.filter.obstacle_min_height},
                       {"segmenter", s.perception.segmenter},
                       {"color_threshold", s.perception.color_threshold}};
    j["map"] = {{"pose_quantum_m", s.map.pose_quantum_m}, {"pose_quantum_deg", s.map.pose_quantum_deg}};
    j["grid"] = {{"resolution", s.grid.resolution}, {"width", s.grid.width}, {"height", s.grid.height}};
    j["inflation"] = {{"safety_margin", s.safety_margin}};
    j["planner"] = {{"theta_th_deg", s.planner.theta_th_deg},
                    {"heuristic_weight", s.planner.heuristic_weight},
                    {"max_expansions", s.planner.max_expansions},
                    {"snap_radius", s.planner.snap_radius},
                    {"max_spacing", s.planner.max_spacing},
                    {"path_margin", s.planner.path_margin}};
    const LocalConfig& l = s.local_planner;
    j["local_planner"] = {{"v_max", l.v_max},
                          {"omega_max", l.omega_max},
                          {"horizon", l.horizon},
                          {"dt", l.dt},
                          {"speeds", l.speeds},
                          {"curvatures", l.curvatures},
                          {"waypoint_radius", l.waypoint_radius},
                          {"goal_radius", l.goal_radius},
                          {"w_distance", l.w_distance},
                          {"w_heading", l.w_heading},
                          {"w_clearance", l.w_clearance},
                          {"clearance_cap", l.clearance_cap}};
    j["sim"] = {{"control_rate_hz", s.sim.control_rate_hz},
                {"timeout_s", s.sim.timeout_s},
                {"noise_v_sigma", s.sim.noise_v_sigma},
                {"noise_omega_sigma", s.sim.noise_omega_sigma}};
    return j;
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

/// Applies "dotted.path=value" overrides on the canonical form and re-validates. The
/// value is read as JSON when it parses as JSON, otherwise as a plain string.
inline Scenario apply_overrides(const Scenario& base, const std::vector<std::string>& overrides) {
    ojson j = scenario_to_json(base);
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ValidationError(ov, "override must look like key.path=value");
        const std::string key = ov.substr(0, eq);
        const std::string raw = ov.substr(eq + 1);
        ojson* node = &j;
        std::string walked;
        for (std::string_view seg : text::split(key, '.')) {
            std::string name(seg);
            std::optional<std::size_t> index;
            if (auto lb = name.find('['); lb != std::string::npos && name.back() == ']') {
                index = static_cast<std::size_t>(text::parse_int(name.substr(lb + 1, name.size() - lb - 2), key));
                name = name.substr(0, lb);
            }
            walked = detail::join_path(walked, name);
            if (!node->is_object() || !node->contains(name)) throw ValidationError(walked, "unknown override key");
            node = &(*node)[name];
            if (index) {
                walked = detail::index_path(walked, *index);
                if (!node->is_array() || *index >= node->size()) throw ValidationError(walked, "index out of range");
                node = &(*node)[*index];
            }
        }
        ojson value = ojson::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw;
        *node = value;
    }
    return scenario_from_json(j);
}

}  // namespace semnav
