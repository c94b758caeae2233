#pragma once
// simulator.hpp - deterministic 2.5D world: ray-cast depth and ground-truth masks,
// unicycle robot, looping agents, and the sense -> map -> plan -> act episode loop.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "semnav/distance_field.hpp"
#include "semnav/error.hpp"
#include "semnav/geometry.hpp"
#include "semnav/global_map.hpp"
#include "semnav/global_planner.hpp"
#include "semnav/local_planner.hpp"
#include "semnav/metrics.hpp"
#include "semnav/occupancy_grid.hpp"
#include "semnav/perception.hpp"
#include "semnav/scenario.hpp"
#include "semnav/world.hpp"

namespace semnav {

struct SensorModel {
    CameraIntrinsics intrinsics;
    SensorMount mount;

    static SensorModel from_spec(const SensorSpec& s) { return {s.intrinsics(), s.mount()}; }
};

struct SensorFrame {
    DepthFrame depth;
    SemanticMask mask;
    ColorFrame rgb;
};

/// Ground-truth segmenter: hands back the mask rendered alongside the frame.
class OracleSegmenter final : public Segmenter {
public:
    explicit OracleSegmenter(SemanticMask truth) : truth_(std::move(truth)) {}
    SemanticMask segment(const ColorFrame& rgb, const DepthFrame& depth) const override {
        if (!rgb.same_shape(depth.width(), depth.height()) || !truth_.data.same_shape(depth.width(), depth.height()))
            throw Error(ErrorKind::InvalidInput, "color, depth and oracle mask are not aligned");
        return truth_;
    }

private:
    SemanticMask truth_;
};

struct NoiseModel {
    double v_sigma = 0.0;
    double omega_sigma = 0.0;
};

/// Exact unicycle update (closed-form arc when omega != 0), with optional Gaussian
/// perturbation of (v, omega) drawn from `rng`.
inline Pose2D step_robot(const Pose2D& pose, VelocityCommand cmd, double dt, const NoiseModel& noise = {},
                         std::mt19937_64* rng = nullptr) {
    if (!(dt > 0)) throw Error(ErrorKind::InvalidInput, "dt must be positive");
    double v = cmd.v, w = cmd.omega;
    if (rng) {
        if (noise.v_sigma > 0) v += std::normal_distribution<double>(0.0, noise.v_sigma)(*rng);
        if (noise.omega_sigma > 0) w += std::normal_distribution<double>(0.0, noise.omega_sigma)(*rng);
    }
    Pose2D out = pose;
    if (std::abs(w) < 1e-12) {
        out.x += v * std::cos(pose.theta) * dt;
        out.y += v * std::sin(pose.theta) * dt;
    } else {
        const double th1 = pose.theta + w * dt;
        out.x += (v / w) * (std::sin(th1) - std::sin(pose.theta));
        out.y += (v / w) * (std::cos(pose.theta) - std::cos(th1));
        out.theta = th1;
    }
    out.theta = normalize_angle(out.theta);
    return out;
}

/// Mutable world state: the static description plus agent positions.
class Scene {
    enum class HitKind : std::uint8_t { None, Ground, Obstacle, Item, Agent };

public:
    using ColorFn = std::function<Rgb(const std::string&)>;

    static constexpr Rgb kSky{170, 200, 255};
    static constexpr Rgb kGround{128, 128, 128};
    static constexpr Rgb kObstacle{90, 70, 50};
    static constexpr Rgb kAgent{200, 160, 120};

    Scene(World world, const std::vector<std::string>& beware, ColorFn color = {}, std::uint64_t seed = 0)
        : world_(std::move(world)) {
        auto listed = [&](const std::string& c) { return std::find(beware.begin(), beware.end(), c) != beware.end(); };
        if (!color) color = [](const std::string&) { return Rgb{255, 0, 0}; };
        for (const auto& it : world_.beware_items) {
            item_beware_.push_back(listed(it.cls));
            item_color_.push_back(color(it.cls));
        }
        for (const auto& z : world_.zones) {
            zone_beware_.push_back(listed(z.cls));
            zone_color_.push_back(color(z.cls));
        }
        std::mt19937_64 rng(seed);
        for (const auto& a : world_.agents) {
            double speed = a.speed;
            if (a.speed_jitter > 0) speed *= 1.0 + std::uniform_real_distribution<double>(-a.speed_jitter, a.speed_jitter)(rng);
            AgentLoop loop(a.path, speed);
            double phase = 0.0;
            if (a.random_phase && loop.perimeter() > 0)
                phase = std::uniform_real_distribution<double>(0.0, loop.perimeter())(rng);
            agents_.emplace_back(a.path, speed, phase);
        }
    }

    const World& world() const { return world_; }
    const std::vector<AgentLoop>& agents() const { return agents_; }

    std::vector<Vec2> agent_positions() const {
        std::vector<Vec2> out;
        for (const auto& a : agents_) out.push_back(a.position());
        return out;
    }

    void step_agents(double dt) {
        for (auto& a : agents_) a.advance(dt);
    }

    bool collides(Vec2 center, double radius) const {
        return disc_collides(world_, agent_positions(), center, radius);
    }

    /// Renders one depth frame and its ground-truth beware mask by ray casting from
    /// the camera. `flip_prob` flips mask pixels at random to mimic segmentation noise.
    SensorFrame sense(const Pose2D& pose, const SensorModel& sensor, bool want_rgb = false, double flip_prob = 0.0,
                      std::mt19937_64* rng = nullptr) const {
        const CameraIntrinsics& k = sensor.intrinsics;
        k.validate();
        SensorFrame f{DepthFrame(k), SemanticMask(k.width, k.height), {}};
        if (want_rgb) f.rgb = ColorFrame(k.width, k.height, kSky);

        const SensorMount dir_mount{0.0, sensor.mount.pitch};
        const double h = sensor.mount.height;
        const Vec2 origin = pose.position();
        const double c = std::cos(pose.theta), s = std::sin(pose.theta);

        std::vector<Vec3> dirs(static_cast<std::size_t>(k.width) * k.height);
        double max_planar = 0.0;
        for (int i = 0; i < k.height; ++i) {
            for (int j = 0; j < k.width; ++j) {
                const Vec3 r = camera_to_robot({(j - k.cx) / k.fx, (i - k.cy) / k.fy, 1.0}, dir_mount);
                const Vec3 d{c * r.x - s * r.y, s * r.x + c * r.y, r.z};
                dirs[static_cast<std::size_t>(i) * k.width + j] = d;
                max_planar = std::max(max_planar, std::hypot(d.x, d.y));
            }
        }
        const double reach = k.depth_max * max_planar;

        // Candidate solids within sensing reach.
        struct Candidate {
            const Shape* shape;
            double height;
            HitKind kind;
            std::size_t index;
            Shape agent_shape;
        };
        std::vector<Candidate> cand;
        auto near = [&](const Shape& sh) {
            const auto [bc, br] = sh.bounding_circle();
            return distance(bc, origin) <= reach + br;
        };
        for (std::size_t n = 0; n < world_.obstacles.size(); ++n)
            if (near(world_.obstacles[n].shape))
                cand.push_back({&world_.obstacles[n].shape, world_.obstacles[n].height, HitKind::Obstacle, n, {}});
        for (std::size_t n = 0; n < world_.beware_items.size(); ++n)
            if (near(world_.beware_items[n].shape))
                cand.push_back({&world_.beware_items[n].shape, world_.beware_items[n].height, HitKind::Item, n, {}});
        for (std::size_t n = 0; n < agents_.size(); ++n) {
            Shape disc = Shape::disc(agents_[n].position(), world_.agents[n].radius);
            if (near(disc)) cand.push_back({nullptr, world_.agents[n].height, HitKind::Agent, n, disc});
        }
        for (auto& cd : cand)
            if (cd.kind == HitKind::Agent) cd.shape = &cd.agent_shape;

        for (int i = 0; i < k.height; ++i) {
            for (int j = 0; j < k.width; ++j) {
                const Vec3 d = dirs[static_cast<std::size_t>(i) * k.width + j];
                const Vec2 d2{d.x, d.y};
                double best = std::numeric_limits<double>::infinity();
                HitKind kind = HitKind::None;
                std::size_t index = 0;
                if (d.z < 0) {
                    best = -h / d.z;
                    kind = HitKind::Ground;
                }
                for (const auto& cd : cand) {
                    const auto iv = cd.shape->ray_interval(origin, d2);
                    if (!iv) continue;
                    double lo = std::max(iv->first, 0.0), hi = iv->second;
                    if (d.z < 0) {
                        lo = std::max(lo, (cd.height - h) / d.z);
                        hi = std::min(hi, -h / d.z);
                    } else if (d.z > 0) {
                        hi = std::min(hi, (cd.height - h) / d.z);
                    } else if (h > cd.height) {
                        continue;
                    }
                    if (lo <= hi && lo < best) {
                        best = lo;
                        kind = cd.kind;
                        index = cd.index;
                    }
                }
                if (kind == HitKind::None) continue;

                bool beware = false;
                Rgb color = kGround;
                if (kind == HitKind::Ground) {
                    const Vec2 p = origin + best * d2;
                    for (std::size_t z = 0; z < world_.zones.size(); ++z) {
                        if (point_in_polygon(p, world_.zones[z].polygon)) {
                            beware = zone_beware_[z];
                            color = zone_color_[z];
                            break;
                        }
                    }
                } else if (kind == HitKind::Item) {
                    beware = item_beware_[index];
                    color = item_color_[index];
                } else if (kind == HitKind::Obstacle) {
                    color = kObstacle;
                } else {
                    color = kAgent;
                }
                if (k.valid_depth(best)) f.depth.at(i, j) = best;
                f.mask.at(i, j) = beware ? 1 : 0;
                if (want_rgb) f.rgb.at(i, j) = color;
            }
        }
        if (flip_prob > 0 && rng) {
            std::bernoulli_distribution flip(flip_prob);
            for (auto& m : f.mask.data.data)
                if (flip(*rng)) m = m ? 0 : 1;
        }
        return f;
    }

private:
    World world_;
    std::vector<bool> item_beware_, zone_beware_;
    std::vector<Rgb> item_color_, zone_color_;
    std::vector<AgentLoop> agents_;
};

inline SensorFrame sense(const World& world, const Pose2D& pose, const SensorSpec& spec,
                         const std::vector<std::string>& beware) {
    return Scene(world, beware).sense(pose, SensorModel::from_spec(spec));
}

// ---------------------------------------------------------------------------
// Episode log

enum class Outcome { None, Success, Collision, Timeout, Unreachable };

constexpr std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::None: return "none";
    case Outcome::Success: return "success";
    case Outcome::Collision: return "collision";
    case Outcome::Timeout: return "timeout";
    case Outcome::Unreachable: return "unreachable";
    }
    return "none";
}

struct TickRecord {
    double t = 0.0;
    Pose2D pose;
    VelocityCommand cmd;
    int plan_id = -1;
};

struct EpisodeEvent {
    double t = 0.0;
    std::string kind;  // goal_reached | collision | hazard_entered | plan_failed
    long long index = -1;
    std::string detail;
};

struct PlanRecord {
    int id = 0;
    double t = 0.0;
    double cost_cells = 0.0;
    std::size_t path_cells = 0;
    std::size_t waypoints = 0;
    double min_clearance_m = 0.0;  // path cells vs raw occupied cells at plan time
};

struct EpisodeLog {
    std::string scenario;
    GridConfig grid;
    Bounds bounds;
    double robot_radius = 0.35;
    std::vector<TickRecord> ticks;
    std::vector<EpisodeEvent> events;
    std::vector<MetricSample> metrics;
    std::vector<PlanRecord> plans;
    Outcome outcome = Outcome::None;
    std::size_t collisions = 0;
    std::size_t hazard_violations = 0;
    std::size_t goals_reached = 0;
    std::size_t sensor_frames = 0;
    double distance_m = 0.0;
    double duration_s = 0.0;
    double min_clearance_m = std::numeric_limits<double>::infinity();
    double wall_time_s = 0.0;
    Vec2 start;
    std::vector<Vec2> goals;
    // final map state, for export
    OccupancyGrid raw;
    OccupancyGrid semantic;
    OccupancyGrid inflated;
    std::vector<Cell> last_path;
    std::vector<Vec2> last_waypoints;

    std::vector<Pose2D> trajectory() const {
        std::vector<Pose2D> out;
        out.reserve(ticks.size());
        for (const auto& t : ticks) out.push_back(t.pose);
        return out;
    }
    std::vector<double> goal_times() const {
        std::vector<double> out;
        for (const auto& e : events)
            if (e.kind == "goal_reached") out.push_back(e.t);
        return out;
    }
    std::vector<long long> goal_order() const {
        std::vector<long long> out;
        for (const auto& e : events)
            if (e.kind == "goal_reached") out.push_back(e.index);
        return out;
    }
    double plan_clearance_min() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& p : plans) m = std::min(m, p.min_clearance_m);
        return m;
    }
};

struct EpisodeOptions {
    /// Called for every sensor frame (debug dumps).
    std::function<void(std::size_t, const Pose2D&, const SensorFrame&)> on_frame;
    /// Keep the per-frame RGB render even with the oracle segmenter.
    bool render_rgb = false;
};

/// Runs one closed-loop episode. Deterministic for a given scenario (including seed).
inline EpisodeLog run_episode(const Scenario& sc, const EpisodeOptions& opts = {}) {
    try {
        validate_scenario(sc);
    } catch (const ValidationError& e) {
        throw Error(ErrorKind::ScenarioInvalid, e.what());
    }
    const auto wall_start = std::chrono::steady_clock::now();

    EpisodeLog log;
    log.scenario = sc.name;
    log.grid = sc.grid;
    log.bounds = sc.world.bounds;
    log.robot_radius = sc.robot.width / 2.0;
    log.start = {sc.robot.x, sc.robot.y};
    log.goals = sc.goals;

    Scene scene(sc.world, sc.beware_list, [&](const std::string& c) { return sc.color_of(c); }, sc.seed);
    std::mt19937_64 noise_rng(sc.seed ^ 0x9e3779b97f4a7c15ULL);
    std::mt19937_64 mask_rng(sc.seed ^ 0xc2b2ae3d27d4eb4fULL);
    const SensorModel sensor = SensorModel::from_spec(sc.sensor);
    const NoiseModel noise{sc.sim.noise_v_sigma, sc.sim.noise_omega_sigma};
    const bool use_color = sc.perception.segmenter == "color";
    std::vector<Rgb> beware_colors;
    for (const auto& c : sc.beware_list) beware_colors.push_back(sc.color_of(c));
    const ColorThresholdSegmenter color_seg(beware_colors, sc.perception.color_threshold);

    const double dt = 1.0 / sc.sim.control_rate_hz;
    const auto sensor_period = static_cast<long long>(std::llround(sc.sim.control_rate_hz / sc.sensor.rate_hz));
    const auto max_ticks = static_cast<long long>(std::ceil(sc.sim.timeout_s / dt - 1e-9));
    const int r_i = sc.inflation_radius();
    const int r_plan = sc.planning_radius();
    const PlannerConfig pcfg = sc.planner.config();
    const auto prims = generate_primitives(sc.local_planner);
    const double radius = sc.robot.width / 2.0;

    GlobalMap map(sc.map.quantization());
    OccupancyGrid raw(sc.grid), inflated = inflate(OccupancyGrid(sc.grid), r_i);
    OccupancyGrid search = inflated;
    DistanceField clearance(inflated);
    ExploredArea explored(sc.grid);
    std::uint64_t revision = 0;
    Mission mission(sc.goals, sc.local_planner);
    int plan_id = -1;

    Pose2D pose = sc.robot.start();
    double distance_m = 0.0;
    bool need_plan = false;

    auto fail = [&](double t, const Error& e) {
        log.events.push_back({t, "plan_failed", static_cast<long long>(mission.goal_index()), e.what()});
        log.outcome = Outcome::Unreachable;
    };
    auto do_plan = [&](double t) -> bool {
        try {
            const PlanResult pr = plan(search, pose, mission.current_goal(), pcfg, r_plan);
            mission.set_plan(pr.waypoints, revision);
            ++plan_id;
            const DistanceField raw_field(raw);
            log.plans.push_back({plan_id, t, pr.path.total_cost(), pr.path.cells.size(), pr.waypoints.points.size(),
                                 min_clearance(pr.path.cells, raw_field)});
            log.last_path = pr.path.cells;
            log.last_waypoints = pr.waypoints.points;
            need_plan = false;
            return true;
        } catch (const Error& e) {
            fail(t, e);
            return false;
        }
    };

    bool done = false;
    for (long long tick = 0; !done; ++tick) {
        const double t = tick * dt;
        if (tick % sensor_period == 0) {
            SensorFrame frame = scene.sense(pose, sensor, use_color || opts.render_rgb, sc.sensor.mask_flip_prob, &mask_rng);
            if (use_color) frame.mask = color_seg.segment(frame.rgb, frame.depth);
            if (opts.on_frame) opts.on_frame(log.sensor_frames, pose, frame);
            ++log.sensor_frames;

            PointCloud cloud = back_project(frame.depth, Provenance::Geometric);
            cloud.append(back_project(apply_mask(frame.depth, frame.mask), Provenance::Semantic));
            PointCloud world_cloud = transform_to_world(cloud, pose, sensor.mount);

            // explored-area bookkeeping: every valid return plus the planar ray to the
            // farthest return of each image column
            for (const auto& q : world_cloud.points) explored.mark_world({q.p.x, q.p.y});
            {
                const CameraIntrinsics& k = sensor.intrinsics;
                for (int j = 0; j < k.width; ++j) {
                    double far = -1;
                    Vec2 far_pt;
                    for (int i = 0; i < k.height; ++i) {
                        const double z = frame.depth.at(i, j);
                        if (!k.valid_depth(z)) continue;
                        const Vec3 w = robot_to_world(
                            camera_to_robot({(j - k.cx) * z / k.fx, (i - k.cy) * z / k.fy, z}, sensor.mount), pose);
                        const double dd = distance({w.x, w.y}, pose.position());
                        if (dd > far) {
                            far = dd;
                            far_pt = {w.x, w.y};
                        }
                    }
                    if (far > 0) explored.carve(pose.position(), far_pt);
                }
            }

            map.upsert_scan(pose, filter_geometric(world_cloud, sc.perception.filter));
            raw = rasterize(map, sc.grid);
            inflated = inflate(raw, r_i);
            search = r_plan == r_i ? inflated : inflate(raw, r_plan);
            clearance = DistanceField(inflated);
            ++revision;
            need_plan = true;
        }

        VelocityCommand cmd;
        if (need_plan && !mission.finished() && !do_plan(t)) done = true;

        while (!done) {
            const MissionEvent ev = mission.step(pose, inflated, clearance, revision, prims);
            if (const auto* g = std::get_if<GoalReached>(&ev)) {
                log.events.push_back({t, "goal_reached", static_cast<long long>(g->goal), ""});
                ++log.goals_reached;
                mission.advance_goal();
                if (mission.finished()) {
                    log.outcome = Outcome::Success;
                    done = true;
                } else if (!do_plan(t)) {
                    done = true;
                }
            } else if (std::holds_alternative<WaypointAdvanced>(ev)) {
                continue;
            } else if (const auto* st = std::get_if<PlanStale>(&ev)) {
                cmd = st->stop;
                need_plan = true;
                break;
            } else {
                cmd = std::get<VelocityCommand>(ev);
                break;
            }
        }
        if (done) {
            log.ticks.push_back({t, pose, {}, plan_id});
            log.metrics.push_back({t, explored.area_m2(), distance_m});
            break;
        }
        log.ticks.push_back({t, pose, cmd, plan_id});
        log.metrics.push_back({t, explored.area_m2(), distance_m});

        const Pose2D next = step_robot(pose, cmd, dt, noise, &noise_rng);
        distance_m += distance(pose.position(), next.position());
        pose = next;
        scene.step_agents(dt);

        const double t1 = (tick + 1) * dt;
        if (scene.collides(pose.position(), radius)) {
            ++log.collisions;
            log.events.push_back({t1, "collision", -1, ""});
            log.outcome = Outcome::Collision;
            log.ticks.push_back({t1, pose, {}, plan_id});
            log.metrics.push_back({t1, explored.area_m2(), distance_m});
            break;
        }
        if (tick + 1 >= max_ticks) {
            log.outcome = Outcome::Timeout;
            log.ticks.push_back({t1, pose, {}, plan_id});
            log.metrics.push_back({t1, explored.area_m2(), distance_m});
            break;
        }
    }

    // hazard entries from geometric ground truth along the recorded trajectory
    bool inside = false;
    for (const auto& tr : log.ticks) {
        const bool now = disc_in_hazard(sc.world, tr.pose.position(), radius);
        log.hazard_violations += now;
        if (now && !inside) log.events.push_back({tr.t, "hazard_entered", -1, ""});
        inside = now;
    }
    std::stable_sort(log.events.begin(), log.events.end(),
                     [](const EpisodeEvent& a, const EpisodeEvent& b) { return a.t < b.t; });

    log.distance_m = distance_m;
    log.duration_s = log.ticks.empty() ? 0.0 : log.ticks.back().t;
    log.raw = raw;
    log.semantic = rasterize(map, sc.grid, [](const TaggedPoint& q) { return q.prov == Provenance::Semantic; });
    log.inflated = inflated;
    log.min_clearance_m = min_clearance(log.trajectory(), raw);
    log.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return log;
}

}  // namespace semnav
