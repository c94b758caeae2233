// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "semnav/semnav.hpp"

using namespace semnav;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int digits = 3) { return text::fixed(v, digits); }

Scenario load(const std::string& name) {
    return parse_scenario(io::read_file(fs::path(SEMNAV_SCENARIO_DIR) / (name + ".json")));
}

// ---------------------------------------------------------------------------
// 1. A* optimality against an exact-arithmetic Dijkstra

// a + b*sqrt(2) with integer a, b; comparisons are exact.
struct Surd {
    long long a = 0, b = 0;
};

int compare(Surd x, Surd y) {
    const long long da = x.a - y.a, db = y.b - x.b;  // sign of da - db*sqrt(2)
    if (da >= 0 && db <= 0) return (da == 0 && db == 0) ? 0 : 1;
    if (da <= 0 && db >= 0) return -1;
    const long long lhs = da * da, rhs = 2 * db * db;
    if (da > 0) return lhs > rhs ? 1 : -1;  // both positive
    return lhs > rhs ? -1 : 1;              // both negative
}

std::optional<Surd> exact_dijkstra(const OccupancyGrid& g, Cell s, Cell t) {
    const int w = g.width(), h = g.height();
    std::vector<std::optional<Surd>> dist(static_cast<std::size_t>(w) * h);
    std::vector<char> done(dist.size(), 0);
    auto blocked = [&](int u, int v) { return u < 0 || v < 0 || u >= w || v >= h || g.occupied({u, v}); };
    auto worse = [](const std::pair<Surd, int>& x, const std::pair<Surd, int>& y) { return compare(x.first, y.first) > 0; };
    std::priority_queue<std::pair<Surd, int>, std::vector<std::pair<Surd, int>>, decltype(worse)> pq(worse);
    dist[s.v * w + s.u] = Surd{};
    pq.push({Surd{}, s.v * w + s.u});
    while (!pq.empty()) {
        const auto [d, i] = pq.top();
        pq.pop();
        if (done[i]) continue;
        done[i] = 1;
        const int u = i % w, v = i / w;
        if (u == t.u && v == t.v) return d;
        for (int dv = -1; dv <= 1; ++dv)
            for (int du = -1; du <= 1; ++du) {
                if ((!du && !dv) || blocked(u + du, v + dv)) continue;
                if (du && dv && blocked(u + du, v) && blocked(u, v + dv)) continue;
                const Surd nd = du && dv ? Surd{d.a, d.b + 1} : Surd{d.a + 1, d.b};
                const int j = (v + dv) * w + u + du;
                if (!dist[j] || compare(nd, *dist[j]) < 0) {
                    dist[j] = nd;
                    pq.push({nd, j});
                }
            }
    }
    return std::nullopt;
}

Verdict criterion1() {
    std::mt19937_64 rng(1);
    std::bernoulli_distribution occ(0.2);
    std::uniform_int_distribution<int> coord(0, 49);
    const auto t0 = Clock::now();
    int agree = 0, nopath = 0, mismatch = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        OccupancyGrid g(GridConfig{0.05, 50, 50});
        for (auto& c : g.cells()) c = occ(rng) ? kOccupied : kFree;
        auto free_cell = [&] {
            for (;;) {
                const Cell c{coord(rng), coord(rng)};
                if (!g.occupied(c)) return c;
            }
        };
        const Cell s = free_cell(), t = free_cell();
        const auto oracle = exact_dijkstra(g, s, t);
        std::optional<StepCount> got;
        try {
            got = astar(g, s, t, {}).steps;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NoPath) throw;
        }
        const bool same = oracle ? (got && got->orth == oracle->a && got->diag == oracle->b) : !got;
        agree += same;
        mismatch += !same;
        nopath += !oracle;
    }
    const double secs = seconds_since(t0);
    return {mismatch == 0 && secs < 30.0, std::to_string(agree) + "/1000 agree (" + std::to_string(nopath) +
                                              " NoPath), " + fmt(secs, 2) + " s"};
}

// ---------------------------------------------------------------------------
// 2. Projection round trip

Verdict criterion2() {
    const SensorSpec spec;
    const CameraIntrinsics k = spec.intrinsics();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> zd(k.depth_min, k.depth_max), ud(-0.5, k.width - 0.5),
        vd(-0.5, k.height - 0.5);
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
        // a random point inside the viewing frustum
        const double z = zd(rng);
        const Vec3 p{(ud(rng) - k.cx) * z / k.fx, (vd(rng) - k.cy) * z / k.fy, z};
        const PixelDepth px = forward_project(p, k);
        // re-center the intrinsics so the fractional pixel lands on an integer one
        const int i = static_cast<int>(std::lround(px.i)), j = static_cast<int>(std::lround(px.j));
        CameraIntrinsics shifted = k;
        shifted.cx = k.cx + (j - px.j);
        shifted.cy = k.cy + (i - px.i);
        DepthFrame d(shifted);
        d.at(i, j) = px.z;
        const PointCloud back = back_project(d, Provenance::Geometric);
        if (back.size() != 1) return {false, "point " + std::to_string(n) + " was not recovered"};
        worst = std::max(worst, norm(back.points[0].p - p) / norm(p));
    }
    return {worst <= 1e-9, "max relative error " + text::num(worst)};
}

// ---------------------------------------------------------------------------
// 3. Inflation exactness

OccupancyGrid disc_max(const OccupancyGrid& g, int r) {
    OccupancyGrid out(g.config(), true);
    for (int v = 0; v < g.height(); ++v)
        for (int u = 0; u < g.width(); ++u) {
            bool hit = false;
            for (int dv = -r; dv <= r && !hit; ++dv)
                for (int du = -r; du <= r && !hit; ++du)
                    hit = du * du + dv * dv <= r * r && g.contains({u + du, v + dv}) && g.occupied({u + du, v + dv});
            if (hit) out.set({u, v});
        }
    return out;
}

Verdict criterion3() {
    std::mt19937_64 rng(3);
    int equal = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int w = 2 * std::uniform_int_distribution<int>(10, 40)(rng);
        const int h = 2 * std::uniform_int_distribution<int>(10, 40)(rng);
        const double p = std::uniform_real_distribution<double>(0.0, 0.1)(rng);
        const int r = std::uniform_int_distribution<int>(0, 12)(rng);
        OccupancyGrid g(GridConfig{0.05, w, h});
        std::bernoulli_distribution occ(p);
        for (auto& c : g.cells()) c = occ(rng) ? kOccupied : kFree;
        equal += inflate(g, r) == disc_max(g, r);
    }
    const int ri = inflation_radius({0.7, 0.1}, 0.05);
    return {equal == 100 && ri == 9, std::to_string(equal) + "/100 grids identical, r_i=" + std::to_string(ri)};
}

// ---------------------------------------------------------------------------
// 4. Replacement-map semantics

struct PoseIdHash {
    std::size_t operator()(const PoseId& id) const {
        std::size_t h = std::hash<std::int32_t>()(id.ix);
        h = h * 1000003u ^ std::hash<std::int32_t>()(id.iy);
        return h * 1000003u ^ std::hash<std::int32_t>()(id.itheta);
    }
};

Verdict criterion4() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> pos(-1.5, 1.5), ang(-kPi, kPi), z(0, 2);
    std::uniform_int_distribution<int> npts(0, 30), nsteps(1, 200);
    int ok = 0;
    const int sequences = 200;
    for (int rep = 0; rep < sequences; ++rep) {
        GlobalMap map;
        std::vector<std::pair<PoseId, PointCloud>> history;
        bool good = true;
        const int steps = nsteps(rng);
        for (int s = 0; s < steps && good; ++s) {
            const Pose2D pose{pos(rng), pos(rng), ang(rng)};
            PointCloud c;
            for (int k = npts(rng); k > 0; --k) c.points.push_back({{pos(rng), pos(rng), z(rng)}, Provenance(k % 2)});
            map.upsert_scan(pose, c);
            history.emplace_back(pose_id(pose), std::move(c));

            // oracle rebuilt from scratch after every upsert
            std::unordered_map<PoseId, const PointCloud*, PoseIdHash> latest;
            for (const auto& [id, cl] : history) latest[id] = &cl;
            std::vector<std::tuple<double, double, double, int>> want, got;
            std::size_t total = 0;
            for (const auto& [id, cl] : latest) {
                total += cl->size();
                for (const auto& q : cl->points) want.emplace_back(q.p.x, q.p.y, q.p.z, int(q.prov));
            }
            for (const auto& q : map.merged_cloud().points) got.emplace_back(q.p.x, q.p.y, q.p.z, int(q.prov));
            std::sort(want.begin(), want.end());
            std::sort(got.begin(), got.end());
            good = got == want && map.size() == latest.size() && map.total_points() == total;
        }
        ok += good;
    }
    return {ok == sequences, std::to_string(ok) + "/" + std::to_string(sequences) + " sequences match the oracle"};
}

// ---------------------------------------------------------------------------
// 5-9. Scenario runs

struct ClearanceTracker {
    double worst_margin = std::numeric_limits<double>::infinity();  // plan clearance minus bound
    std::string worst;
    void add(const std::string& name, const Scenario& sc, const EpisodeLog& log) {
        const double bound = (sc.robot.width / 2 + sc.safety_margin) - sc.grid.resolution * std::sqrt(2.0);
        const double c = log.plan_clearance_min();
        if (c - bound < worst_margin) {
            worst_margin = c - bound;
            worst = name + " plan clearance " + fmt(c) + " m vs bound " + fmt(bound) + " m";
        }
    }
};

bool segment_hits(Vec2 a, Vec2 b, const Shape& s) {
    const Vec2 d = b - a;
    const auto iv = s.ray_interval(a, d);
    return iv && iv->second >= 0 && iv->first <= 1;
}

Verdict criterion5(const EpisodeLog& on, const EpisodeLog& off, const Scenario& sc) {
    // the beware entities must actually sit on the direct start-to-first-goal line
    const Vec2 s{sc.robot.x, sc.robot.y}, g = sc.goals.front();
    int on_line = 0;
    for (const auto& it : sc.world.beware_items) on_line += segment_hits(s, g, it.shape);
    for (const auto& z : sc.world.zones) on_line += segment_hits(s, g, Shape::polygon(z.polygon));
    const bool a = on.outcome == Outcome::Success && on.hazard_violations == 0 && on.collisions == 0;
    const bool b = off.hazard_violations > 0 && off.collisions == 0;
    const bool fast = on.wall_time_s < 60.0;
    return {a && b && fast && on_line >= 3,
            "beware on: " + std::string(to_string(on.outcome)) + " hazards=" + std::to_string(on.hazard_violations) +
                " collisions=" + std::to_string(on.collisions) + " (" + fmt(on.wall_time_s, 1) +
                " s); beware off: hazards=" + std::to_string(off.hazard_violations) +
                " collisions=" + std::to_string(off.collisions) + "; entities on line=" + std::to_string(on_line)};
}

Verdict criterion6(const EpisodeLog& log, const Scenario& sc) {
    double legs = 0;
    Vec2 prev{sc.robot.x, sc.robot.y};
    for (const Vec2 g : sc.goals) {
        legs += distance(prev, g);
        prev = g;
    }
    std::vector<long long> want(sc.goals.size());
    for (std::size_t i = 0; i < want.size(); ++i) want[i] = static_cast<long long>(i);
    const auto order = log.goal_order();
    std::string seq;
    for (auto i : order) seq += (seq.empty() ? "G" : ",G") + std::to_string(i + 1);
    const bool in_order = order == want;
    return {in_order && log.distance_m <= 1.5 * legs,
            "order " + seq + ", distance " + fmt(log.distance_m, 2) + " m <= " + fmt(1.5 * legs, 2) + " m"};
}

Verdict criterion8(const EpisodeLog& log, const Scenario& sc) {
    std::size_t trees = 0, mines = 0;
    for (const auto& o : sc.world.obstacles) trees += o.shape.kind == Shape::Kind::Disc;
    for (const auto& it : sc.world.beware_items) mines += it.cls == "landmine";
    const double span = std::min(sc.world.bounds.max.x - sc.world.bounds.min.x, sc.world.bounds.max.y - sc.world.bounds.min.y);
    const bool shape = span >= 150.0 && trees >= 200 && mines == 5 && sc.world.zones.size() == 1;
    const double bound = sc.safety_margin - sc.grid.resolution * std::sqrt(2.0);
    const bool pass = shape && log.outcome == Outcome::Success && log.hazard_violations == 0 &&
                      log.min_clearance_m >= bound;
    return {pass, std::string(to_string(log.outcome)) + ", hazards=" + std::to_string(log.hazard_violations) +
                      ", min_clearance " + fmt(log.min_clearance_m) + " m >= " + fmt(bound) + " m (" +
                      std::to_string(trees) + " trees, " + std::to_string(mines) + " landmines)"};
}

// ---------------------------------------------------------------------------
// 10. Replan latency

Verdict criterion10() {
    const GridConfig gc{0.05, 1200, 1200};
    const int r_i = inflation_radius({0.7, 0.1}, gc.resolution);
    std::mt19937_64 rng(10);
    std::vector<double> times;
    int solved = 0;
    for (int run = 0; run < 20; ++run) {
        // clustered obstacles: random 1 m blocks until 10% of the cells are covered
        std::vector<std::uint8_t> mark(gc.cell_count(), 0);
        std::size_t covered = 0;
        std::uniform_int_distribution<int> pos(0, gc.width - 20);
        PointCloud cloud;
        while (covered < gc.cell_count() / 10) {
            const int u0 = pos(rng), v0 = pos(rng);
            for (int v = v0; v < v0 + 20; ++v)
                for (int u = u0; u < u0 + 20; ++u) {
                    auto& m = mark[gc.index({u, v})];
                    if (m) continue;
                    m = 1;
                    ++covered;
                    const Vec2 w = pixel_to_world({u, v}, gc);
                    cloud.points.push_back({{w.x, w.y, 0.5}, Provenance::Geometric});
                }
        }
        const auto t0 = Clock::now();
        const OccupancyGrid raw = rasterize(cloud, gc);
        const OccupancyGrid inflated = inflate(raw, r_i);
        try {
            plan(inflated, {-29, -29, 0}, {29, 29}, {}, r_i);
            ++solved;
        } catch (const Error&) {
        }
        times.push_back(seconds_since(t0));
    }
    std::sort(times.begin(), times.end());
    const double median = 0.5 * (times[9] + times[10]);
    return {median < 1.0, "median " + fmt(median) + " s over 20 runs (max " + fmt(times.back()) + " s, " +
                              std::to_string(solved) + " found a path)"};
}

// ---------------------------------------------------------------------------
// 11. Determinism

Verdict criterion11(const EpisodeLog& first, const Scenario& sc) {
    const fs::path root = fs::temp_directory_path() / "semnav_acceptance_determinism";
    fs::remove_all(root);
    write_outputs(first, root / "a");
    write_outputs(run_episode(sc), root / "b");
    bool same = true;
    std::string detail;
    for (const char* f : {"trajectory.csv", "overlay.ppm"}) {
        const bool eq = io::read_file(root / "a" / f) == io::read_file(root / "b" / f);
        same = same && eq;
        detail += std::string(detail.empty() ? "" : ", ") + f + (eq ? " identical" : " differs");
    }
    fs::remove_all(root);
    return {same, detail};
}

// ---------------------------------------------------------------------------
// 12. Waypoint refinement

Verdict criterion12() {
    const GridConfig gc{0.05, 400, 400};
    CellPath straight, longrun, corner;
    for (int u = 0; u < 20; ++u) straight.cells.push_back({u, 0});
    for (int u = 0; u < 120; ++u) longrun.cells.push_back({u, 0});  // 5.95 m
    for (int u = 0; u <= 10; ++u) corner.cells.push_back({u, 0});
    for (int v = 1; v <= 10; ++v) corner.cells.push_back({10, v});

    std::mt19937_64 rng(12);
    int checked = 0, failed = 0;
    for (double deg = 5.0; deg <= 44.0 + 1e-9; deg += 0.5) {
        PlannerConfig cfg;
        cfg.theta_th = deg2rad(deg);
        auto fail_if = [&](bool bad) {
            ++checked;
            failed += bad;
        };
        fail_if(refine_waypoints(straight, cfg, gc).index != std::vector<std::size_t>{0, 19});
        fail_if(refine_waypoints(corner, cfg, gc).index != std::vector<std::size_t>{0, 10, 20});

        const auto lr = refine_waypoints(longrun, cfg, gc);
        bool spaced = lr.index.front() == 0 && lr.index.back() == 119;
        for (std::size_t i = 0; i + 1 < lr.points.size(); ++i)
            spaced = spaced && distance(lr.points[i], lr.points[i + 1]) <= cfg.max_spacing + 1e-9 &&
                     lr.points[i].y == lr.points[0].y;
        fail_if(!spaced || lr.points.size() != 4);

        // random 8-connected walks: every heading change must survive
        for (int rep = 0; rep < 10; ++rep) {
            CellPath p;
            Cell c{200, 200};
            p.cells.push_back(c);
            int dir = 0;
            for (int s = 0; s < 60; ++s) {
                if (std::bernoulli_distribution(0.2)(rng)) dir = (dir + (std::bernoulli_distribution(0.5)(rng) ? 1 : 7)) % 8;
                static constexpr int du[8] = {1, 1, 0, -1, -1, -1, 0, 1}, dv[8] = {0, 1, 1, 1, 0, -1, -1, -1};
                c = {c.u + du[dir], c.v + dv[dir]};
                p.cells.push_back(c);
            }
            const auto wp = refine_waypoints(p, cfg, gc);
            bool all_turns = wp.index.front() == 0 && wp.index.back() == p.cells.size() - 1;
            for (std::size_t i = 1; i + 1 < p.cells.size(); ++i) {
                const Cell a = p.cells[i - 1], b = p.cells[i], n = p.cells[i + 1];
                const bool turn = (b.u - a.u) != (n.u - b.u) || (b.v - a.v) != (n.v - b.v);
                if (turn) all_turns = all_turns && std::find(wp.index.begin(), wp.index.end(), i) != wp.index.end();
            }
            fail_if(!all_turns);
        }
    }
    return {failed == 0, std::to_string(checked - failed) + "/" + std::to_string(checked) +
                             " checks over theta_th in [5, 44] deg"};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const std::string& name, const std::function<Verdict()>& f) {
        Verdict v;
        try {
            v = f();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "A* optimality", criterion1);
    report(2, "projection round trip", criterion2);
    report(3, "inflation exactness", criterion3);
    report(4, "replacement map", criterion4);

    ClearanceTracker clearance;
    const Scenario indoor = load("indoor");
    const EpisodeLog indoor_log = run_episode(indoor);
    clearance.add("indoor", indoor, indoor_log);
    Scenario indoor_off = indoor;
    indoor_off.beware_list.clear();
    const EpisodeLog off_log = run_episode(indoor_off);
    clearance.add("indoor without beware list", indoor_off, off_log);
    report(5, "semantic avoidance", [&] { return criterion5(indoor_log, off_log, indoor); });
    report(6, "multi-goal sequencing", [&] { return criterion6(indoor_log, indoor); });

    report(7, "dynamic agent", [&] {
        const Scenario base = load("dynamic");
        int collisions = 0, success = 0, timeout = 0, other = 0;
        std::string hit;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            Scenario sc = base;
            sc.seed = seed;
            const EpisodeLog log = run_episode(sc);
            clearance.add("dynamic seed " + std::to_string(seed), sc, log);
            collisions += log.outcome == Outcome::Collision;
            success += log.outcome == Outcome::Success;
            timeout += log.outcome == Outcome::Timeout;
            other += log.outcome == Outcome::Unreachable;
            if (log.outcome == Outcome::Collision) hit += (hit.empty() ? " (seed " : ", ") + std::to_string(seed);
        }
        if (!hit.empty()) hit += ")";
        return Verdict{collisions == 0 && other == 0,
                       std::to_string(success) + " success, " + std::to_string(timeout) + " timeout, " +
                           std::to_string(collisions) + " collision" + hit + ", " + std::to_string(other) +
                           " unreachable over 20 seeds"};
    });

    report(8, "forest", [&] {
        const Scenario forest = load("forest");
        const EpisodeLog log = run_episode(forest);
        clearance.add("forest", forest, log);
        return criterion8(log, forest);
    });
    report(9, "clearance bound", [&] {
        return Verdict{clearance.worst_margin >= 0, "tightest: " + clearance.worst};
    });
    report(10, "replan latency", criterion10);
    report(11, "determinism", [&] { return criterion11(indoor_log, indoor); });
    report(12, "waypoint refinement", criterion12);

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
