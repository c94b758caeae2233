#pragma once
// global_map.hpp - pose-keyed store of world-frame scans.
//
// One fused scan is kept per quantized robot pose. Re-observing a pose cell
// replaces that cell's scan wholesale, so obstacles that moved away vanish
// once their source pose is revisited.

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "semnav/error.hpp"
#include "semnav/geometry.hpp"
#include "semnav/perception.hpp"
#include "semnav/text.hpp"

namespace semnav {

struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // (-pi, pi]

    Vec2 position() const { return {x, y}; }
    friend constexpr bool operator==(const Pose2D&, const Pose2D&) = default;
};

/// Camera placement on the robot: height above ground and pitch (negative looks down).
struct SensorMount {
    double height = 0.6;
    double pitch = deg2rad(-15.0);
    friend constexpr bool operator==(const SensorMount&, const SensorMount&) = default;
};

/// Camera frame (x right, y down, z forward) to robot frame (x forward, y left, z up).
inline Vec3 camera_to_robot(const Vec3& c, const SensorMount& m) {
    const double fx = c.z, fy = -c.x, fz = -c.y;
    const double cp = std::cos(m.pitch), sp = std::sin(m.pitch);
    return {fx * cp - fz * sp, fy, fx * sp + fz * cp + m.height};
}

inline Vec3 robot_to_camera(const Vec3& r, const SensorMount& m) {
    const double z = r.z - m.height;
    const double cp = std::cos(m.pitch), sp = std::sin(m.pitch);
    const double fx = r.x * cp + z * sp;
    const double fz = -r.x * sp + z * cp;
    return {-r.y, -fz, fx};
}

inline Vec3 robot_to_world(const Vec3& r, const Pose2D& pose) {
    const double c = std::cos(pose.theta), s = std::sin(pose.theta);
    return {pose.x + c * r.x - s * r.y, pose.y + s * r.x + c * r.y, r.z};
}

inline Vec3 world_to_robot(const Vec3& w, const Pose2D& pose) {
    const double c = std::cos(pose.theta), s = std::sin(pose.theta);
    const double dx = w.x - pose.x, dy = w.y - pose.y;
    return {c * dx + s * dy, -s * dx + c * dy, w.z};
}

inline PointCloud transform_to_world(const PointCloud& cloud, const Pose2D& pose, const SensorMount& mount) {
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const auto& q : cloud.points) out.points.push_back({robot_to_world(camera_to_robot(q.p, mount), pose), q.prov});
    return out;
}

inline PointCloud transform_to_camera(const PointCloud& cloud, const Pose2D& pose, const SensorMount& mount) {
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const auto& q : cloud.points) out.points.push_back({robot_to_camera(world_to_robot(q.p, pose), mount), q.prov});
    return out;
}

struct PoseQuantization {
    double position = 0.25;          // m
    double heading = deg2rad(15.0);  // rad
    friend constexpr bool operator==(const PoseQuantization&, const PoseQuantization&) = default;
};

struct PoseId {
    std::int32_t ix = 0;
    std::int32_t iy = 0;
    std::int32_t itheta = 0;

    friend constexpr auto operator<=>(const PoseId&, const PoseId&) = default;

    std::string str() const {
        return std::to_string(ix) + ":" + std::to_string(iy) + ":" + std::to_string(itheta);
    }
};

inline PoseId pose_id(const Pose2D& pose, const PoseQuantization& q = {}) {
    const double th = normalize_angle(pose.theta);
    auto it = static_cast<std::int32_t>(std::floor(th / q.heading));
    // theta == pi and theta -> -pi describe the same heading bucket
    const auto buckets = static_cast<std::int32_t>(std::lround(2.0 * kPi / q.heading));
    if (it >= buckets / 2) it -= buckets;
    return {static_cast<std::int32_t>(std::floor(pose.x / q.position)),
            static_cast<std::int32_t>(std::floor(pose.y / q.position)), it};
}

class GlobalMap {
public:
    struct Entry {
        PointCloud cloud;  // world frame
        std::uint64_t seq = 0;
    };

    explicit GlobalMap(PoseQuantization q = {}) : quant_(q) {}

    /// Stores `cloud` (already world-frame) under the pose's id, replacing any previous scan.
    void upsert_scan(const Pose2D& pose, PointCloud cloud) { upsert(pose_id(pose, quant_), std::move(cloud)); }

    void upsert(const PoseId& id, PointCloud cloud) {
        auto& e = entries_[id];
        e.cloud = std::move(cloud);
        e.seq = next_seq_++;
    }

    /// Concatenation of all stored scans, ordered by (PoseId, point index). The
    /// returned value is a snapshot; later upserts do not touch it.
    PointCloud merged_cloud() const {
        PointCloud out;
        out.points.reserve(total_points());
        for (const auto& [id, e] : entries_) out.append(e.cloud);
        return out;
    }

    template <typename F>
    void for_each_point(F&& f) const {
        for (const auto& [id, e] : entries_)
            for (const auto& q : e.cloud.points) f(q);
    }

    std::size_t total_points() const {
        std::size_t n = 0;
        for (const auto& [id, e] : entries_) n += e.cloud.size();
        return n;
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::uint64_t next_seq() const { return next_seq_; }
    const std::map<PoseId, Entry>& entries() const { return entries_; }
    const PoseQuantization& quantization() const { return quant_; }

    // Text dump: one "x y z provenance pose_id" line per point, pose_id as ix:iy:itheta.
    std::string dump() const {
        std::string out;
        for (const auto& [id, e] : entries_) {
            const std::string sid = id.str();
            for (const auto& q : e.cloud.points) {
                out += text::num(q.p.x) + ' ' + text::num(q.p.y) + ' ' + text::num(q.p.z) + ' ' +
                       (q.prov == Provenance::Semantic ? "S" : "G") + ' ' + sid + '\n';
            }
        }
        return out;
    }

    static GlobalMap load(const std::string& dump_text, PoseQuantization q = {}) {
        GlobalMap map(q);
        std::map<PoseId, PointCloud> clouds;
        std::istringstream in(dump_text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto f = text::split(line, ' ');
            const std::string where = "map dump line " + std::to_string(lineno);
            if (f.size() != 5) throw Error(ErrorKind::InvalidInput, where + ": expected 5 fields");
            TaggedPoint tp;
            tp.p = {text::parse_double(f[0], where), text::parse_double(f[1], where), text::parse_double(f[2], where)};
            if (f[3] == "S") tp.prov = Provenance::Semantic;
            else if (f[3] == "G") tp.prov = Provenance::Geometric;
            else throw Error(ErrorKind::InvalidInput, where + ": provenance must be G or S");
            const auto ids = text::split(f[4], ':');
            if (ids.size() != 3) throw Error(ErrorKind::InvalidInput, where + ": bad pose id");
            const PoseId id{static_cast<std::int32_t>(text::parse_int(ids[0], where)),
                            static_cast<std::int32_t>(text::parse_int(ids[1], where)),
                            static_cast<std::int32_t>(text::parse_int(ids[2], where))};
            clouds[id].points.push_back(tp);
        }
        for (auto& [id, c] : clouds) map.upsert(id, std::move(c));
        return map;
    }

    std::string to_csv() const {
        std::string out = "x,y,z,provenance,pose_id\n";
        for (const auto& [id, e] : entries_) {
            const std::string sid = id.str();
            for (const auto& q : e.cloud.points)
                out += text::num(q.p.x) + ',' + text::num(q.p.y) + ',' + text::num(q.p.z) + ',' +
                       (q.prov == Provenance::Semantic ? "semantic" : "geometric") + ',' + sid + '\n';
        }
        return out;
    }

private:
    PoseQuantization quant_;
    std::map<PoseId, Entry> entries_;
    std::uint64_t next_seq_ = 0;
};

}  // namespace semnav
