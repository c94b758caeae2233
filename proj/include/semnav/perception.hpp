#pragma once
// perception.hpp - depth/mask images, pinhole back-projection, height-band filtering
// and the segmenter boundary.
//
// Pixel convention: i is the row (v), j is the column (u). Camera frame is
// x right, y down, z forward; depth images store z (not range) in meters, 0 = invalid.

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "semnav/error.hpp"
#include "semnav/geometry.hpp"

namespace semnav {

template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    T& at(int i, int j) { return data[static_cast<std::size_t>(i) * width + j]; }
    const T& at(int i, int j) const { return data[static_cast<std::size_t>(i) * width + j]; }
    bool same_shape(int w, int h) const { return width == w && height == h; }

    friend bool operator==(const Image&, const Image&) = default;
};

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend constexpr bool operator==(Rgb, Rgb) = default;
};

struct CameraIntrinsics {
    double fx = 0, fy = 0;
    double cx = 0, cy = 0;
    int width = 0, height = 0;
    double depth_min = 0.4, depth_max = 8.0;

    void validate() const {
        if (!(fx > 0) || !(fy > 0)) throw Error(ErrorKind::InvalidInput, "focal lengths must be positive");
        if (width <= 0 || height <= 0) throw Error(ErrorKind::InvalidInput, "image size must be positive");
        if (!(cx >= 0 && cx < width) || !(cy >= 0 && cy < height))
            throw Error(ErrorKind::InvalidInput, "optical center outside image");
        if (!(depth_min > 0 && depth_min < depth_max))
            throw Error(ErrorKind::InvalidInput, "need 0 < depth_min < depth_max");
    }

    bool valid_depth(double z) const { return std::isfinite(z) && z >= depth_min && z <= depth_max; }

    // Symmetric pinhole model matching the given fields of view; the optical center
    // sits between the two middle pixels.
    static CameraIntrinsics from_fov(int w, int h, double h_fov, double v_fov, double dmin, double dmax) {
        CameraIntrinsics k;
        k.width = w;
        k.height = h;
        k.fx = (w / 2.0) / std::tan(h_fov / 2.0);
        k.fy = (h / 2.0) / std::tan(v_fov / 2.0);
        k.cx = (w - 1) / 2.0;
        k.cy = (h - 1) / 2.0;
        k.depth_min = dmin;
        k.depth_max = dmax;
        return k;
    }

    friend bool operator==(const CameraIntrinsics&, const CameraIntrinsics&) = default;
};

struct DepthFrame {
    Image<double> data;
    CameraIntrinsics intrinsics;

    explicit DepthFrame(const CameraIntrinsics& k) : data(k.width, k.height, 0.0), intrinsics(k) {}
    DepthFrame(Image<double> d, const CameraIntrinsics& k) : data(std::move(d)), intrinsics(k) {
        if (!data.same_shape(k.width, k.height))
            throw Error(ErrorKind::InvalidInput, "depth image size does not match intrinsics");
    }

    int width() const { return data.width; }
    int height() const { return data.height; }
    double at(int i, int j) const { return data.at(i, j); }
    double& at(int i, int j) { return data.at(i, j); }
};

struct SemanticMask {
    Image<std::uint8_t> data;  // values 0 or 1
    int class_id = 1;

    SemanticMask() = default;
    SemanticMask(int w, int h, int cls = 1) : data(w, h, 0), class_id(cls) {}

    int width() const { return data.width; }
    int height() const { return data.height; }
    std::uint8_t at(int i, int j) const { return data.at(i, j); }
    std::uint8_t& at(int i, int j) { return data.at(i, j); }
};

using ColorFrame = Image<Rgb>;

enum class Provenance : std::uint8_t { Geometric = 0, Semantic = 1 };

struct TaggedPoint {
    Vec3 p;
    Provenance prov = Provenance::Geometric;
    friend constexpr bool operator==(const TaggedPoint&, const TaggedPoint&) = default;
};

struct PointCloud {
    std::vector<TaggedPoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    void append(const PointCloud& other) { points.insert(points.end(), other.points.begin(), other.points.end()); }
    std::size_t count(Provenance p) const {
        std::size_t n = 0;
        for (const auto& q : points) n += q.prov == p;
        return n;
    }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

struct FilterConfig {
    double ground_max_z = 0.10;
    double ceiling_min_z = 1.00;
    double obstacle_min_height = 0.10;

    void validate() const {
        if (!(ground_max_z >= 0 && ground_max_z < ceiling_min_z))
            throw Error(ErrorKind::InvalidInput, "need 0 <= ground_max_z < ceiling_min_z");
    }
    friend bool operator==(const FilterConfig&, const FilterConfig&) = default;
};

/// Element-wise product of depth and a binary mask (zero where the mask is zero).
inline DepthFrame apply_mask(const DepthFrame& depth, const SemanticMask& mask) {
    if (!mask.data.same_shape(depth.width(), depth.height()))
        throw Error(ErrorKind::InvalidInput, "mask and depth dimensions differ");
    DepthFrame out = depth;
    for (std::size_t k = 0; k < out.data.data.size(); ++k)
        if (mask.data.data[k] == 0) out.data.data[k] = 0.0;
    return out;
}

/// Lifts each valid pixel to a camera-frame point. Zero or out-of-range depth emits nothing.
inline PointCloud back_project(const DepthFrame& depth, Provenance prov) {
    const CameraIntrinsics& k = depth.intrinsics;
    k.validate();
    PointCloud cloud;
    for (int i = 0; i < depth.height(); ++i) {
        for (int j = 0; j < depth.width(); ++j) {
            const double z = depth.at(i, j);
            if (!k.valid_depth(z)) continue;
            cloud.points.push_back({{(j - k.cx) * z / k.fx, (i - k.cy) * z / k.fy, z}, prov});
        }
    }
    return cloud;
}

struct PixelDepth {
    double i = 0;  // row
    double j = 0;  // column
    double z = 0;
};

/// Forward pinhole map: camera-frame point -> (row, column, depth).
inline PixelDepth forward_project(const Vec3& p, const CameraIntrinsics& k) {
    return {k.fy * p.y / p.z + k.cy, k.fx * p.x / p.z + k.cx, p.z};
}

/// Keeps geometric points inside the height band; semantic points always pass.
/// Input must be in a z-up frame with z = 0 on the ground.
inline PointCloud filter_geometric(const PointCloud& cloud, const FilterConfig& cfg) {
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const auto& q : cloud.points) {
        if (q.prov == Provenance::Semantic || (q.p.z >= cfg.ground_max_z && q.p.z <= cfg.ceiling_min_z))
            out.points.push_back(q);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Segmenters

class Segmenter {
public:
    virtual ~Segmenter() = default;
    virtual SemanticMask segment(const ColorFrame& rgb, const DepthFrame& depth) const = 0;
};

/// Marks pixels whose RGB value lies within a Euclidean distance of any beware color.
class ColorThresholdSegmenter final : public Segmenter {
public:
    static constexpr double kMaxRgbDistance = 441.0;  // ~ sqrt(3) * 255

    explicit ColorThresholdSegmenter(std::vector<Rgb> beware_colors, double threshold = 60.0 / 441.0)
        : colors_(std::move(beware_colors)), threshold_(threshold) {
        if (!(threshold_ >= 0.0 && threshold_ <= 1.0))
            throw Error(ErrorKind::InvalidInput, "normalized color threshold must lie in [0, 1]");
    }

    SemanticMask segment(const ColorFrame& rgb, const DepthFrame& depth) const override {
        if (!rgb.same_shape(depth.width(), depth.height()))
            throw Error(ErrorKind::InvalidInput, "color and depth frames are not aligned");
        SemanticMask mask(rgb.width, rgb.height);
        const double limit = threshold_ * kMaxRgbDistance;
        const double limit2 = limit * limit;
        for (std::size_t k = 0; k < rgb.data.size(); ++k) {
            const Rgb px = rgb.data[k];
            for (const Rgb c : colors_) {
                const double dr = double(px.r) - c.r, dg = double(px.g) - c.g, db = double(px.b) - c.b;
                if (dr * dr + dg * dg + db * db <= limit2) {
                    mask.data.data[k] = 1;
                    break;
                }
            }
        }
        return mask;
    }

    double threshold() const { return threshold_; }
    const std::vector<Rgb>& colors() const { return colors_; }

private:
    std::vector<Rgb> colors_;
    double threshold_;
};

}  // namespace semnav
