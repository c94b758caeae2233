#pragma once
// occupancy_grid.hpp - center-origin byte raster built from world-frame clouds.
//
// Cell (u, v) is column u, row v; cells are stored row-major as M(v, u).
// 255 = occupied, 0 = free or unknown.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "semnav/error.hpp"
#include "semnav/geometry.hpp"
#include "semnav/global_map.hpp"
#include "semnav/image_io.hpp"
#include "semnav/perception.hpp"

namespace semnav {

inline constexpr std::uint8_t kOccupied = 255;
inline constexpr std::uint8_t kFree = 0;

struct Cell {
    int u = 0;
    int v = 0;
    friend constexpr bool operator==(Cell, Cell) = default;
    friend constexpr auto operator<=>(const Cell& a, const Cell& b) {
        if (auto c = a.v <=> b.v; c != 0) return c;
        return a.u <=> b.u;
    }
};

struct GridConfig {
    double resolution = 0.05;  // m per cell
    int width = 1200;
    int height = 1200;

    void validate() const {
        if (!(resolution > 0)) throw Error(ErrorKind::InvalidInput, "grid resolution must be positive");
        if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0)
            throw Error(ErrorKind::InvalidInput, "grid width and height must be positive and even");
    }
    bool contains(Cell c) const { return c.u >= 0 && c.v >= 0 && c.u < width && c.v < height; }
    std::size_t index(Cell c) const { return static_cast<std::size_t>(c.v) * width + c.u; }
    std::size_t cell_count() const { return static_cast<std::size_t>(width) * height; }

    friend constexpr bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct InflationParams {
    double vehicle_width = 0.7;  // m
    double safety_margin = 0.1;  // m
    friend constexpr bool operator==(const InflationParams&, const InflationParams&) = default;
};

/// Floor-based projection; may land outside the grid.
inline Cell world_to_pixel_unchecked(double x, double y, const GridConfig& cfg) {
    return {static_cast<int>(std::floor(x / cfg.resolution)) + cfg.width / 2,
            static_cast<int>(std::floor(y / cfg.resolution)) + cfg.height / 2};
}

inline Cell world_to_pixel(double x, double y, const GridConfig& cfg) {
    const Cell c = world_to_pixel_unchecked(x, y, cfg);
    if (!cfg.contains(c))
        throw Error(ErrorKind::OutOfBounds, "point (" + text::num(x) + ", " + text::num(y) + ") maps to cell (" +
                                                std::to_string(c.u) + ", " + std::to_string(c.v) + ")");
    return c;
}

/// World coordinates of the cell center.
inline Vec2 pixel_to_world(Cell c, const GridConfig& cfg) {
    return {(c.u - cfg.width / 2 + 0.5) * cfg.resolution, (c.v - cfg.height / 2 + 0.5) * cfg.resolution};
}

class OccupancyGrid {
public:
    OccupancyGrid() = default;
    explicit OccupancyGrid(const GridConfig& cfg, bool inflated = false)
        : cfg_(cfg), cells_(cfg.cell_count(), kFree), inflated_(inflated) {
        cfg.validate();
    }

    const GridConfig& config() const { return cfg_; }
    int width() const { return cfg_.width; }
    int height() const { return cfg_.height; }
    bool inflated() const { return inflated_; }

    bool contains(Cell c) const { return cfg_.contains(c); }
    std::uint8_t at(Cell c) const { return cells_[cfg_.index(c)]; }
    std::uint8_t& at(Cell c) { return cells_[cfg_.index(c)]; }
    bool occupied(Cell c) const { return at(c) == kOccupied; }
    /// Out-of-bounds cells count as occupied.
    bool blocked(Cell c) const { return !contains(c) || occupied(c); }
    void set(Cell c, std::uint8_t value = kOccupied) { at(c) = value; }

    std::size_t occupied_count() const {
        std::size_t n = 0;
        for (auto b : cells_) n += b == kOccupied;
        return n;
    }

    const std::vector<std::uint8_t>& cells() const { return cells_; }
    std::vector<std::uint8_t>& cells() { return cells_; }

    Image<std::uint8_t> to_image() const {
        Image<std::uint8_t> img(cfg_.width, cfg_.height);
        img.data = cells_;
        return img;
    }
    std::string to_pgm() const { return io::encode_pgm(to_image()); }

    /// Any nonzero sample is occupied.
    static OccupancyGrid from_pgm(const Image<std::uint16_t>& img, double resolution) {
        OccupancyGrid g(GridConfig{resolution, img.width, img.height});
        for (std::size_t i = 0; i < img.data.size(); ++i) g.cells_[i] = img.data[i] ? kOccupied : kFree;
        return g;
    }

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

private:
    GridConfig cfg_;
    std::vector<std::uint8_t> cells_;
    bool inflated_ = false;
};

/// Marks the cell under every point accepted by `keep`; out-of-bounds points are skipped.
template <typename Points, typename Pred>
OccupancyGrid rasterize(const Points& points, const GridConfig& cfg, Pred keep) {
    OccupancyGrid g(cfg);
    for (const TaggedPoint& q : points) {
        if (!keep(q)) continue;
        const Cell c = world_to_pixel_unchecked(q.p.x, q.p.y, cfg);
        if (cfg.contains(c)) g.set(c);
    }
    return g;
}

inline OccupancyGrid rasterize(const PointCloud& cloud, const GridConfig& cfg) {
    return rasterize(cloud.points, cfg, [](const TaggedPoint&) { return true; });
}

/// Rasterizes straight from the map's entries without materializing the merged cloud.
template <typename Pred>
OccupancyGrid rasterize(const GlobalMap& map, const GridConfig& cfg, Pred keep) {
    OccupancyGrid g(cfg);
    map.for_each_point([&](const TaggedPoint& q) {
        if (!keep(q)) return;
        const Cell c = world_to_pixel_unchecked(q.p.x, q.p.y, cfg);
        if (cfg.contains(c)) g.set(c);
    });
    return g;
}

inline OccupancyGrid rasterize(const GlobalMap& map, const GridConfig& cfg) {
    return rasterize(map, cfg, [](const TaggedPoint&) { return true; });
}

/// r_i = ceil((w_v / 2 + s_m) / r_g), in cells.
inline int inflation_radius(const InflationParams& p, double resolution) {
    if (!(p.vehicle_width > 0) || !(p.safety_margin >= 0))
        throw Error(ErrorKind::InvalidInput, "need vehicle_width > 0 and safety_margin >= 0");
    // guard against 0.45 / 0.05 = 9.000000000000002 style round-up
    const double r = (p.vehicle_width / 2.0 + p.safety_margin) / resolution;
    const double nearest = std::round(r);
    if (std::abs(r - nearest) < 1e-9) return static_cast<int>(nearest);
    return static_cast<int>(std::ceil(r));
}

/// Dilation with the lattice disc {(du, dv) : du^2 + dv^2 <= r^2}.
inline OccupancyGrid inflate(const OccupancyGrid& grid, int radius) {
    if (grid.inflated()) throw Error(ErrorKind::InvalidInput, "grid is already inflated");
    if (radius < 0) throw Error(ErrorKind::InvalidInput, "negative inflation radius");
    OccupancyGrid out(grid.config(), true);
    const int w = grid.width(), h = grid.height();
    std::vector<int> half(static_cast<std::size_t>(radius) + 1);
    for (int dv = 0; dv <= radius; ++dv)
        half[dv] = static_cast<int>(std::floor(std::sqrt(double(radius) * radius - double(dv) * dv) + 1e-9));

    const auto& in = grid.cells();
    auto& dst = out.cells();
    for (int v = 0; v < h; ++v) {
        const std::uint8_t* row = in.data() + static_cast<std::size_t>(v) * w;
        for (int u = 0; u < w; ++u) {
            if (row[u] != kOccupied) continue;
            // Dilate a whole horizontal run [a, b] at once: on each row its disc spans merge.
            const int a = u;
            while (u + 1 < w && row[u + 1] == kOccupied) ++u;
            const int b = u;
            for (int dv = -radius; dv <= radius; ++dv) {
                const int vv = v + dv;
                if (vv < 0 || vv >= h) continue;
                const int hw = half[std::abs(dv)];
                const int u0 = std::max(0, a - hw), u1 = std::min(w - 1, b + hw);
                std::memset(dst.data() + static_cast<std::size_t>(vv) * w + u0, kOccupied,
                            static_cast<std::size_t>(u1 - u0 + 1));
            }
        }
    }
    return out;
}

inline OccupancyGrid inflate(const OccupancyGrid& grid, const InflationParams& p) {
    return inflate(grid, inflation_radius(p, grid.config().resolution));
}

}  // namespace semnav
