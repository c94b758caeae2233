#pragma once
// distance_field.hpp - exact Euclidean distance transform (Felzenszwalb & Huttenlocher)
// from every cell to the nearest occupied cell.

#include <cmath>
#include <limits>
#include <vector>

#include "semnav/occupancy_grid.hpp"

namespace semnav {

class DistanceField {
public:
    DistanceField() = default;

    explicit DistanceField(const OccupancyGrid& grid) : cfg_(grid.config()) {
        const int w = cfg_.width, h = cfg_.height;
        const double inf = std::numeric_limits<double>::infinity();
        sq_.assign(cfg_.cell_count(), inf);
        for (std::size_t i = 0; i < sq_.size(); ++i)
            if (grid.cells()[i] == kOccupied) sq_[i] = 0.0;

        const int n = std::max(w, h);
        std::vector<double> f(n), d(n), z(n + 1);
        std::vector<int> vtx(n);
        for (int u = 0; u < w; ++u) {
            for (int v = 0; v < h; ++v) f[v] = sq_[static_cast<std::size_t>(v) * w + u];
            transform_1d(f, h, d, vtx, z);
            for (int v = 0; v < h; ++v) sq_[static_cast<std::size_t>(v) * w + u] = d[v];
        }
        for (int v = 0; v < h; ++v) {
            double* row = sq_.data() + static_cast<std::size_t>(v) * w;
            for (int u = 0; u < w; ++u) f[u] = row[u];
            transform_1d(f, w, d, vtx, z);
            for (int u = 0; u < w; ++u) row[u] = d[u];
        }
    }

    const GridConfig& config() const { return cfg_; }
    /// Squared distance in cells; +inf when the grid has no occupied cell.
    double squared_cells(Cell c) const { return sq_[cfg_.index(c)]; }
    double cells(Cell c) const { return std::sqrt(squared_cells(c)); }
    double meters(Cell c) const { return cells(c) * cfg_.resolution; }

private:
    // Lower envelope of parabolas; infinite samples contribute nothing.
    static void transform_1d(const std::vector<double>& f, int n, std::vector<double>& d, std::vector<int>& v,
                             std::vector<double>& z) {
        const double inf = std::numeric_limits<double>::infinity();
        int k = -1;
        for (int q = 0; q < n; ++q) {
            if (f[q] == inf) continue;
            if (k < 0) {
                k = 0;
                v[0] = q;
                z[0] = -inf;
                z[1] = inf;
                continue;
            }
            double s = 0;
            while (true) {
                const int p = v[k];
                s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
                if (s > z[k]) break;
                --k;  // z[0] = -inf stops this before k goes negative
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = inf;
        }
        if (k < 0) {
            for (int q = 0; q < n; ++q) d[q] = inf;
            return;
        }
        int j = 0;
        for (int q = 0; q < n; ++q) {
            while (z[j + 1] < q) ++j;
            const double dq = q - v[j];
            d[q] = dq * dq + f[v[j]];
        }
    }

    GridConfig cfg_;
    std::vector<double> sq_;
};

}  // namespace semnav
