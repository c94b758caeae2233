#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace semnav {
namespace {

const GridConfig kGrid{0.1, 100, 100};

TEST(ExploredArea, Examples) {
    ExploredArea a(kGrid);
    EXPECT_EQ(a.area_m2(), 0.0);
    for (int u = 10; u < 15; ++u) a.mark({u, 20});
    EXPECT_NEAR(a.area_m2(), 5 * 0.01, 1e-12);
    for (int u = 13; u < 18; ++u) a.mark({u, 20});
    EXPECT_NEAR(a.area_m2(), 8 * 0.01, 1e-12);  // union, not sum
    a.mark({-1, 0});
    EXPECT_EQ(a.count(), 8u);
}

// The reported area always equals the size of the union of the marked cell sets.
TEST(ExploredArea, UnionProperty) {
    test::Gen gen(24);
    for (int rep = 0; rep < 50; ++rep) {
        ExploredArea a(kGrid);
        std::set<std::pair<int, int>> oracle;
        double last = 0;
        for (int frame = 0; frame < 10; ++frame) {
            for (int k = 0; k < gen.integer(0, 40); ++k) {
                const Cell c{gen.integer(0, 99), gen.integer(0, 99)};
                a.mark(c);
                oracle.insert({c.u, c.v});
            }
            EXPECT_NEAR(a.area_m2(), oracle.size() * 0.01, 1e-9);
            EXPECT_GE(a.area_m2(), last);
            last = a.area_m2();
        }
    }
}

TEST(ExploredArea, CarveCoversSegment) {
    ExploredArea a(kGrid);
    a.carve({0.05, 0.05}, {1.05, 0.05});
    EXPECT_EQ(a.count(), 11u);
}

TEST(ExploredAreaSeries, MonotoneAndErrors) {
    using Mask = std::vector<std::uint8_t>;
    EXPECT_EQ(explored_area({Mask(4, 0), Mask(4, 0)}, 0.5), (std::vector<double>{0, 0}));
    EXPECT_EQ(explored_area({Mask(4, 0), Mask{1, 1, 0, 0}}, 0.5), (std::vector<double>{0, 0.5}));
    try {
        explored_area({Mask{1, 0}, Mask{0, 0}}, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InternalError);
    }
}

TEST(Distance, Cumulative) {
    const auto d = cumulative_distance({{0, 0, 0}, {3, 4, 0}, {3, 4, 1}, {3, 5, 0}});
    EXPECT_EQ(d, (std::vector<double>{0, 5, 5, 6}));
}

TEST(MinClearance, Examples) {
    EXPECT_THROW(min_clearance(std::vector<Pose2D>{}, OccupancyGrid(kGrid)), Error);
    EXPECT_TRUE(std::isinf(min_clearance(std::vector<Pose2D>{{0, 0, 0}}, OccupancyGrid(kGrid))));

    OccupancyGrid wall(kGrid);
    for (int u = 0; u < 100; ++u) wall.set({u, 70});  // y = 2.0 .. 2.1
    std::vector<Pose2D> pass;
    for (double x = -3; x <= 3; x += 0.05) pass.push_back({x, 1.0, 0});
    EXPECT_NEAR(min_clearance(pass, wall), 1.0, kGrid.resolution);
}

TEST(Hazard, Examples) {
    World w;
    w.zones.push_back({"red_zone", {{2, -1}, {3, -1}, {3, 1}, {2, 1}}});
    w.beware_items.push_back({"cup", Shape::disc({6, 0}, 0.1), 0.05});
    const double r = 0.35;

    std::vector<Pose2D> far;
    for (double x = -5; x < 0; x += 0.1) far.push_back({x, 5, 0});
    EXPECT_EQ(hazard_violations(far, w, r), 0u);

    std::vector<Pose2D> through;
    for (double x = 0; x < 8; x += 0.1) through.push_back({x, 0, 0});
    std::size_t oracle = 0;
    for (const auto& p : through) {
        const bool zone = point_polygon_distance(p.position(), w.zones[0].polygon) < r;
        const bool cup = distance(p.position(), {6, 0}) - 0.1 < r;
        oracle += zone || cup;
    }
    EXPECT_GT(oracle, 0u);
    EXPECT_EQ(hazard_violations(through, w, r), oracle);

    // tangent pass just outside the robot radius
    const std::vector<Pose2D> tangent{{2.5, 1 + r + 1e-6, 0}, {6, 0.1 + r + 1e-6, 0}};
    EXPECT_EQ(hazard_violations(tangent, w, r), 0u);
}

}  // namespace
}  // namespace semnav
