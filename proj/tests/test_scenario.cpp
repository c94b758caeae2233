#include <gtest/gtest.h>

#include "support.hpp"

namespace semnav {
namespace {

const char* kMinimal = R"({
  "bounds": {"min": [-5, -5], "max": [5, 5]},
  "robot": {"start": [0, 0]},
  "goals": [[1, 1]]
})";

std::string field_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "<none>";
}

TEST(Scenario, MinimalUsesDefaults) {
    const Scenario s = parse_scenario(kMinimal);
    Scenario d;
    EXPECT_EQ(s.goals, (std::vector<Vec2>{{1, 1}}));
    EXPECT_EQ(s.sensor.width, d.sensor.width);
    EXPECT_EQ(s.grid, d.grid);
    EXPECT_EQ(s.local_planner, d.local_planner);
    EXPECT_EQ(s.inflation_radius(), 9);
    EXPECT_EQ(s.planning_radius(), 11);
    EXPECT_TRUE(s.beware_list.empty());
}

TEST(Scenario, GoalOutsideBounds) {
    std::string t = kMinimal;
    t.replace(t.find("[[1, 1]]"), 8, "[[9, 1]]");
    EXPECT_EQ(field_of(t), "goals[0]");
}

TEST(Scenario, ValidationFieldPaths) {
    auto with = [](const std::string& extra) {
        std::string t = kMinimal;
        t.insert(t.rfind('}'), "," + extra);
        return t;
    };
    EXPECT_EQ(field_of(with(R"("bogus": 1)")), "bogus");
    EXPECT_EQ(field_of(with(R"("sensor": {"width": "wide"})")), "sensor.width");
    EXPECT_EQ(field_of(with(R"("grid": {"width": 101})")), "grid");
    EXPECT_EQ(field_of(with(R"("beware_list": ["ghost"])")), "beware_list[0]");
    EXPECT_EQ(field_of(with(R"("world": {"obstacles": [{"polygon": [[0,0],[1,0],[0.5,0.2],[1,1],[0,1]]}]})")),
              "world.obstacles[0].polygon");
    EXPECT_EQ(field_of(with(R"("world": {"beware_items": [{"class": "cup", "disc": {"center": [1, 1], "radius": 0.1}, "height": 0.5}]})")),
              "world.beware_items[0].height");
    EXPECT_EQ(field_of(with(R"("planner": {"path_margin": -1})")), "planner.path_margin");
}

TEST(Scenario, SyntaxErrorPosition) {
    try {
        parse_scenario("{\n  \"bounds\": {\n    \"min\": [1,, 2]\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Scenario, CanonicalRoundTrip) {
    for (const char* name : {"indoor", "dynamic", "sealed", "forest"}) {
        const Scenario s = test::load_shipped(name);
        const std::string text = serialize_scenario(s);
        const Scenario back = parse_scenario(text);
        EXPECT_EQ(serialize_scenario(back), text) << name;
        EXPECT_EQ(back.world, s.world) << name;
        EXPECT_EQ(back.goals, s.goals) << name;
    }
}

TEST(Scenario, ShippedScenariosHaveIntendedShape) {
    const Scenario indoor = test::load_shipped("indoor");
    EXPECT_EQ(indoor.goals.size(), 3u);
    EXPECT_EQ(indoor.beware_list.size(), 3u);

    const Scenario forest = test::load_shipped("forest");
    EXPECT_GE(forest.world.bounds.max.x - forest.world.bounds.min.x, 150.0);
    std::size_t trees = 0, mines = 0;
    for (const auto& o : forest.world.obstacles) trees += o.shape.kind == Shape::Kind::Disc;
    for (const auto& b : forest.world.beware_items) mines += b.cls == "landmine";
    EXPECT_GE(trees, 200u);
    EXPECT_EQ(mines, 5u);
    EXPECT_EQ(forest.world.zones.size(), 1u);

    EXPECT_EQ(test::load_shipped("dynamic").world.agents.size(), 1u);
}

TEST(Scenario, Overrides) {
    const Scenario s = parse_scenario(kMinimal);
    const Scenario o = apply_overrides(s, {"local_planner.v_max=0.5", "goals[0]=[2,2]", "name=renamed"});
    EXPECT_EQ(o.local_planner.v_max, 0.5);
    EXPECT_EQ(o.goals[0], (Vec2{2, 2}));
    EXPECT_EQ(o.name, "renamed");
    EXPECT_THROW(apply_overrides(s, {"local_planner.vmax=0.5"}), ValidationError);
    EXPECT_THROW(apply_overrides(s, {"goals[3]=[1,1]"}), ValidationError);
    EXPECT_THROW(apply_overrides(s, {"novalue"}), ValidationError);
    EXPECT_THROW(apply_overrides(s, {"goals[0]=[90,0]"}), ValidationError);
}

TEST(Scenario, ClassColors) {
    const Scenario s = test::load_shipped("indoor");
    for (const auto& c : s.beware_list) EXPECT_NO_THROW(s.color_of(c));
}

}  // namespace
}  // namespace semnav
