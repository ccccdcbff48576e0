#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <string>

#include "carplan/scene.hpp"

using namespace carplan;

namespace {
std::string scene_dir() {
    const char* env = std::getenv("CARPLAN_SCENES");
    return env ? env : "scenes";
}

Scene parse_text(const std::string& text, std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    return parse_scene(in, "inline", warnings);
}
}  // namespace

TEST_CASE("bundled paper_free scene carries the reference parameters") {
    const Scene s = load_scene(scene_dir() + "/paper_free.scene");
    CHECK(s.xmin == -1.0);
    CHECK(s.xmax == 1.0);
    CHECK(s.ymin == -1.0);
    CHECK(s.ymax == 1.0);
    CHECK(s.car.half_width == 0.04);
    CHECK(s.car.axle_offset == 0.07);
    CHECK(s.car.max_yaw_rate == 4.0);
    CHECK(s.goal.x == 0.5);
    CHECK(s.goal.y == 0.5);
    CHECK(s.goal.theta == 0.0);
    CHECK(s.obstacles.empty());
    REQUIRE(s.find_start("lane_behind") != nullptr);
    CHECK(s.find_start("lane_behind")->x == -0.5);
}

TEST_CASE("all bundled scenes load and validate") {
    for (const char* name :
         {"paper_free.scene", "parallel_park.scene", "paper_threepaths_obs.scene", "narrow_spot.scene"}) {
        INFO(name);
        std::vector<std::string> warnings;
        const Scene s = load_scene(scene_dir() + "/" + name, &warnings);
        CHECK(warnings.empty());
        CHECK(s.car.half_width > 0);
    }
}

TEST_CASE("goal inside an obstacle is rejected at load") {
    const std::string text =
        "domain -1 1 -1 1\n"
        "car 0.04 0.07 4\n"
        "goal 0 0 0\n"
        "rect -0.2 0.2 -0.2 0.2\n";
    CHECK_THROWS_WITH(parse_text(text), Catch::Matchers::ContainsSubstring("inadmissible"));
}

TEST_CASE("clockwise polygons are reversed with a warning") {
    const std::string text =
        "domain -1 1 -1 1\n"
        "car 0.04 0.07 4\n"
        "goal 0.5 0.5 0\n"
        "obstacle -0.5 -0.5  -0.5 -0.3  -0.3 -0.3  -0.3 -0.5\n";  // clockwise
    std::vector<std::string> warnings;
    const Scene s = parse_text(text, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("counterclockwise") != std::string::npos);
    REQUIRE(s.obstacles.polygons.size() == 1);
    CHECK(polygon_area(s.obstacles.polygons[0]) > 0);
    CHECK(is_convex_ccw(s.obstacles.polygons[0]));
}

TEST_CASE("malformed input reports the offending line") {
    const std::string text =
        "domain -1 1 -1 1\n"
        "car 0.04 0.07 4\n"
        "goal 0.5 0.5 zero\n";
    try {
        parse_text(text);
        FAIL("expected SceneError");
    } catch (const SceneError& e) {
        CHECK(std::string(e.what()).find("inline:3") != std::string::npos);
        CHECK(std::string(e.what()).find("zero") != std::string::npos);
    }
}

TEST_CASE("scene parse rejects bad structure") {
    CHECK_THROWS_AS(parse_text("domain -1 1 -1 1\ncar 0.04 0.07 4\n"), SceneError);  // no goal
    CHECK_THROWS_AS(parse_text("car 0.04 0.07 4\ngoal 0 0 0\n"), SceneError);        // no domain
    CHECK_THROWS_WITH(parse_text("domain -1 1 -1 1\ncar 0.04 0.07 4\ngoal 0 0 0\nspeed 3\n"),
                      Catch::Matchers::ContainsSubstring("unknown key"));
    CHECK_THROWS_WITH(parse_text("domain -1 1 -1 1\ncar 0.04 0.07 4\ngoal 0 0 0\n"
                                 "obstacle 0 0 1 0 1 1 0.5 0.5 0 1\n"),
                      Catch::Matchers::ContainsSubstring("not convex"));
    CHECK_THROWS_WITH(parse_text("domain -1 1 -1 1\ncar 0.04 0.07 4\ngoal 0 0 0\n"
                                 "obstacle 0.9 0.9 0.95 0.9\n"),
                      Catch::Matchers::ContainsSubstring("vertex pairs"));
    CHECK_THROWS_WITH(
        parse_text("domain -1 1 -1 1\ncar 0.04 0.07 4\ngoal 0 0 0\nstart far 5 5 0\n"),
        Catch::Matchers::ContainsSubstring("outside the domain"));
}

TEST_CASE("rect sugar expands to a CCW rectangle") {
    const Scene s = parse_text(
        "domain -1 1 -1 1\ncar 0.04 0.07 4\ngoal 0.5 0.5 0\nrect -0.9 -0.5 -0.9 -0.5\n");
    REQUIRE(s.obstacles.polygons.size() == 1);
    CHECK(polygon_area(s.obstacles.polygons[0]) == Catch::Approx(0.16));
    CHECK(is_convex_ccw(s.obstacles.polygons[0]));
}

TEST_CASE("comments and trailing comments are ignored") {
    const Scene s = parse_text(
        "# full line\n"
        "domain -1 1 -1 1  # bounds\n"
        "car 0.04 0.07 4\n"
        "\n"
        "goal 0.5 0.5 0\n");
    CHECK(s.goal.x == 0.5);
}

TEST_CASE("missing file raises a scene error with the path") {
    CHECK_THROWS_AS(load_scene("/nonexistent/nowhere.scene"), SceneError);
}
