#include "doctest.h"
#include "linesim/scenario.hpp"
#include "linesim/util.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace linesim;

namespace {

const std::string kRepo = LINESIM_REPO_DIR;

// Minimal valid scenario body; callers append overrides after it.
std::string base_text() {
  return "name demo\n"
         "duration 5\n"
         "rulebase " + kRepo + "/config/default_controller.frb\n"
         "path straight 20\n";
}

}  // namespace

TEST_CASE("a full scenario file parses into the right fields") {
  std::string text =
      "# demo scenario\n"
      "name full\n"
      "seed 42\n"
      "dt 0.02\n"
      "duration 8.5\n"
      "speed_ref 1.25\n"
      "rulebase " + kRepo + "/config/default_controller.frb\n"
      "start 1 -2 90\n"
      "path straight 4\n"
      "path arc 2.5 -45  # bend right\n"
      "obstacle 3 4 0.5\n"
      "obstacle 6 0 0.4 2 7\n"
      "vehicle wheel_base 0.6\n"
      "vehicle max_wheel_speed 1.8\n"
      "vision noise 0.75\n"
      "vision dropout 0.1\n"
      "vision quantize off\n"
      "vision rate 12\n"
      "vision camera 0 -80 0 320 -100 0 0 500\n"
      "vision zg 0.0\n"
      "sonar noise 0.02\n"
      "sonar cone 10\n"
      "sonar bearings 70 40 10 -10 -40 -70\n"
      "sonar range 0.2 8\n"
      "control rate 20\n"
      "metrics obstacle_threshold 3.5\n";
  auto sc = parse_scenario_text(text, "full.scn", "");
  CHECK(sc.name == "full");
  CHECK(sc.seed == 42);
  CHECK(sc.dt == doctest::Approx(0.02));
  CHECK(sc.duration == doctest::Approx(8.5));
  CHECK(sc.speed_ref == doctest::Approx(1.25));
  CHECK(sc.start_pos.x == doctest::Approx(1.0));
  CHECK(sc.start_pos.y == doctest::Approx(-2.0));
  CHECK(sc.start_heading == doctest::Approx(kPi / 2));
  REQUIRE(sc.segments.size() == 2);
  CHECK(sc.segments[1].sweep == doctest::Approx(-kPi / 4));
  REQUIRE(sc.obstacles.size() == 2);
  CHECK(sc.obstacles[1].t_on == doctest::Approx(2.0));
  CHECK(sc.obstacles[1].t_off == doctest::Approx(7.0));
  CHECK(sc.vehicle.wheel_base == doctest::Approx(0.6));
  CHECK(sc.vision.pixel_noise_sigma == doctest::Approx(0.75));
  CHECK_FALSE(sc.vision.quantize);
  CHECK(sc.vision.rate == doctest::Approx(12.0));
  CHECK(sc.sonar.cone_half_angle == doctest::Approx(deg2rad(10.0)));
  CHECK(sc.sonar.bearings[0] == doctest::Approx(deg2rad(70.0)));
  CHECK(sc.sonar.bearings[5] == doctest::Approx(deg2rad(-70.0)));
  CHECK(sc.sonar.min_range == doctest::Approx(0.2));
  CHECK(sc.control_rate == doctest::Approx(20.0));
  CHECK(sc.metrics.obstacle_threshold == doctest::Approx(3.5));
  CHECK(sc.path.total_length() == doctest::Approx(4 + 2.5 * kPi / 4));
  CHECK(sc.controller.inputs().size() == 6);
}

TEST_CASE("defaults cover everything a minimal file omits") {
  auto sc = parse_scenario_text(base_text(), "min.scn", "");
  CHECK(sc.seed == 1);
  CHECK(sc.dt == doctest::Approx(0.01));
  CHECK(sc.speed_ref == doctest::Approx(1.0));
  CHECK(sc.vehicle.wheel_base == doctest::Approx(0.5));
  CHECK(sc.vehicle.body_radius == doctest::Approx(0.3));
  CHECK(sc.vehicle.max_wheel_speed == doctest::Approx(2.0));
  CHECK(sc.vision.rate == doctest::Approx(10.0));
  CHECK(sc.vision.quantize);
  CHECK(sc.vision.window_near_row == 400);
  CHECK(sc.vision.window_far_row == 100);
  CHECK(sc.sonar.rate == doctest::Approx(16.0));
  CHECK(sc.sonar.max_range == doctest::Approx(10.0));
  CHECK(sc.control_rate == doctest::Approx(10.0));
  CHECK(sc.metrics.obstacle_threshold == doctest::Approx(4.0));
  // Default camera: row 400 -> 1 m ahead, row 100 -> 4 m.
  auto cam = sc.vision.camera;
  CHECK(cam.a21 * 1.0 + cam.a24 == doctest::Approx(400.0));
  CHECK(cam.a21 * 4.0 + cam.a24 == doctest::Approx(100.0));
}

TEST_CASE("parse errors carry the offending line number") {
  auto expect_line = [](const std::string& text, int line) {
    try {
      parse_scenario_text(text, "bad.scn", "");
      FAIL_CHECK("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    } catch (const ScenarioInvalid&) {
      FAIL_CHECK("expected ParseError, got ScenarioInvalid");
    }
  };
  expect_line("name x\nbogus 1 2\n", 2);
  expect_line("dt not_a_number\n", 1);
  expect_line("name x\nseed -4\n", 2);
  expect_line("path arc 1\n", 1);
  expect_line("obstacle 1 2 -0.5\n", 1);
  expect_line("vision quantize maybe\n", 1);
  expect_line("duration 5\nduration 6 7\n", 2);
}

TEST_CASE("cross-field validation rejects bad scenarios") {
  auto with = [&](const std::string& extra) {
    return parse_scenario_text(base_text() + extra, "t.scn", "");
  };
  CHECK_THROWS_AS(with("dt 0.2\n"), ScenarioInvalid);
  CHECK_THROWS_AS(with("dt 0\n"), ScenarioInvalid);
  CHECK_THROWS_AS(with("duration 0\n"), ScenarioInvalid);
  CHECK_THROWS_AS(with("duration -1\n"), ScenarioInvalid);
  CHECK_THROWS_AS(with("vision dropout 1.0\n"), ScenarioInvalid);
  CHECK_THROWS_AS(with("vision rows 100 400\n"), ScenarioInvalid);
  CHECK_THROWS_AS(with("sonar range 5 2\n"), ScenarioInvalid);
  CHECK_THROWS_AS(with("control rate 0\n"), ScenarioInvalid);
  CHECK_THROWS_AS(with("vehicle wheel_base -1\n"), ScenarioInvalid);
  CHECK_THROWS_AS(with("vehicle motor_zeta 1.5\n"), ScenarioInvalid);
  // Missing duration entirely.
  CHECK_THROWS_AS(
      parse_scenario_text("name x\nrulebase " + kRepo +
                              "/config/default_controller.frb\npath straight 5\n",
                          "t.scn", ""),
      ScenarioInvalid);
  // No path segments.
  CHECK_THROWS_AS(
      parse_scenario_text("name x\nduration 5\nrulebase " + kRepo +
                              "/config/default_controller.frb\n",
                          "t.scn", ""),
      ScenarioInvalid);
  // Missing rulebase.
  CHECK_THROWS_AS(parse_scenario_text("name x\nduration 5\npath straight 5\n",
                                      "t.scn", ""),
                  ScenarioInvalid);
}

TEST_CASE("polyline path segments must continue the chain") {
  std::string text = base_text() + "path polyline 25 5 30 5\n";  // chain ends at (20, 0)
  CHECK_THROWS_AS(parse_scenario_text(text, "t.scn", ""), ScenarioInvalid);
  std::string good = base_text() + "path polyline 20 0 20 5 25 5\n";
  auto sc = parse_scenario_text(good, "t.scn", "");
  CHECK(sc.path.total_length() == doctest::Approx(20 + 5 + 5));
}

TEST_CASE("relative rulebase paths resolve against the scenario directory") {
  auto dir = make_temp_dir("scn");
  std::filesystem::create_directories(dir / "cfg");
  std::filesystem::copy_file(kRepo + "/config/default_controller.frb",
                             dir / "cfg" / "ctl.frb");
  auto file = dir / "s.scn";
  write_text(file,
             "name rel\nduration 3\nrulebase cfg/ctl.frb\npath straight 10\n");
  auto sc = load_scenario(file.string());
  CHECK(sc.controller.inputs().size() == 6);
  std::filesystem::remove_all(dir);
}

TEST_CASE("the bundled scenario files load") {
  for (const char* name :
       {"case1_straight.scn", "case2_curved.scn", "case3_angular_noise.scn",
        "case4_extreme.scn", "step_response.scn"}) {
    auto sc = load_scenario(kRepo + "/scenarios/" + name);
    CHECK(sc.path.total_length() > 0.0);
    CHECK(sc.controller.inputs().size() == 6);
    CHECK(sc.controller.outputs().size() == 3);
    CHECK(sc.duration > 0.0);
  }
}
