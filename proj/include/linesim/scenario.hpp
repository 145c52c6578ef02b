#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "linesim/fuzzy.hpp"
#include "linesim/path.hpp"
#include "linesim/sensors.hpp"
#include "linesim/vehicle.hpp"

namespace linesim {

struct MetricsConfig {
    // A sonar zone dropping below this range marks the disturbance onset.
    double obstacle_threshold = 4.0;  // m
};

struct Scenario {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    double dt = 0.01;        // s, (0, 0.05]
    double duration = 10.0;  // s; files must give > 0, in-code 0 is allowed
    double speed_ref = 1.0;  // m/s, the controller's reference-speed input

    Point2 start_pos{0.0, 0.0};
    double start_heading = 0.0;  // rad

    std::vector<SegmentSpec> segments;
    Path path;  // built from segments at load time

    std::vector<Obstacle> obstacles;
    VehicleParams vehicle;
    VisionConfig vision;
    SonarConfig sonar;
    double control_rate = 10.0;  // Hz
    MetricsConfig metrics;

    std::string rulebase_path;  // resolved absolute/openable path
    FuzzyController controller;
};

// Built-in default camera used when a scenario file gives no `vision camera`:
// looks forward over the ground, row 400 maps to xg = 1 m, row 100 to 4 m.
CameraModel default_scenario_camera();

// Parse + load controller + build path + validate. Throws ParseError or
// ScenarioInvalid. rulebase paths are resolved relative to the scenario file.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& name,
                             const std::string& base_dir);

}  // namespace linesim
