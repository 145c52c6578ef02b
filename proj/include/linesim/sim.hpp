#pragma once
#include <string>
#include <vector>

#include "linesim/scenario.hpp"

namespace linesim {

inline constexpr unsigned kEventLineCross = 1u;
inline constexpr unsigned kEventCollision = 2u;
inline constexpr unsigned kEventTrackLost = 4u;

struct TrajectoryRow {
    double t = 0.0;
    double x = 0.0, y = 0.0, heading = 0.0;
    double left_speed = 0.0, right_speed = 0.0;
    double cmd_left = 0.0, cmd_right = 0.0;
    double offset = 0.0, angle = 0.0;  // held vision-derived values (controller view)
    int vision_valid = 0;              // validity of the most recent vision sample
    double zone_left = 0.0, zone_center = 0.0, zone_right = 0.0;
    unsigned events = 0;
};

enum class StopReason { Duration, PathComplete, Collision };

struct RunResult {
    std::vector<TrajectoryRow> rows;
    StopReason reason = StopReason::Duration;
    long vision_samples = 0;
    long sonar_samples = 0;
    long control_updates = 0;
    int line_cross_count = 0;
    int collision_count = 0;
    int track_lost_count = 0;
};

// Per-tick event detection with internal latches. line_cross fires when the
// signed cross-track leaves the +/- half-width band on one side and later on
// the other; collision when an active obstacle disk overlaps the body circle;
// track_lost on the tick the invalid-vision streak first reaches 10.
class EventDetector {
public:
    explicit EventDetector(double half_width, double body_radius)
        : half_width_(half_width), body_radius_(body_radius) {}

    unsigned update(double t, Point2 position, double cross_track,
                    const std::vector<Obstacle>& obstacles, int invalid_vision_streak);

private:
    double half_width_;
    double body_radius_;
    int armed_side_ = 0;  // +1 left excursion seen, -1 right, 0 none yet
    bool lost_latched_ = false;
};

// Fixed-step closed loop: sensors sampled at their rates with zero-order
// hold, fuzzy control at the control rate, motors + pose every dt. Stops at
// duration, path completion, or collision. Throws ScenarioInvalid up front.
RunResult run_simulation(const Scenario& sc);

struct Metrics {
    double starting_time = 0.0;       // s, disturbance onset
    double settling_angle_deg = 0.0;  // max |heading error| over the disturbance
    double settling_time = 0.0;       // s after onset; meaningful when settled
    bool settled = true;
    double max_cross_track = 0.0;     // m
    int line_cross = 0, collision = 0, track_lost = 0;
};

Metrics compute_metrics(const RunResult& rr, const Scenario& sc);

// Serialization used by the CLI (and tests).
std::string trajectory_csv(const RunResult& rr);
std::string metrics_text(const Metrics& m, const Scenario& sc, StopReason reason);
std::string events_text(const RunResult& rr);
const char* stop_reason_name(StopReason r);

}  // namespace linesim
