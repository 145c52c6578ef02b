#include "linesim/sim.hpp"

#include <cmath>

#include "linesim/util.hpp"

namespace linesim {

unsigned EventDetector::update(double t, Point2 position, double cross_track,
                               const std::vector<Obstacle>& obstacles,
                               int invalid_vision_streak) {
    unsigned ev = 0;

    const int side = cross_track > half_width_ ? 1 : (cross_track < -half_width_ ? -1 : 0);
    if (side != 0) {
        if (armed_side_ != 0 && side != armed_side_) ev |= kEventLineCross;
        armed_side_ = side;
    }

    for (const auto& ob : obstacles) {
        if (!ob.active(t)) continue;
        if (dist(position, ob.center) < ob.radius + body_radius_) {
            ev |= kEventCollision;
            break;
        }
    }

    if (invalid_vision_streak >= 10) {
        if (!lost_latched_) ev |= kEventTrackLost;
        lost_latched_ = true;
    } else if (invalid_vision_streak == 0) {
        lost_latched_ = false;
    }
    return ev;
}

RunResult run_simulation(const Scenario& sc) {
    if (!(sc.dt > 0.0 && sc.dt <= 0.05))
        throw ScenarioInvalid(sc.name + ": dt must lie in (0, 0.05]");
    if (sc.duration < 0.0) throw ScenarioInvalid(sc.name + ": duration must be >= 0");
    if (sc.controller.inputs().size() != 6 || sc.controller.outputs().size() != 3)
        throw ScenarioInvalid(sc.name + ": controller must have 6 inputs / 3 outputs");
    if (sc.path.total_length() <= 0.0) throw ScenarioInvalid(sc.name + ": empty path");

    RunResult rr;
    std::mt19937_64 rng(sc.seed);

    VehicleState st;
    st.x = sc.start_pos.x;
    st.y = sc.start_pos.y;
    st.heading = wrap_angle(sc.start_heading);

    double held_offset = 0.0, held_angle = 0.0;
    int held_valid = 0, invalid_streak = 0;
    double zl = sc.sonar.max_range, zc = sc.sonar.max_range, zr = sc.sonar.max_range;
    double cmd_left = 0.0, cmd_right = 0.0;

    EventDetector detector(0.5 * sc.vehicle.wheel_base, sc.vehicle.body_radius);
    const long n_ticks = (long)std::floor(sc.duration / sc.dt + 1e-9);
    long m_vision = 0, m_sonar = 0, m_control = 0;
    double s_hint = 0.0;

    for (long k = 0;; ++k) {
        const double t = k * sc.dt;

        if (t + 1e-9 >= (double)m_vision / sc.vision.rate) {
            VisionSample vs = vision_sample(sc.vision, sc.path, st, rng);
            ++m_vision;
            ++rr.vision_samples;
            if (vs.valid) {
                held_offset = vs.derived_offset;
                held_angle = vs.derived_angle;
                held_valid = 1;
                invalid_streak = 0;
            } else {
                held_valid = 0;
                ++invalid_streak;
            }
        }
        if (t + 1e-9 >= (double)m_sonar / sc.sonar.rate) {
            SonarReading sr = sonar_scan(sc.sonar, sc.obstacles, st, t, rng);
            ++m_sonar;
            ++rr.sonar_samples;
            zl = sr.zone_left;
            zc = sr.zone_center;
            zr = sr.zone_right;
        }
        if (t + 1e-9 >= (double)m_control / sc.control_rate) {
            ++m_control;
            ++rr.control_updates;
            if (invalid_streak >= 10) {
                // Track lost: creep straight ahead slowly.
                cmd_left = cmd_right = 0.2 * sc.vehicle.max_wheel_speed;
                st.left.target = cmd_left;
                st.right.target = cmd_right;
            } else {
                const double in[6] = {held_offset, held_angle, zl, zc, zr, sc.speed_ref};
                InferResult res = sc.controller.infer(in);
                cmd_left = res.outputs[1];
                cmd_right = res.outputs[2];
                auto [lt, rt] = mix_commands(res.outputs[0], cmd_left, cmd_right, sc.vehicle);
                st.left.target = lt;
                st.right.target = rt;
            }
        }

        const Path::Projection proj = sc.path.project({st.x, st.y}, s_hint);
        s_hint = proj.s;
        const unsigned ev =
            detector.update(t, {st.x, st.y}, proj.cross_track, sc.obstacles, invalid_streak);

        TrajectoryRow row;
        row.t = t;
        row.x = st.x;
        row.y = st.y;
        row.heading = st.heading;
        row.left_speed = st.left.speed;
        row.right_speed = st.right.speed;
        row.cmd_left = st.left.target;
        row.cmd_right = st.right.target;
        row.offset = held_offset;
        row.angle = held_angle;
        row.vision_valid = held_valid;
        row.zone_left = zl;
        row.zone_center = zc;
        row.zone_right = zr;
        row.events = ev;
        rr.rows.push_back(row);

        if (ev & kEventLineCross) ++rr.line_cross_count;
        if (ev & kEventCollision) ++rr.collision_count;
        if (ev & kEventTrackLost) ++rr.track_lost_count;

        if (ev & kEventCollision) {
            rr.reason = StopReason::Collision;
            break;
        }
        if (proj.s >= sc.path.total_length() - 1e-9) {
            rr.reason = StopReason::PathComplete;
            break;
        }
        if (k >= n_ticks) {
            rr.reason = StopReason::Duration;
            break;
        }
        st = vehicle_step(st, sc.vehicle, sc.dt);
    }
    return rr;
}

std::string trajectory_csv(const RunResult& rr) {
    std::string out =
        "t,x,y,heading,left_speed,right_speed,cmd_left,cmd_right,offset,angle,"
        "vision_valid,zone_left,zone_center,zone_right,events\n";
    for (const auto& r : rr.rows) {
        out += format_full(r.t);
        out += ',';
        out += format_full(r.x);
        out += ',';
        out += format_full(r.y);
        out += ',';
        out += format_full(r.heading);
        out += ',';
        out += format_full(r.left_speed);
        out += ',';
        out += format_full(r.right_speed);
        out += ',';
        out += format_full(r.cmd_left);
        out += ',';
        out += format_full(r.cmd_right);
        out += ',';
        out += format_full(r.offset);
        out += ',';
        out += format_full(r.angle);
        out += ',';
        out += std::to_string(r.vision_valid);
        out += ',';
        out += format_full(r.zone_left);
        out += ',';
        out += format_full(r.zone_center);
        out += ',';
        out += format_full(r.zone_right);
        out += ',';
        out += std::to_string(r.events);
        out += '\n';
    }
    return out;
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::Duration: return "duration";
        case StopReason::PathComplete: return "path_complete";
        case StopReason::Collision: return "collision";
    }
    return "?";
}

std::string events_text(const RunResult& rr) {
    std::string out;
    for (const auto& r : rr.rows) {
        if (r.events & kEventLineCross)
            out += "t=" + format_short(r.t) + " event=line_cross x=" + format_short(r.x) +
                   " y=" + format_short(r.y) + "\n";
        if (r.events & kEventCollision)
            out += "t=" + format_short(r.t) + " event=collision x=" + format_short(r.x) +
                   " y=" + format_short(r.y) + "\n";
        if (r.events & kEventTrackLost)
            out += "t=" + format_short(r.t) + " event=track_lost x=" + format_short(r.x) +
                   " y=" + format_short(r.y) + "\n";
    }
    return out;
}

}  // namespace linesim
