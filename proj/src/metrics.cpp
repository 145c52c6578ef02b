#include <algorithm>
#include <cmath>

#include "linesim/sim.hpp"
#include "linesim/util.hpp"

namespace linesim {

Metrics compute_metrics(const RunResult& rr, const Scenario& sc) {
    Metrics m;
    if (rr.rows.empty()) return m;

    const double band_deg = 2.0;
    const size_t n = rr.rows.size();

    std::vector<double> err_deg(n);
    double s_hint = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const auto& r = rr.rows[i];
        Path::Projection proj = sc.path.project({r.x, r.y}, s_hint);
        s_hint = proj.s;
        err_deg[i] = std::abs(rad2deg(wrap_angle(r.heading - proj.tangent)));
        m.max_cross_track = std::max(m.max_cross_track, std::abs(proj.cross_track));
        if (r.events & kEventLineCross) ++m.line_cross;
        if (r.events & kEventCollision) ++m.collision;
        if (r.events & kEventTrackLost) ++m.track_lost;
    }

    // Disturbance onset: the first tick a sonar zone drops below the
    // threshold; 0 when there is no obstacle (the path itself disturbs).
    size_t onset = 0;
    m.starting_time = 0.0;
    if (!sc.obstacles.empty()) {
        for (size_t i = 0; i < n; ++i) {
            const auto& r = rr.rows[i];
            double zmin = std::min({r.zone_left, r.zone_center, r.zone_right});
            if (zmin < sc.metrics.obstacle_threshold) {
                onset = i;
                m.starting_time = r.t;
                break;
            }
        }
    }

    // Last tick at/after onset with the heading error outside the band.
    size_t last_violation = n;  // sentinel: none
    for (size_t i = n; i-- > onset;) {
        if (err_deg[i] >= band_deg) {
            last_violation = i;
            break;
        }
    }

    if (last_violation == n) {
        m.settled = true;
        m.settling_time = 0.0;
        m.settling_angle_deg = 0.0;
    } else if (last_violation == n - 1) {
        m.settled = false;
        m.settling_time = 0.0;
        m.settling_angle_deg = *std::max_element(err_deg.begin() + onset, err_deg.end());
    } else {
        m.settled = true;
        m.settling_time = rr.rows[last_violation + 1].t - m.starting_time;
        m.settling_angle_deg =
            *std::max_element(err_deg.begin() + onset, err_deg.begin() + last_violation + 2);
    }
    return m;
}

std::string metrics_text(const Metrics& m, const Scenario& sc, StopReason reason) {
    std::string out;
    out += "scenario: " + sc.name + "\n";
    out += "reason: " + std::string(stop_reason_name(reason)) + "\n";
    out += "starting_time_s: " + format_short(m.starting_time) + "\n";
    out += "settling_angle_deg: " + format_short(m.settling_angle_deg) + "\n";
    out += "settling_time_s: " +
           (m.settled ? format_short(m.settling_time) : std::string("not-settled")) + "\n";
    out += "settled: " + std::string(m.settled ? "yes" : "no") + "\n";
    out += "max_cross_track_m: " + format_short(m.max_cross_track) + "\n";
    out += "events: line_cross=" + std::to_string(m.line_cross) +
           " collision=" + std::to_string(m.collision) +
           " track_lost=" + std::to_string(m.track_lost) + "\n";
    out += "table:\n";
    out += "| Case | Starting Time sec. | Settling angle deg. | Settling time sec. |\n";
    out += "| " + sc.name + " | " + format_short(m.starting_time) + " | " +
           format_short(m.settling_angle_deg) + " | " +
           (m.settled ? format_short(m.settling_time) : std::string("not-settled")) + " |\n";
    return out;
}

}  // namespace linesim
