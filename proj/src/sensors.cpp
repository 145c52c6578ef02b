#include "linesim/sensors.hpp"

#include <algorithm>
#include <cmath>

#include "linesim/util.hpp"

namespace linesim {

namespace {

// Ground-plane preimage of image row `row` in the vehicle frame is the line
// a21*x + a22*y = row - a24 - a23*zg. Returns the best path intersection in
// vehicle-frame coordinates, preferring candidates ahead of the vehicle whose
// projection lands nearest the image-column center.
bool window_row_point(const VisionConfig& cfg, const Path& world,
                      const VehicleState& pose, int row, Point2* out) {
    const CameraModel& cam = cfg.camera;
    const Point2 n0{cam.a21, cam.a22};
    const double cv = row - cam.a24 - cam.a23 * cam.zg_fixed;

    const double ch = std::cos(pose.heading), sh = std::sin(pose.heading);
    const Point2 n_world{ch * n0.x - sh * n0.y, sh * n0.x + ch * n0.y};
    const Point2 t_pos{pose.x, pose.y};

    auto hits = world.intersect_line(n_world, cv + dot(n_world, t_pos));
    bool found = false;
    double best_score = 0.0;
    for (const Point2& q : hits) {
        const Point2 rel = q - t_pos;
        const Point2 g{ch * rel.x + sh * rel.y, -sh * rel.x + ch * rel.y};
        if (g.x <= 0.0) continue;  // behind the camera
        const double xpi = cam.a11 * g.x + cam.a12 * g.y + cam.a13 * cam.zg_fixed + cam.a14;
        const double score = std::abs(xpi - 0.5 * cfg.sensor_width);
        if (!found || score < best_score) {
            found = true;
            best_score = score;
            *out = g;
        }
    }
    return found;
}

}  // namespace

VisionSample vision_sample(const VisionConfig& cfg, const Path& world,
                           const VehicleState& pose, std::mt19937_64& rng) {
    Point2 g_near, g_far;
    const bool near_ok = window_row_point(cfg, world, pose, cfg.window_near_row, &g_near);
    const bool far_ok = window_row_point(cfg, world, pose, cfg.window_far_row, &g_far);

    // Fixed draw budget regardless of outcome.
    const double nx_near = gauss(rng) * cfg.pixel_noise_sigma;
    const double ny_near = gauss(rng) * cfg.pixel_noise_sigma;
    const double nx_far = gauss(rng) * cfg.pixel_noise_sigma;
    const double ny_far = gauss(rng) * cfg.pixel_noise_sigma;
    const double u_drop = uniform01(rng);

    VisionSample s;
    if (!near_ok || !far_ok) return s;

    ImagePoint ip_near = project(cfg.camera, {g_near.x, g_near.y, cfg.camera.zg_fixed});
    ImagePoint ip_far = project(cfg.camera, {g_far.x, g_far.y, cfg.camera.zg_fixed});
    if (cfg.quantize) {
        ip_near = {std::nearbyint(ip_near.xpi), std::nearbyint(ip_near.ypi)};
        ip_far = {std::nearbyint(ip_far.xpi), std::nearbyint(ip_far.ypi)};
    }
    ip_near.xpi += nx_near;
    ip_near.ypi += ny_near;
    ip_far.xpi += nx_far;
    ip_far.ypi += ny_far;

    auto in_bounds = [&](const ImagePoint& ip) {
        return ip.xpi >= 0.0 && ip.xpi < cfg.sensor_width && ip.ypi >= 0.0 &&
               ip.ypi < cfg.sensor_height;
    };
    if (!in_bounds(ip_near) || !in_bounds(ip_far)) return s;
    if (u_drop < cfg.dropout_probability) return s;

    try {
        const GroundPoint bn = back_project(cfg.camera, ip_near);
        const GroundPoint bf = back_project(cfg.camera, ip_far);
        const LinePose lp = line_pose_from_points(bn, bf);
        s.valid = true;
        s.near = ip_near;
        s.far = ip_far;
        s.derived_angle = lp.angle;
        s.derived_offset = lp.offset;
    } catch (const CoincidentPoints&) {
        s.valid = false;
    }
    return s;
}

SonarReading sonar_scan(const SonarConfig& cfg, const std::vector<Obstacle>& obstacles,
                        const VehicleState& pose, double t, std::mt19937_64& rng) {
    SonarReading r;
    const Point2 origin{pose.x, pose.y};
    for (int i = 0; i < 6; ++i) {
        const double axis = pose.heading + cfg.bearings[i];
        double best = cfg.max_range;
        for (const auto& ob : obstacles) {
            if (!ob.active(t)) continue;
            const Point2 rel = ob.center - origin;
            const double d = norm(rel);
            if (d <= ob.radius) {
                best = 0.0;
                continue;
            }
            // Nearest disk point along the center direction, if inside the cone.
            const double dphi = wrap_angle(std::atan2(rel.y, rel.x) - axis);
            if (std::abs(dphi) <= cfg.cone_half_angle)
                best = std::min(best, d - ob.radius);
            // Otherwise the constrained minimum sits on a cone boundary ray.
            for (double side : {-1.0, 1.0}) {
                const double beta = axis + side * cfg.cone_half_angle;
                const Point2 e{std::cos(beta), std::sin(beta)};
                const double proj = dot(rel, e);
                if (proj <= 0.0) continue;
                const double perp2 = d * d - proj * proj;
                const double r2 = ob.radius * ob.radius;
                if (perp2 > r2) continue;
                best = std::min(best, proj - std::sqrt(r2 - perp2));
            }
        }
        best = std::clamp(best, cfg.min_range, cfg.max_range);
        best += gauss(rng) * cfg.noise_sigma;
        r.distances[i] = std::clamp(best, cfg.min_range, cfg.max_range);
    }
    r.zone_left = std::min(r.distances[0], r.distances[1]);
    r.zone_center = std::min(r.distances[2], r.distances[3]);
    r.zone_right = std::min(r.distances[4], r.distances[5]);
    return r;
}

}  // namespace linesim
