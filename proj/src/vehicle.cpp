#include "linesim/vehicle.hpp"

#include <algorithm>
#include <cmath>

#include "linesim/geom2d.hpp"

namespace linesim {

MotorState motor_step(const MotorState& m, const VehicleParams& p, double dt) {
    const double wn = p.motor_omega_n, z = p.motor_zeta;
    MotorState out = m;
    out.speed_rate += dt * (wn * wn * (m.target - m.speed) - 2.0 * z * wn * m.speed_rate);
    out.speed += dt * out.speed_rate;  // semi-implicit: updated rate drives speed
    const double cap = 1.5 * p.max_wheel_speed;
    out.speed = std::clamp(out.speed, -cap, cap);
    return out;
}

VehicleState kinematics_step(const VehicleState& s, const VehicleParams& p, double dt) {
    const double v = 0.5 * (s.left.speed + s.right.speed);
    const double omega = (s.right.speed - s.left.speed) / p.wheel_base;
    VehicleState out = s;
    if (std::abs(omega) < 1e-9) {
        out.x += v * std::cos(s.heading) * dt;
        out.y += v * std::sin(s.heading) * dt;
        // heading deliberately untouched: equal wheel speeds never turn
    } else {
        const double h1 = s.heading + omega * dt;
        const double r = v / omega;
        out.x += r * (std::sin(h1) - std::sin(s.heading));
        out.y += r * (-std::cos(h1) + std::cos(s.heading));
        out.heading = wrap_angle(h1);
    }
    return out;
}

std::pair<double, double> mix_commands(double steer_bias, double left_cmd,
                                       double right_cmd, const VehicleParams& p) {
    const double base = 0.5 * (left_cmd + right_cmd);
    const double differential = steer_bias * p.max_wheel_speed * 0.5;
    const double lo = -p.max_wheel_speed, hi = p.max_wheel_speed;
    return {std::clamp(base - differential, lo, hi),
            std::clamp(base + differential, lo, hi)};
}

VehicleState vehicle_step(const VehicleState& s, const VehicleParams& p, double dt) {
    VehicleState out = s;
    out.left = motor_step(s.left, p, dt);
    out.right = motor_step(s.right, p, dt);

    VehicleState mid = s;
    mid.left.speed = 0.5 * (s.left.speed + out.left.speed);
    mid.right.speed = 0.5 * (s.right.speed + out.right.speed);
    mid = kinematics_step(mid, p, dt);

    out.x = mid.x;
    out.y = mid.y;
    out.heading = mid.heading;
    return out;
}

}  // namespace linesim
