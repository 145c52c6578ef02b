#pragma once
#include <utility>

namespace linesim {

// Damping ratio / natural frequency of the wheel-speed loop, fitted to a
// 40% overshoot peaking at t = 2.4 s:
//   zeta    = -ln(0.4) / sqrt(pi^2 + ln(0.4)^2)
//   omega_n = (pi / 2.4) / sqrt(1 - zeta^2)
inline constexpr double kMotorZeta = 0.27999799333504155;
inline constexpr double kMotorOmegaN = 1.3635376468242142;

struct VehicleParams {
    double wheel_base = 0.5;        // m, track width between drive wheels
    double body_radius = 0.3;       // m, collision circle
    double max_wheel_speed = 2.0;   // m/s
    double motor_zeta = kMotorZeta;
    double motor_omega_n = kMotorOmegaN;
};

struct MotorState {
    double speed = 0.0;       // m/s, wheel surface speed
    double speed_rate = 0.0;  // m/s^2
    double target = 0.0;      // m/s
};

struct VehicleState {
    double x = 0.0, y = 0.0;  // m, world frame
    double heading = 0.0;     // rad, (-pi, pi]
    MotorState left, right;
};

// One semi-implicit Euler step of y'' + 2*zeta*wn*y' + wn^2*y = wn^2*target.
// Speed is hard-clamped to |speed| <= 1.5 * max_wheel_speed.
MotorState motor_step(const MotorState& m, const VehicleParams& p, double dt);

// Exact-arc differential-drive pose update from the current wheel speeds:
// v = (l + r)/2, omega = (r - l)/wheel_base; straight-line special case
// when |omega| < 1e-9 rad/s. Heading renormalized into (-pi, pi].
VehicleState kinematics_step(const VehicleState& s, const VehicleParams& p, double dt);

// Turn the controller's three outputs into two wheel targets:
// base = (left_cmd + right_cmd)/2, differential = steer * max_wheel_speed * 0.5,
// targets clamped into [-max_wheel_speed, max_wheel_speed]. Positive steer
// slows the left wheel and speeds the right one (a counter-clockwise turn).
std::pair<double, double> mix_commands(double steer_bias, double left_cmd,
                                       double right_cmd, const VehicleParams& p);

// Motor step for both wheels followed by a pose advance using the
// trapezoid-averaged (pre/post step) wheel speeds; this is the integration
// scheme the simulation loop uses, second-order accurate in dt.
VehicleState vehicle_step(const VehicleState& s, const VehicleParams& p, double dt);

}  // namespace linesim
