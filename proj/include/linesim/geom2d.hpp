#pragma once
#include <cmath>
#include <stdexcept>

namespace linesim {

inline constexpr double kPi = 3.14159265358979323846;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

// Affine map p -> M p + t with M = [[m11, m12], [m21, m22]].
struct Transform2 {
    double m11 = 1.0, m12 = 0.0;
    double m21 = 0.0, m22 = 1.0;
    double tx = 0.0, ty = 0.0;
};

class SingularTransform : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

Transform2 make_translation(double dx, double dy);
Transform2 make_scaling(double sx, double sy);
Transform2 make_rotation(double theta);   // positive = counter-clockwise
Transform2 make_shear_x(double a);        // (x, y) -> (x + a*y, y)
Transform2 make_shear_y(double b);        // (x, y) -> (x, b*x + y)

// apply(compose(A, B), p) == apply(A, apply(B, p))
Transform2 compose(const Transform2& outer, const Transform2& inner);
Point2 apply(const Transform2& t, Point2 p);
double det(const Transform2& t);
Transform2 inverse(const Transform2& t);  // throws SingularTransform

// Normalize an angle into (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace linesim
