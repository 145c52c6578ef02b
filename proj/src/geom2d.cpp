#include "linesim/geom2d.hpp"

namespace linesim {

Transform2 make_translation(double dx, double dy) {
    return {1.0, 0.0, 0.0, 1.0, dx, dy};
}

Transform2 make_scaling(double sx, double sy) {
    return {sx, 0.0, 0.0, sy, 0.0, 0.0};
}

Transform2 make_rotation(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c, 0.0, 0.0};
}

Transform2 make_shear_x(double a) {
    return {1.0, a, 0.0, 1.0, 0.0, 0.0};
}

Transform2 make_shear_y(double b) {
    return {1.0, 0.0, b, 1.0, 0.0, 0.0};
}

Point2 apply(const Transform2& t, Point2 p) {
    return {t.m11 * p.x + t.m12 * p.y + t.tx,
            t.m21 * p.x + t.m22 * p.y + t.ty};
}

Transform2 compose(const Transform2& a, const Transform2& b) {
    Transform2 r;
    r.m11 = a.m11 * b.m11 + a.m12 * b.m21;
    r.m12 = a.m11 * b.m12 + a.m12 * b.m22;
    r.m21 = a.m21 * b.m11 + a.m22 * b.m21;
    r.m22 = a.m21 * b.m12 + a.m22 * b.m22;
    r.tx = a.m11 * b.tx + a.m12 * b.ty + a.tx;
    r.ty = a.m21 * b.tx + a.m22 * b.ty + a.ty;
    return r;
}

double det(const Transform2& t) {
    return t.m11 * t.m22 - t.m12 * t.m21;
}

Transform2 inverse(const Transform2& t) {
    double d = det(t);
    double scale = std::max({std::abs(t.m11), std::abs(t.m12),
                             std::abs(t.m21), std::abs(t.m22), 1e-300});
    if (std::abs(d) <= 1e-14 * scale * scale)
        throw SingularTransform("transform is not invertible");
    Transform2 r;
    r.m11 = t.m22 / d;
    r.m12 = -t.m12 / d;
    r.m21 = -t.m21 / d;
    r.m22 = t.m11 / d;
    r.tx = -(r.m11 * t.tx + r.m12 * t.ty);
    r.ty = -(r.m21 * t.tx + r.m22 * t.ty);
    return r;
}

}  // namespace linesim
