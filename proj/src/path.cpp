#include "linesim/path.hpp"

#include <algorithm>
#include <cmath>

#include "linesim/util.hpp"

namespace linesim {

namespace {
// Angle of p around an arc start a0, measured along the sweep direction,
// normalized into [0, 2*pi). Supports sweeps of any magnitude below 2*pi.
double along_sweep(double phi, double a0, double sweep) {
    double w = (sweep >= 0.0) ? phi - a0 : a0 - phi;
    w = std::fmod(w, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    return w;
}
}  // namespace

Path build_path(Point2 start, double heading, const std::vector<SegmentSpec>& specs) {
    Path path;
    Point2 cursor = start;
    double h = heading;
    for (const auto& sp : specs) {
        switch (sp.kind) {
            case SegmentSpec::Kind::Straight: {
                if (!(sp.length > 0.0))
                    throw ScenarioInvalid("straight segment length must be > 0");
                Path::Segment g;
                g.is_arc = false;
                g.s0 = path.length_;
                g.len = sp.length;
                g.p0 = cursor;
                g.dir = {std::cos(h), std::sin(h)};
                path.segs_.push_back(g);
                cursor = cursor + sp.length * g.dir;
                path.length_ += sp.length;
                break;
            }
            case SegmentSpec::Kind::Arc: {
                if (!(sp.radius > 0.0))
                    throw ScenarioInvalid("arc radius must be > 0");
                if (sp.sweep == 0.0 || std::abs(sp.sweep) >= 2.0 * kPi)
                    throw ScenarioInvalid("arc sweep must be nonzero and below 360 degrees");
                const double sign = (sp.sweep >= 0.0) ? 1.0 : -1.0;
                Path::Segment g;
                g.is_arc = true;
                g.s0 = path.length_;
                g.len = std::abs(sp.sweep) * sp.radius;
                g.center = cursor + sp.radius * Point2{std::cos(h + sign * kPi / 2),
                                                       std::sin(h + sign * kPi / 2)};
                g.radius = sp.radius;
                g.a0 = h - sign * kPi / 2;
                g.sweep = sp.sweep;
                path.segs_.push_back(g);
                const double a1 = g.a0 + sp.sweep;
                cursor = g.center + sp.radius * Point2{std::cos(a1), std::sin(a1)};
                h = wrap_angle(h + sp.sweep);
                path.length_ += g.len;
                break;
            }
            case SegmentSpec::Kind::Polyline: {
                if (sp.points.size() < 2)
                    throw ScenarioInvalid("polyline needs at least 2 points");
                if (dist(sp.points.front(), cursor) > 1e-9)
                    throw ScenarioInvalid("polyline must start at the current path end");
                for (size_t i = 0; i + 1 < sp.points.size(); ++i) {
                    Point2 a = sp.points[i], b = sp.points[i + 1];
                    double len = dist(a, b);
                    if (len <= 1e-9)
                        throw ScenarioInvalid("polyline has coincident consecutive points");
                    Path::Segment g;
                    g.is_arc = false;
                    g.s0 = path.length_;
                    g.len = len;
                    g.p0 = a;
                    g.dir = (1.0 / len) * (b - a);
                    path.segs_.push_back(g);
                    path.length_ += len;
                    h = std::atan2(g.dir.y, g.dir.x);
                }
                cursor = sp.points.back();
                break;
            }
        }
    }
    if (path.segs_.empty() || !(path.length_ > 0.0))
        throw ScenarioInvalid("path must have positive total length");
    return path;
}

void Path::eval_segment(const Segment& g, double local_s, Point2* p, double* tan) const {
    if (!g.is_arc) {
        if (p) *p = g.p0 + local_s * g.dir;
        if (tan) *tan = std::atan2(g.dir.y, g.dir.x);
    } else {
        const double sign = (g.sweep >= 0.0) ? 1.0 : -1.0;
        const double phi = g.a0 + sign * local_s / g.radius;
        if (p) *p = g.center + g.radius * Point2{std::cos(phi), std::sin(phi)};
        if (tan) *tan = wrap_angle(phi + sign * kPi / 2);
    }
}

void Path::eval(double s, Point2* point, double* tangent) const {
    if (s <= 0.0) {
        Point2 p0 = start_point();
        double t0 = start_tangent();
        if (point) *point = p0 + s * Point2{std::cos(t0), std::sin(t0)};
        if (tangent) *tangent = t0;
        return;
    }
    if (s >= length_) {
        Point2 p1 = end_point();
        double t1 = end_tangent();
        if (point) *point = p1 + (s - length_) * Point2{std::cos(t1), std::sin(t1)};
        if (tangent) *tangent = t1;
        return;
    }
    for (const auto& g : segs_) {
        if (s <= g.s0 + g.len || &g == &segs_.back()) {
            eval_segment(g, s - g.s0, point, tangent);
            return;
        }
    }
}

Path::Projection Path::project(Point2 p, double s_hint) const {
    struct Candidate {
        double s, d2;
    };
    std::vector<Candidate> cands;

    auto add = [&](double s) {
        Point2 q;
        eval(s, &q, nullptr);
        double d2 = dot(p - q, p - q);
        cands.push_back({s, d2});
    };

    // Tangent extensions beyond the ends.
    {
        Point2 p0 = start_point();
        double t0 = start_tangent();
        double t = dot(p - p0, {std::cos(t0), std::sin(t0)});
        if (t < 0.0) add(t);
        Point2 p1 = end_point();
        double t1 = end_tangent();
        double u = dot(p - p1, {std::cos(t1), std::sin(t1)});
        if (u > 0.0) add(length_ + u);
    }

    for (const auto& g : segs_) {
        if (!g.is_arc) {
            double t = std::clamp(dot(p - g.p0, g.dir), 0.0, g.len);
            add(g.s0 + t);
        } else {
            Point2 rel = p - g.center;
            if (norm(rel) > 1e-12) {
                double phi = std::atan2(rel.y, rel.x);
                double w = along_sweep(phi, g.a0, g.sweep);
                if (w <= std::abs(g.sweep)) add(g.s0 + w * g.radius);
            }
            add(g.s0);            // segment endpoints cover corner regions
            add(g.s0 + g.len);
        }
    }

    const Candidate* best = &cands.front();
    for (const auto& c : cands) {
        if (c.d2 < best->d2 - 1e-12 ||
            (std::abs(c.d2 - best->d2) <= 1e-12 &&
             std::abs(c.s - s_hint) < std::abs(best->s - s_hint)))
            best = &c;
    }

    Projection proj;
    proj.s = best->s;
    eval(best->s, &proj.foot, &proj.tangent);
    Point2 tan{std::cos(proj.tangent), std::sin(proj.tangent)};
    proj.cross_track = cross(tan, p - proj.foot);
    return proj;
}

std::vector<Point2> Path::intersect_line(Point2 n, double c) const {
    std::vector<Point2> hits;
    constexpr double kExt = 100.0;  // tangent extension length for the search

    auto add_straight = [&](Point2 p0, Point2 dir, double t_lo, double t_hi) {
        double denom = dot(n, dir);
        if (std::abs(denom) < 1e-12) return;
        double t = (c - dot(n, p0)) / denom;
        if (t >= t_lo && t <= t_hi) hits.push_back(p0 + t * dir);
    };

    add_straight(start_point(),
                 {std::cos(start_tangent()), std::sin(start_tangent())}, -kExt, 0.0);
    add_straight(end_point(),
                 {std::cos(end_tangent()), std::sin(end_tangent())}, 0.0, kExt);
    // shift the post-extension origin: p0 = end_point, t in [0, kExt]

    for (const auto& g : segs_) {
        if (!g.is_arc) {
            add_straight(g.p0, g.dir, 0.0, g.len);
        } else {
            // n . (center + R e(phi)) = c  =>  A cos(phi) + B sin(phi) = D
            const double A = g.radius * n.x, B = g.radius * n.y;
            const double D = c - dot(n, g.center);
            const double amp = std::hypot(A, B);
            if (amp < 1e-12) continue;
            const double ratio = D / amp;
            if (ratio < -1.0 || ratio > 1.0) continue;
            const double base = std::atan2(B, A);
            const double delta = std::acos(std::clamp(ratio, -1.0, 1.0));
            for (double phi : {base + delta, base - delta}) {
                double w = along_sweep(phi, g.a0, g.sweep);
                if (w <= std::abs(g.sweep))
                    hits.push_back(g.center +
                                   g.radius * Point2{std::cos(phi), std::sin(phi)});
            }
        }
    }
    return hits;
}

Point2 Path::start_point() const {
    const auto& g = segs_.front();
    Point2 p;
    eval_segment(g, 0.0, &p, nullptr);
    return p;
}

double Path::start_tangent() const {
    double t;
    eval_segment(segs_.front(), 0.0, nullptr, &t);
    return t;
}

Point2 Path::end_point() const {
    const auto& g = segs_.back();
    Point2 p;
    eval_segment(g, g.len, &p, nullptr);
    return p;
}

double Path::end_tangent() const {
    const auto& g = segs_.back();
    double t;
    eval_segment(g, g.len, nullptr, &t);
    return t;
}

}  // namespace linesim
