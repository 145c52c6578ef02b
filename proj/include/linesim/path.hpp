#pragma once
#include <vector>

#include "linesim/geom2d.hpp"

namespace linesim {

struct SegmentSpec {
    enum class Kind { Straight, Arc, Polyline };
    Kind kind = Kind::Straight;
    double length = 0.0;              // straight
    double radius = 0.0;              // arc
    double sweep = 0.0;               // arc, radians, positive = CCW
    std::vector<Point2> points;       // polyline, world frame
};

// Piecewise straight/arc curve in the world frame. Arc-length parameterized;
// evaluation and projection extend tangentially beyond both ends (the painted
// line keeps going; only completion tracking is clamped to [0, total_length]).
class Path {
public:
    struct Projection {
        double s = 0.0;            // arc length of the foot (may be < 0 or > L)
        double cross_track = 0.0;  // m, positive = point left of the path
        double tangent = 0.0;      // rad, path tangent at the foot
        Point2 foot;
    };

    double total_length() const { return length_; }
    void eval(double s, Point2* point, double* tangent) const;
    Projection project(Point2 p, double s_hint) const;

    // All intersections of the (extended) path with the line {q : n.q = c}.
    std::vector<Point2> intersect_line(Point2 n, double c) const;

    Point2 start_point() const;
    double start_tangent() const;
    Point2 end_point() const;
    double end_tangent() const;

private:
    friend Path build_path(Point2 start, double heading,
                           const std::vector<SegmentSpec>& specs);
    struct Segment {
        bool is_arc = false;
        double s0 = 0.0, len = 0.0;
        // straight
        Point2 p0, dir;
        // arc
        Point2 center;
        double radius = 0.0, a0 = 0.0, sweep = 0.0;
    };
    std::vector<Segment> segs_;
    double length_ = 0.0;

    void eval_segment(const Segment& g, double local_s, Point2* p, double* tan) const;
};

// Chains the segment specs from the given start pose. Polyline segments must
// begin at the current chain end (within 1e-9 m). Throws ScenarioInvalid.
Path build_path(Point2 start, double heading, const std::vector<SegmentSpec>& specs);

}  // namespace linesim
