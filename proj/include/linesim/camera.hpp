#pragma once
#include <stdexcept>
#include <utility>
#include <vector>

namespace linesim {

// Vehicle-centroid ground frame: x forward, y left, z up (meters).
struct GroundPoint {
    double xg = 0.0, yg = 0.0, zg = 0.0;
};

struct ImagePoint {
    double xpi = 0.0, ypi = 0.0;  // pixels
};

// Linear camera: xpi = a11*xg + a12*yg + a13*zg + a14, ypi analogous.
// zg_fixed is the constant ground height assumed by back-projection.
struct CameraModel {
    double a11 = 0, a12 = 0, a13 = 0, a14 = 0;
    double a21 = 0, a22 = 0, a23 = 0, a24 = 0;
    double zg_fixed = 0.0;
};

struct CalibrationSet {
    std::vector<std::pair<GroundPoint, ImagePoint>> points;
};

struct CalibrationReport {
    CameraModel model;
    std::vector<double> residual_x;  // per point, pixels
    std::vector<double> residual_y;
    double rms = 0.0;                // combined RMS residual, pixels
};

class InsufficientPoints : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class DegenerateCalibration : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class SingularViewGeometry : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class CoincidentPoints : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

ImagePoint project(const CameraModel& m, const GroundPoint& g);

// Least-squares fit of the eight coefficients from >= 4 correspondences.
// Throws InsufficientPoints or DegenerateCalibration (design matrix rank < 4).
CalibrationReport calibrate(const CalibrationSet& set, double zg_fixed = 0.0);

// Invert the model at zg = zg_fixed. Throws SingularViewGeometry when the
// 2x2 view matrix Q = [[a11, a12], [a21, a22]] is singular, using the
// scale-aware threshold |det Q| > 1e-12 * max|q_ij|^2.
GroundPoint back_project(const CameraModel& m, const ImagePoint& ip);

struct LinePose {
    double angle = 0.0;   // radians, (-pi, pi], relative to vehicle +x axis
    double offset = 0.0;  // meters, signed; positive = line on the vehicle's left
};

// Pose of the infinite line through two ground points; `near` is the point
// lower in the image (closer to the vehicle). Throws CoincidentPoints when
// the points are closer than 1e-6 m.
LinePose line_pose_from_points(const GroundPoint& near_pt, const GroundPoint& far_pt);

// Correspondence file: one pair per line, `xg yg zg xpi ypi [weight]`,
// weight defaults to 1 and must equal 1; `#` starts a comment. Throws
// ParseError with the offending line number.
CalibrationSet parse_correspondences(const std::string& path);

}  // namespace linesim
