#include "linesim/camera.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "linesim/util.hpp"

namespace linesim {

ImagePoint project(const CameraModel& m, const GroundPoint& g) {
    return {m.a11 * g.xg + m.a12 * g.yg + m.a13 * g.zg + m.a14,
            m.a21 * g.xg + m.a22 * g.yg + m.a23 * g.zg + m.a24};
}

CalibrationReport calibrate(const CalibrationSet& set, double zg_fixed) {
    const auto& pts = set.points;
    const int n = (int)pts.size();
    if (n < 4)
        throw InsufficientPoints("calibration needs at least 4 correspondences, got " +
                                 std::to_string(n));

    Eigen::MatrixXd C(n, 4);
    Eigen::VectorXd xpi(n), ypi(n);
    for (int i = 0; i < n; ++i) {
        const auto& g = pts[i].first;
        C(i, 0) = g.xg;
        C(i, 1) = g.yg;
        C(i, 2) = g.zg;
        C(i, 3) = 1.0;
        xpi(i) = pts[i].second.xpi;
        ypi(i) = pts[i].second.ypi;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(C);
    qr.setThreshold(1e-10);
    if (qr.rank() < 4)
        throw DegenerateCalibration("design matrix rank " + std::to_string(qr.rank()) +
                                    " < 4 (ground points do not span 3D + offset)");

    Eigen::Vector4d a1 = qr.solve(xpi);
    Eigen::Vector4d a2 = qr.solve(ypi);

    CalibrationReport rep;
    rep.model = {a1(0), a1(1), a1(2), a1(3), a2(0), a2(1), a2(2), a2(3), zg_fixed};
    rep.residual_x.resize(n);
    rep.residual_y.resize(n);
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        ImagePoint pred = project(rep.model, pts[i].first);
        rep.residual_x[i] = pred.xpi - xpi(i);
        rep.residual_y[i] = pred.ypi - ypi(i);
        ss += rep.residual_x[i] * rep.residual_x[i] + rep.residual_y[i] * rep.residual_y[i];
    }
    rep.rms = std::sqrt(ss / (2.0 * n));
    return rep;
}

GroundPoint back_project(const CameraModel& m, const ImagePoint& ip) {
    const double q11 = m.a11, q12 = m.a12, q21 = m.a21, q22 = m.a22;
    const double d = q11 * q22 - q12 * q21;
    const double qmax = std::max({std::abs(q11), std::abs(q12), std::abs(q21), std::abs(q22)});
    if (std::abs(d) <= 1e-12 * qmax * qmax)
        throw SingularViewGeometry("view matrix Q is singular (|det| too small)");
    const double b1 = ip.xpi - m.a14 - m.a13 * m.zg_fixed;
    const double b2 = ip.ypi - m.a24 - m.a23 * m.zg_fixed;
    return {(q22 * b1 - q12 * b2) / d, (q11 * b2 - q21 * b1) / d, m.zg_fixed};
}

CalibrationSet parse_correspondences(const std::string& path) {
    CalibrationSet set;
    std::istringstream stream(read_file(path));
    std::string raw;
    int lineno = 0;
    while (std::getline(stream, raw)) {
        ++lineno;
        std::string line = trim(raw);
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        auto toks = split_ws(line);
        if (toks.size() != 5 && toks.size() != 6)
            throw ParseError(path, lineno,
                             "expected 'xg yg zg xpi ypi [weight]', got " +
                                 std::to_string(toks.size()) + " fields");
        GroundPoint g{parse_num(toks[0], path, lineno), parse_num(toks[1], path, lineno),
                      parse_num(toks[2], path, lineno)};
        ImagePoint ip{parse_num(toks[3], path, lineno), parse_num(toks[4], path, lineno)};
        if (toks.size() == 6) {
            double w = parse_num(toks[5], path, lineno);
            if (w != 1.0)
                throw ParseError(path, lineno, "weights other than 1 are not supported");
        }
        set.points.push_back({g, ip});
    }
    return set;
}

LinePose line_pose_from_points(const GroundPoint& n, const GroundPoint& f) {
    const double dx = f.xg - n.xg, dy = f.yg - n.yg;
    const double len = std::hypot(dx, dy);
    if (len <= 1e-6)
        throw CoincidentPoints("windowed line points are coincident");
    LinePose lp;
    lp.angle = std::atan2(dy, dx);
    // Signed distance from the origin to the line; positive when the line
    // lies on the +y (left) side of the vehicle.
    lp.offset = (f.xg * n.yg - f.yg * n.xg) / len;
    return lp;
}

}  // namespace linesim
