#include <cmath>
#include <filesystem>
#include <sstream>

#include "linesim/fuzzy_io.hpp"
#include "linesim/scenario.hpp"
#include "linesim/util.hpp"

namespace linesim {

CameraModel default_scenario_camera() {
    CameraModel m;
    m.a11 = 0.0;
    m.a12 = -80.0;
    m.a13 = 0.0;
    m.a14 = 320.0;
    m.a21 = -100.0;
    m.a22 = 0.0;
    m.a23 = 0.0;
    m.a24 = 500.0;
    m.zg_fixed = 0.0;
    return m;
}

namespace {

void need_args(size_t have, size_t want, const std::string& file, int line,
               const std::string& what) {
    if (have != want)
        throw ParseError(file, line, what + " expects " + std::to_string(want) +
                                         " value(s), got " + std::to_string(have));
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name,
                             const std::string& base_dir) {
    Scenario sc;
    sc.vision.camera = default_scenario_camera();
    bool duration_seen = false;

    std::istringstream stream(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(stream, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t hash = line.find(" #");
        if (hash != std::string::npos) line = trim(line.substr(0, hash));

        auto toks = split_ws(line);
        const std::string& kw = toks[0];
        std::vector<std::string> args(toks.begin() + 1, toks.end());
        auto num = [&](size_t i) { return parse_num(args[i], name, lineno); };

        if (kw == "name") {
            need_args(args.size(), 1, name, lineno, "name");
            sc.name = args[0];
        } else if (kw == "seed") {
            need_args(args.size(), 1, name, lineno, "seed");
            double v = num(0);
            if (v < 0 || v != std::floor(v))
                throw ParseError(name, lineno, "seed must be a non-negative integer");
            sc.seed = (std::uint64_t)v;
        } else if (kw == "dt") {
            need_args(args.size(), 1, name, lineno, "dt");
            sc.dt = num(0);
        } else if (kw == "duration") {
            need_args(args.size(), 1, name, lineno, "duration");
            sc.duration = num(0);
            duration_seen = true;
        } else if (kw == "speed_ref") {
            need_args(args.size(), 1, name, lineno, "speed_ref");
            sc.speed_ref = num(0);
        } else if (kw == "rulebase") {
            need_args(args.size(), 1, name, lineno, "rulebase");
            std::filesystem::path p(args[0]);
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            sc.rulebase_path = p.string();
        } else if (kw == "start") {
            need_args(args.size(), 3, name, lineno, "start");
            sc.start_pos = {num(0), num(1)};
            sc.start_heading = deg2rad(num(2));
        } else if (kw == "path") {
            if (args.empty()) throw ParseError(name, lineno, "path needs a segment kind");
            SegmentSpec seg;
            if (args[0] == "straight") {
                need_args(args.size() - 1, 1, name, lineno, "path straight");
                seg.kind = SegmentSpec::Kind::Straight;
                seg.length = num(1);
            } else if (args[0] == "arc") {
                need_args(args.size() - 1, 2, name, lineno, "path arc");
                seg.kind = SegmentSpec::Kind::Arc;
                seg.radius = num(1);
                seg.sweep = deg2rad(num(2));
            } else if (args[0] == "polyline") {
                if (args.size() < 5 || (args.size() - 1) % 2 != 0)
                    throw ParseError(name, lineno,
                                     "path polyline needs at least two x y pairs");
                seg.kind = SegmentSpec::Kind::Polyline;
                for (size_t i = 1; i + 1 < args.size(); i += 2)
                    seg.points.push_back({num(i), num(i + 1)});
            } else {
                throw ParseError(name, lineno, "unknown path segment '" + args[0] + "'");
            }
            sc.segments.push_back(std::move(seg));
        } else if (kw == "obstacle") {
            if (args.size() != 3 && args.size() != 5)
                throw ParseError(name, lineno, "obstacle expects: x y radius [t_on t_off]");
            Obstacle ob;
            ob.center = {num(0), num(1)};
            ob.radius = num(2);
            if (ob.radius <= 0.0)
                throw ParseError(name, lineno, "obstacle radius must be > 0");
            if (args.size() == 5) {
                ob.t_on = num(3);
                ob.t_off = num(4);
                if (ob.t_off < ob.t_on)
                    throw ParseError(name, lineno, "obstacle window must have t_on <= t_off");
            }
            sc.obstacles.push_back(ob);
        } else if (kw == "vehicle") {
            need_args(args.size(), 2, name, lineno, "vehicle");
            double v = num(1);
            if (args[0] == "wheel_base") sc.vehicle.wheel_base = v;
            else if (args[0] == "body_radius") sc.vehicle.body_radius = v;
            else if (args[0] == "max_wheel_speed") sc.vehicle.max_wheel_speed = v;
            else if (args[0] == "motor_zeta") sc.vehicle.motor_zeta = v;
            else if (args[0] == "motor_omega_n") sc.vehicle.motor_omega_n = v;
            else throw ParseError(name, lineno, "unknown vehicle key '" + args[0] + "'");
        } else if (kw == "vision") {
            if (args.empty()) throw ParseError(name, lineno, "vision needs a key");
            const std::string& key = args[0];
            if (key == "rate") {
                need_args(args.size() - 1, 1, name, lineno, "vision rate");
                sc.vision.rate = num(1);
            } else if (key == "noise") {
                need_args(args.size() - 1, 1, name, lineno, "vision noise");
                sc.vision.pixel_noise_sigma = num(1);
            } else if (key == "dropout") {
                need_args(args.size() - 1, 1, name, lineno, "vision dropout");
                sc.vision.dropout_probability = num(1);
            } else if (key == "quantize") {
                need_args(args.size() - 1, 1, name, lineno, "vision quantize");
                if (args[1] == "on") sc.vision.quantize = true;
                else if (args[1] == "off") sc.vision.quantize = false;
                else throw ParseError(name, lineno, "vision quantize expects on|off");
            } else if (key == "rows") {
                need_args(args.size() - 1, 2, name, lineno, "vision rows");
                sc.vision.window_near_row = (int)num(1);
                sc.vision.window_far_row = (int)num(2);
            } else if (key == "sensor") {
                need_args(args.size() - 1, 2, name, lineno, "vision sensor");
                sc.vision.sensor_width = (int)num(1);
                sc.vision.sensor_height = (int)num(2);
            } else if (key == "camera") {
                need_args(args.size() - 1, 8, name, lineno, "vision camera");
                CameraModel& m = sc.vision.camera;
                m.a11 = num(1); m.a12 = num(2); m.a13 = num(3); m.a14 = num(4);
                m.a21 = num(5); m.a22 = num(6); m.a23 = num(7); m.a24 = num(8);
            } else if (key == "zg") {
                need_args(args.size() - 1, 1, name, lineno, "vision zg");
                sc.vision.camera.zg_fixed = num(1);
            } else {
                throw ParseError(name, lineno, "unknown vision key '" + key + "'");
            }
        } else if (kw == "sonar") {
            if (args.empty()) throw ParseError(name, lineno, "sonar needs a key");
            const std::string& key = args[0];
            if (key == "rate") {
                need_args(args.size() - 1, 1, name, lineno, "sonar rate");
                sc.sonar.rate = num(1);
            } else if (key == "noise") {
                need_args(args.size() - 1, 1, name, lineno, "sonar noise");
                sc.sonar.noise_sigma = num(1);
            } else if (key == "range") {
                need_args(args.size() - 1, 2, name, lineno, "sonar range");
                sc.sonar.min_range = num(1);
                sc.sonar.max_range = num(2);
            } else if (key == "cone") {
                need_args(args.size() - 1, 1, name, lineno, "sonar cone");
                sc.sonar.cone_half_angle = deg2rad(num(1));
            } else if (key == "bearings") {
                need_args(args.size() - 1, 6, name, lineno, "sonar bearings");
                for (int i = 0; i < 6; ++i) sc.sonar.bearings[i] = deg2rad(num(1 + i));
            } else {
                throw ParseError(name, lineno, "unknown sonar key '" + key + "'");
            }
        } else if (kw == "control") {
            need_args(args.size(), 2, name, lineno, "control");
            if (args[0] != "rate")
                throw ParseError(name, lineno, "unknown control key '" + args[0] + "'");
            sc.control_rate = num(1);
        } else if (kw == "metrics") {
            need_args(args.size(), 2, name, lineno, "metrics");
            if (args[0] != "obstacle_threshold")
                throw ParseError(name, lineno, "unknown metrics key '" + args[0] + "'");
            sc.metrics.obstacle_threshold = num(1);
        } else {
            throw ParseError(name, lineno, "unknown directive '" + kw + "'");
        }
    }

    // Cross-field validation.
    if (!(sc.dt > 0.0 && sc.dt <= 0.05))
        throw ScenarioInvalid(name + ": dt must lie in (0, 0.05]");
    if (!duration_seen) throw ScenarioInvalid(name + ": missing duration");
    if (!(sc.duration > 0.0)) throw ScenarioInvalid(name + ": duration must be > 0");
    if (sc.segments.empty()) throw ScenarioInvalid(name + ": no path segments");
    if (sc.rulebase_path.empty()) throw ScenarioInvalid(name + ": missing rulebase");
    if (sc.vision.pixel_noise_sigma < 0.0)
        throw ScenarioInvalid(name + ": vision noise must be >= 0");
    if (sc.vision.dropout_probability < 0.0 || sc.vision.dropout_probability >= 1.0)
        throw ScenarioInvalid(name + ": vision dropout must lie in [0, 1)");
    if (sc.vision.window_near_row <= sc.vision.window_far_row)
        throw ScenarioInvalid(name + ": near window row must be below (greater than) far row");
    if (sc.vision.window_far_row < 0 || sc.vision.window_near_row >= sc.vision.sensor_height)
        throw ScenarioInvalid(name + ": window rows must lie within the sensor");
    if (!(sc.sonar.min_range < sc.sonar.max_range))
        throw ScenarioInvalid(name + ": sonar range must have min < max");
    if (sc.vision.rate <= 0.0 || sc.sonar.rate <= 0.0 || sc.control_rate <= 0.0)
        throw ScenarioInvalid(name + ": rates must be > 0");
    if (sc.vehicle.wheel_base <= 0.0 || sc.vehicle.max_wheel_speed <= 0.0)
        throw ScenarioInvalid(name + ": vehicle geometry must be positive");
    if (!(sc.vehicle.motor_zeta > 0.0 && sc.vehicle.motor_zeta < 1.0) ||
        sc.vehicle.motor_omega_n <= 0.0)
        throw ScenarioInvalid(name + ": motor parameters must be underdamped and positive");

    sc.path = build_path(sc.start_pos, sc.start_heading, sc.segments);
    sc.controller = load_controller(sc.rulebase_path);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::string base = std::filesystem::path(path).parent_path().string();
    return parse_scenario_text(read_file(path), path, base);
}

}  // namespace linesim
