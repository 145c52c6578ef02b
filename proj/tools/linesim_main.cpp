#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include "linesim/fuzzy_io.hpp"
#include "linesim/sim.hpp"
#include "linesim/util.hpp"

namespace fs = std::filesystem;
using namespace linesim;

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct RunOptions {
    std::vector<std::string> scenarios;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> duration;
    unsigned jobs = 1;
};

struct RunOutcome {
    std::string text;   // stdout block, printed in input order
    int exit_code = 0;  // 0 ok, 2 failure events
};

RunOutcome run_one(const std::string& path, const RunOptions& opt) {
    Scenario sc = load_scenario(path);
    if (opt.seed) sc.seed = *opt.seed;
    if (opt.dt) {
        if (!(*opt.dt > 0.0 && *opt.dt <= 0.05))
            throw ScenarioInvalid("--dt must lie in (0, 0.05]");
        sc.dt = *opt.dt;
    }
    if (opt.duration) {
        if (!(*opt.duration > 0.0))
            throw ScenarioInvalid("--duration must be > 0");
        sc.duration = *opt.duration;
    }

    RunResult rr = run_simulation(sc);
    Metrics m = compute_metrics(rr, sc);

    fs::path out(opt.out_dir);
    fs::path traj = out / (sc.name + "_trajectory.csv");
    fs::path metr = out / (sc.name + "_metrics.txt");
    fs::path evts = out / (sc.name + "_events.txt");
    std::string metrics_block = metrics_text(m, sc, rr.reason);
    write_file_atomic(traj.string(), trajectory_csv(rr));
    write_file_atomic(metr.string(), metrics_block);
    write_file_atomic(evts.string(), events_text(rr));

    RunOutcome oc;
    oc.text = metrics_block;
    oc.text += "wrote: " + traj.string() + "\n";
    oc.text += "wrote: " + metr.string() + "\n";
    oc.text += "wrote: " + evts.string() + "\n";
    oc.exit_code = (m.line_cross > 0 || m.collision > 0) ? 2 : 0;
    return oc;
}

int cmd_run(const RunOptions& opt) {
    std::vector<RunOutcome> outcomes(opt.scenarios.size());
    if (opt.jobs > 1 && opt.scenarios.size() > 1) {
        std::vector<std::future<RunOutcome>> futs;
        futs.reserve(opt.scenarios.size());
        for (const auto& s : opt.scenarios)
            futs.push_back(std::async(std::launch::async, run_one, s, std::cref(opt)));
        for (size_t i = 0; i < futs.size(); ++i) outcomes[i] = futs[i].get();
    } else {
        for (size_t i = 0; i < opt.scenarios.size(); ++i)
            outcomes[i] = run_one(opt.scenarios[i], opt);
    }
    int code = 0;
    for (const auto& oc : outcomes) {
        std::cout << oc.text;
        code = std::max(code, oc.exit_code);
    }
    return code;
}

int cmd_calibrate(const std::string& points_path) {
    CalibrationSet set = parse_correspondences(points_path);
    CalibrationReport rep = calibrate(set);
    const CameraModel& m = rep.model;
    std::cout << "coefficients:\n";
    std::cout << "a11 = " << fmt12(m.a11) << "\na12 = " << fmt12(m.a12) << "\na13 = "
              << fmt12(m.a13) << "\na14 = " << fmt12(m.a14) << "\n";
    std::cout << "a21 = " << fmt12(m.a21) << "\na22 = " << fmt12(m.a22) << "\na23 = "
              << fmt12(m.a23) << "\na24 = " << fmt12(m.a24) << "\n";
    std::cout << "residuals_px:\n";
    for (size_t i = 0; i < rep.residual_x.size(); ++i)
        std::cout << "point " << (i + 1) << ": dx=" << fmt12(rep.residual_x[i])
                  << " dy=" << fmt12(rep.residual_y[i]) << "\n";
    std::cout << "rms_px: " << fmt12(rep.rms) << "\n";
    return 0;
}

int cmd_fuzzy_eval(const std::string& rulebase, const std::vector<double>& vals) {
    FuzzyController ctrl = load_controller(rulebase);
    InferResult res = ctrl.infer(vals);
    const char* names[3] = {"steer_bias", "left_speed", "right_speed"};
    for (int i = 0; i < 3; ++i)
        std::cout << names[i] << ": " << fmt12(res.outputs[i])
                  << " no_rule_fired: " << (res.no_rule_fired[i] ? 1 : 0) << "\n";
    return 0;
}

int cmd_plot_data(const std::string& traj_path, const std::string& out_dir) {
    std::istringstream stream(read_file(traj_path));
    std::string header;
    if (!std::getline(stream, header))
        throw ParseError(traj_path, 1, "empty trajectory file");

    std::vector<std::string> cols;
    {
        std::istringstream hs(header);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(trim(c));
    }
    auto col = [&](const std::string& name) {
        for (size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return (int)i;
        throw ParseError(traj_path, 1, "missing column '" + name + "'");
    };
    const int c_t = col("t"), c_x = col("x"), c_y = col("y"), c_angle = col("angle");
    const int c_l = col("left_speed"), c_r = col("right_speed");

    std::string path_xy = "x,y\n";
    std::string heading_err = "t,heading_error_deg\n";
    std::string wheels = "t,left_speed,right_speed\n";
    std::string line;
    int lineno = 1;
    while (std::getline(stream, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) f.push_back(tok);
        if (f.size() < cols.size())
            throw ParseError(traj_path, lineno, "short row");
        const double t = parse_num(f[c_t], traj_path, lineno);
        const double angle = parse_num(f[c_angle], traj_path, lineno);
        path_xy += f[c_x] + "," + f[c_y] + "\n";
        // The onboard estimate: the line angle seen by the camera is the
        // negated heading error relative to the path.
        heading_err += format_full(t) + "," + format_full(-rad2deg(angle)) + "\n";
        wheels += f[c_t] + "," + f[c_l] + "," + f[c_r] + "\n";
    }

    fs::path out(out_dir);
    write_file_atomic((out / "path_xy.csv").string(), path_xy);
    write_file_atomic((out / "heading_error_t.csv").string(), heading_err);
    write_file_atomic((out / "wheel_speeds_t.csv").string(), wheels);
    std::cout << "wrote: " << (out / "path_xy.csv").string() << "\n";
    std::cout << "wrote: " << (out / "heading_error_t.csv").string() << "\n";
    std::cout << "wrote: " << (out / "wheel_speeds_t.csv").string() << "\n";
    return 0;
}

int cmd_validate(const std::string& path) {
    fs::path p(path);
    if (p.extension() == ".frb") {
        RuleBaseDoc doc = parse_rulebase(path);
        auto diags = validate_rulebase(doc);
        int errors = 0;
        for (const auto& d : diags) {
            bool err = d.severity == Diagnostic::Severity::Error;
            errors += err;
            std::cout << path << (d.line > 0 ? ":" + std::to_string(d.line) : "") << ": "
                      << (err ? "error: " : "warning: ") << d.message << "\n";
        }
        std::cout << (errors ? "invalid" : "ok") << ": " << path << " ("
                  << std::to_string(diags.size()) << " diagnostic(s))\n";
        return errors ? 1 : 0;
    }
    if (p.extension() == ".scn") {
        Scenario sc = load_scenario(path);
        auto diags = validate_rulebase(parse_rulebase(sc.rulebase_path));
        int errors = 0;
        for (const auto& d : diags) {
            bool err = d.severity == Diagnostic::Severity::Error;
            errors += err;
            std::cout << sc.rulebase_path
                      << (d.line > 0 ? ":" + std::to_string(d.line) : "") << ": "
                      << (err ? "error: " : "warning: ") << d.message << "\n";
        }
        if (errors) {
            std::cout << "invalid: " << path << "\n";
            return 1;
        }
        std::cout << "ok: " << path << " (path length " +
                         format_short(sc.path.total_length()) + " m, " +
                         std::to_string(sc.obstacles.size()) + " obstacle(s))\n";
        return 0;
    }
    throw ParseError(path, 0, "unknown file type (expected .scn or .frb)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "linesim: closed-loop simulator of a vision-guided, fuzzy-controlled\n"
        "differential-drive line follower.\n"
        "Configuration precedence: CLI overrides > scenario file > built-in defaults.\n"
        "Angles in scenario files are degrees; rule-base files use the physical\n"
        "units of each variable (the bundled controller: m, rad, m, m, m, m/s)."};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Run scenario file(s) and write trajectory/"
                                          "metrics/events outputs");
    run->add_option("scenario", run_opt.scenarios, "scenario file(s) (.scn)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", run_opt.out_dir, "output directory (default: out)")
        ->envname("LINESIM_OUT_DIR");
    std::uint64_t seed_val = 0;
    auto* seed_opt = run->add_option("--seed", seed_val, "override the scenario seed");
    double dt_val = 0, dur_val = 0;
    auto* dt_opt = run->add_option("--dt", dt_val, "override the physics step (s)");
    auto* dur_opt = run->add_option("--duration", dur_val, "override the duration (s)");
    run->add_option("--jobs", run_opt.jobs, "run scenarios concurrently");

    std::string cal_points;
    auto* cal = app.add_subcommand("calibrate",
                                   "Least-squares camera calibration from a "
                                   "correspondence file (xg yg zg xpi ypi [weight])");
    cal->add_option("points", cal_points, "correspondence file")->required();

    std::string fe_rulebase;
    std::vector<double> fe_inputs;
    auto* fe = app.add_subcommand("fuzzy-eval",
                                  "Evaluate the controller once: inputs are offset (m), "
                                  "angle (rad), sonar left/center/right (m), speed_ref (m/s)");
    fe->add_option("rulebase", fe_rulebase, "rule-base file (.frb)")->required();
    fe->add_option("inputs", fe_inputs, "six input values")->required()->expected(6);

    std::string pd_traj, pd_out = "out";
    auto* pd = app.add_subcommand("plot-data",
                                  "Emit plot-ready CSVs from a trajectory CSV: "
                                  "path_xy, heading_error_t, wheel_speeds_t");
    pd->add_option("trajectory", pd_traj, "trajectory CSV from `run`")->required();
    pd->add_option("--out", pd_out, "output directory (default: out)")
        ->envname("LINESIM_OUT_DIR");

    std::string val_path;
    auto* val = app.add_subcommand("validate", "Lint a scenario (.scn) or rule base (.frb)");
    val->add_option("file", val_path, "file to check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;  // normalize usage errors to exit 1
    }

    try {
        if (run->parsed()) {
            if (seed_opt->count()) run_opt.seed = seed_val;
            if (dt_opt->count()) run_opt.dt = dt_val;
            if (dur_opt->count()) run_opt.duration = dur_val;
            return cmd_run(run_opt);
        }
        if (cal->parsed()) return cmd_calibrate(cal_points);
        if (fe->parsed()) return cmd_fuzzy_eval(fe_rulebase, fe_inputs);
        if (pd->parsed()) return cmd_plot_data(pd_traj, pd_out);
        if (val->parsed()) return cmd_validate(val_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
