#include "frontlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "frontlab/assumptions.hpp"
#include "frontlab/asym_demo.hpp"
#include "frontlab/config.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/front.hpp"
#include "frontlab/report.hpp"
#include "frontlab/spreading.hpp"
#include "frontlab/terrace.hpp"
#include "frontlab/weinberger.hpp"

namespace fs = std::filesystem;

namespace frontlab {

namespace {

std::string num(double x) { return format_number(x); }

std::string utc_stamp(std::time_t when, const char* format) {
    std::tm tm{};
    gmtime_r(&when, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, format);
    return os.str();
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Everything a subcommand needs besides its own outputs.
struct Run {
    RunConfig config;
    std::string command;
    fs::path dir;
    Manifest manifest;
    std::ostream& out;
    std::ostream& err;

    std::string path(const std::string& name) {
        manifest.outputs.push_back(name);
        return (dir / name).string();
    }
    void csv(const std::string& name, const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows) {
        write_csv(path(name), header, rows, "manifest.json");
    }
    void record(const Json& j) {
        const std::string name = "report.jsonl";
        if (std::find(manifest.outputs.begin(), manifest.outputs.end(), name) == manifest.outputs.end())
            manifest.outputs.push_back(name);
        append_json_line((dir / name).string(), j);
    }
    void finish() const {
        std::ofstream m(dir / "manifest.json");
        m << to_json(manifest).dump(2) << '\n';
    }
};

// Problem, lattice, catalog and initializer shared by the front-type commands.
struct Setup {
    ProblemSpec spec;
    CellLattice lattice;
    std::vector<SteadyState> catalog;
    PeriodicField floor;
    PeriodicField ceiling;
    Frame frame;
    WeinbergerOptions weinberger;
    ProfileGrid phi;
};

WeinbergerOptions weinberger_options(const RunConfig& c) {
    WeinbergerOptions w;
    w.tau = c.tau;
    w.window_left = c.window_left;
    w.window_right = c.window_right;
    w.n_max = c.n_max;
    return w;
}

Setup prepare(const RunConfig& c, bool need_phi) {
    Setup s{build_problem(c.recipe), {}, {}, {}, {}, {}, weinberger_options(c), {}};
    s.lattice = make_cell_lattice(s.spec, c.h);
    s.catalog = find_steady_states(
        s.spec, default_seeds(s.spec, s.lattice, c.n_constants, c.n_random, c.seed));
    const SteadyState* lo = nullptr;
    const SteadyState* hi = nullptr;
    for (const auto& q : s.catalog) {
        if (q.stability != Stability::linearly_stable) continue;
        if (!lo || q.profile.mean() < lo->profile.mean()) lo = &q;
        if (!hi || q.profile.mean() > hi->profile.mean()) hi = &q;
    }
    s.floor = lo ? lo->profile : PeriodicField(s.lattice, s.spec.u_floor);
    s.ceiling = hi && hi != lo ? hi->profile : PeriodicField(s.lattice, s.spec.u_ceiling);
    s.frame = make_frame(s.spec, c.direction, c.h);
    if (need_phi) {
        PeriodicField level = s.ceiling;
        for (std::size_t k = 0; k < level.values().size(); ++k)
            level.values()[k] -= c.phi_fraction * (s.ceiling.values()[k] - s.floor.values()[k]);
        s.phi = make_phi(s.spec, s.frame, s.floor, level, s.ceiling, c.phi_width, s.weinberger);
    }
    return s;
}

FrontOptions front_options(const RunConfig& c) {
    FrontOptions f;
    f.weinberger = weinberger_options(c);
    return f;
}

std::vector<std::string> speed_row(const std::string& label, const SpeedEstimate& s) {
    return {label, to_string(s.method), num(s.value), num(s.lower), num(s.upper)};
}

const std::vector<std::string> kSpeedHeader{"label", "method", "value", "lower", "upper"};

void print_speed(std::ostream& out, const std::string& label, const SpeedEstimate& s) {
    out << std::left << std::setw(12) << label << num(s.value) << "  [" << num(s.lower) << ", "
        << num(s.upper) << "]  (" << to_string(s.method) << ")\n";
}

int cmd_speed(Run& run) {
    const RunConfig& c = run.config;
    Setup s = prepare(c, true);
    const CStarResult cs = find_cstar(s.spec, s.phi, c.tol, s.weinberger);
    run.manifest.grid = cs.estimate.grid;
    print_speed(run.out, "c*", cs.estimate);
    std::vector<std::vector<std::string>> rows{speed_row("cstar", cs.estimate)};
    Json rec{{"command", "speed"}, {"cstar", to_json(cs.estimate)}};

    std::vector<std::vector<std::string>> probes;
    for (const auto& p : cs.probes) probes.push_back({num(p.c), to_string(p.result), std::to_string(p.steps)});
    run.csv("probes.csv", {"c", "result", "steps"}, probes);

    bool agree = true;
    if (c.cross_check) {
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < s.floor.values().size(); ++k)
            gap = std::min(gap, s.ceiling.values()[k] - s.floor.values()[k]);
        DatumOptions d;
        d.half_width = c.datum_half_width;
        const InitialCondition datum = heaviside_datum(s.spec, s.frame, s.floor, s.ceiling,
                                                       (1.0 - c.phi_fraction) * gap, d);
        SpreadingOptions so;
        so.t_max = c.spreading_t_max;
        so.sample_dt = c.spreading_sample_dt;
        const SpreadingResult sp = measure_spreading_speed(
            s.spec, datum, 0.5 * (s.floor.mean() + s.ceiling.mean()), so);
        print_speed(run.out, "spreading", sp.estimate);
        rows.push_back(speed_row("spreading", sp.estimate));
        rec["spreading"] = to_json(sp.estimate);
        agree = std::abs(sp.estimate.value - cs.estimate.value) <=
                sp.estimate.radius() + cs.estimate.radius() + c.tol;
        run.out << "agreement   " << (agree ? "yes" : "NO") << '\n';
        rec["agree"] = agree;
        std::vector<std::vector<std::string>> traj;
        for (const auto& p : sp.trajectory) traj.push_back({num(p[0]), num(p[1]), num(p[2])});
        run.csv("spreading_trajectory.csv", {"t", "position", "level"}, traj);
    }
    if (c.recipe.kind == RecipeKind::cubic_bistable) {
        const double a = c.recipe.get("a", 0.25);
        const double oracle = (1.0 - 2.0 * a) / std::sqrt(2.0);
        const bool ok = std::abs(cs.estimate.value - oracle) <= 0.03 * std::abs(oracle) + c.tol;
        run.out << "oracle      " << num(oracle) << "  (" << (ok ? "agrees" : "DISAGREES") << ")\n";
        rows.push_back({"oracle", "travelling_wave_ansatz", num(oracle), num(oracle), num(oracle)});
        rec["oracle"] = oracle;
        rec["oracle_agree"] = ok;
    }
    run.csv("speed.csv", kSpeedHeader, rows);
    run.record(rec);
    return exit_ok;
}

int cmd_front(Run& run) {
    const RunConfig& c = run.config;
    Setup s = prepare(c, true);
    const CStarResult cs = find_cstar(s.spec, s.phi, c.tol, s.weinberger);
    run.manifest.grid = cs.estimate.grid;
    const FrontResult f = extract_front(s.spec, s.lattice, cs.estimate, s.phi, s.ceiling, front_options(c));
    print_speed(run.out, "c*", cs.estimate);
    run.out << "front speed " << num(f.speed) << "\nresidual    " << num(f.residual)
            << "\nleft limit  " << num(f.left_limit_error) << "\np* mean     "
            << num(f.p_star.profile.mean()) << " (" << to_string(f.p_star.stability) << ")\n";
    const std::string profile = run.path("profile.csv");
    write_profile_csv(profile, f.profile);
    std::ofstream(profile, std::ios::app) << "# manifest: manifest.json\n";
    std::vector<std::vector<std::string>> hist;
    for (std::size_t k = 0; k < f.speed_history.size(); ++k)
        hist.push_back({std::to_string(k), num(f.speed_history[k])});
    run.csv("speed_history.csv", {"iteration", "speed"}, hist);
    run.record({{"command", "front"},
                {"cstar", to_json(cs.estimate)},
                {"front_speed", f.speed},
                {"residual", f.residual},
                {"left_limit_error", f.left_limit_error},
                {"p_star", to_json(f.p_star)},
                {"capture_speed", f.capture_speed},
                {"capture_steps", f.capture_steps},
                {"iterations", f.iterations},
                {"zero_speed", f.zero_speed}});
    return exit_ok;
}

std::vector<std::vector<std::string>> terrace_rows(const TerraceReport& r, const std::string& tag) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t j = 0; j < r.speeds.size(); ++j)
        rows.push_back({tag, std::to_string(j + 1), num(r.states[j].profile.mean()),
                        num(r.states[j + 1].profile.mean()), num(r.speeds[j].value),
                        num(r.speeds[j].lower), num(r.speeds[j].upper),
                        j < r.front_speeds.size() ? num(r.front_speeds[j]) : "",
                        j < r.residuals.size() ? num(r.residuals[j]) : ""});
    return rows;
}

const std::vector<std::string> kTerraceHeader{"direction", "front", "upper_mean", "lower_mean",
                                              "cstar", "cstar_lower", "cstar_upper",
                                              "front_speed", "residual"};

void print_terrace(std::ostream& out, const TerraceReport& r, const std::string& tag) {
    out << "terrace along " << tag << ": " << r.floors() << " floor(s)\n";
    out << "  front  upper -> lower       c*          front speed   residual\n";
    for (const auto& row : terrace_rows(r, tag))
        out << "  " << std::setw(5) << row[1] << "  " << std::setw(7) << row[2] << " -> "
            << std::setw(9) << row[3] << "  " << std::setw(10) << row[4] << "  " << std::setw(12)
            << row[7] << "  " << row[8] << '\n';
    out << "  ordered " << (r.ordered ? "yes" : "no") << ", bracketing "
        << (r.bracketing_ok ? "yes" : "no") << ", residuals " << (r.residuals_ok ? "ok" : "LARGE")
        << '\n';
}

int cmd_terrace(Run& run) {
    const RunConfig& c = run.config;
    Setup s = prepare(c, false);
    TerraceOptions t;
    t.front = front_options(c);
    t.h = c.h;
    t.tol = c.tol;
    t.phi_width = c.phi_width;
    const std::string tag = std::to_string(c.direction.m) + "," + std::to_string(c.direction.n);
    TerraceReport r;
    int code = exit_ok;
    try {
        r = build_terrace(s.spec, s.lattice, c.direction, s.catalog, t);
    } catch (const TerraceError& e) {
        r = e.partial();
        run.err << "terrace incomplete: " << e.what() << '\n';
        code = exit_inconclusive;
    }
    if (!r.speeds.empty()) run.manifest.grid = r.speeds.front().grid;
    print_terrace(run.out, r, tag);
    run.csv("terrace.csv", kTerraceHeader, terrace_rows(r, tag));
    run.record({{"command", "terrace"}, {"terrace", to_json(r)}});
    return code;
}

int cmd_eigen(Run& run) {
    const RunConfig& c = run.config;
    Setup s = prepare(c, false);
    run.manifest.grid.h_s = s.lattice.h[0];
    run.manifest.grid.h_r = s.lattice.h[1];
    std::vector<std::vector<std::string>> rows;
    run.out << "index  mean        lambda        stability\n";
    Json states = Json::array();
    for (std::size_t k = 0; k < s.catalog.size(); ++k) {
        const SteadyState& q = s.catalog[k];
        const double mean = q.profile.mean();
        const std::string fu = s.spec.homogeneous() ? num(s.spec.reaction_du({0.0, 0.0}, mean)) : "";
        rows.push_back({std::to_string(k), num(mean), num(q.residual), num(q.lambda), fu,
                        to_string(q.stability), q.polished ? "true" : "false"});
        run.out << std::left << std::setw(7) << k << std::setw(12) << num(mean) << std::setw(14)
                << num(q.lambda) << to_string(q.stability) << '\n';
        states.push_back(to_json(q));
    }
    run.csv("states.csv", {"index", "mean", "residual", "lambda", "f_u_at_mean", "stability", "polished"},
            rows);
    run.record({{"command", "eigen"}, {"states", states}});
    return exit_ok;
}

int cmd_counterprop(Run& run) {
    const RunConfig& c = run.config;
    Setup s = prepare(c, false);
    CounterPropagationOptions o;
    o.h = c.h;
    o.delta_fraction = c.delta_fraction;
    o.spreading.t_max = c.counterprop_t_max;
    o.spreading.sample_dt = c.spreading_sample_dt;
    o.datum.half_width = c.datum_half_width;
    const AssumptionReport r = check_assumptions(s.spec, s.catalog, c.direction, true, o);
    run.out << "class       " << to_string(r.label) << '\n';
    std::vector<std::vector<std::string>> rows;
    for (const auto& cp : r.counter) {
        const double q = s.catalog[cp.state_index].profile.mean();
        run.out << "state " << cp.state_index << " (mean " << num(q) << "): c_bar " << num(cp.c_bar.value)
                << ", c_under " << num(cp.c_under.value) << " -> " << (cp.pass ? "pass" : "FAIL") << '\n';
        rows.push_back({std::to_string(cp.state_index), num(q), num(cp.c_bar.value), num(cp.c_bar.lower),
                        num(cp.c_bar.upper), num(cp.c_under.value), num(cp.c_under.lower),
                        num(cp.c_under.upper), cp.pass ? "true" : "false"});
    }
    for (const auto& n : r.notes) run.out << "note: " << n << '\n';
    run.csv("counterprop.csv",
            {"state", "mean", "c_bar", "c_bar_lower", "c_bar_upper", "c_under", "c_under_lower",
             "c_under_upper", "pass"},
            rows);
    run.record({{"command", "counterprop"}, {"assumptions", to_json(r, s.catalog)}});
    const bool ok = r.label != ProblemClass::indeterminate && r.counter_propagation_ok;
    run.out << "audit       " << (ok ? "passed" : "FAILED") << '\n';
    return ok ? exit_ok : exit_audit_failure;
}

int cmd_refine(Run& run) {
    const RunConfig& c = run.config;
    Setup s = prepare(c, true);
    const TimeStepReport r =
        refine_time_step(s.spec, s.lattice, s.phi, s.ceiling, c.taus, c.refine_tol, front_options(c));
    if (!r.entries.empty()) run.manifest.grid = r.entries.front().cstar.grid;
    std::vector<std::vector<std::string>> rows;
    run.out << "tau        c*          front speed   displacement\n";
    for (const auto& e : r.entries) {
        run.out << std::left << std::setw(11) << num(e.tau) << std::setw(12) << num(e.cstar.value)
                << std::setw(14) << num(e.front_speed) << num(e.displacement) << '\n';
        rows.push_back({num(e.tau), num(e.cstar.value), num(e.cstar.lower), num(e.cstar.upper),
                        num(e.front_speed), num(e.displacement)});
    }
    for (std::size_t k = 0; k < r.ratio_errors.size(); ++k)
        run.out << "ratio error " << k + 1 << ": " << num(r.ratio_errors[k]) << '\n';
    run.out << "speed spread " << num(r.speed_spread) << '\n';
    run.csv("refine.csv", {"tau", "cstar", "cstar_lower", "cstar_upper", "front_speed", "displacement"},
            rows);
    run.record({{"command", "refine"}, {"refine", to_json(r)}});
    return exit_ok;
}

void write_demo_outputs(Run& run, const DemoReport& r) {
    std::vector<std::vector<std::string>> m;
    for (const auto& s : r.m.trace)
        m.push_back({num(s.M), num(s.e1.value), num(s.e1.lower), num(s.e1.upper), num(s.e2.value),
                     num(s.e2.lower), num(s.e2.upper)});
    run.csv("m_trace.csv", {"M", "c_e1", "c_e1_lower", "c_e1_upper", "c_e2", "c_e2_lower", "c_e2_upper"}, m);
    std::vector<std::vector<std::string>> mp;
    for (const auto& [a, b] : r.mprime.trace) mp.push_back({num(a), num(b)});
    run.csv("mprime_trace.csv", {"Mprime", "speed"}, mp);
    std::vector<std::vector<std::string>> fronts;
    for (const auto& d : r.directions)
        for (auto& row : terrace_rows(d.terrace, d.name)) fronts.push_back(row);
    run.csv("terrace_fronts.csv", kTerraceHeader, fronts);
    std::ofstream(run.path("demo.json")) << to_json(r).dump(2) << '\n';
    run.record({{"command", "asym-demo"}, {"demo", to_json(r)}});
}

void print_demo(std::ostream& out, const DemoReport& r) {
    out << "L " << num(r.L) << ", eps " << num(r.eps) << ", S " << num(r.S) << '\n';
    if (!r.m.trace.empty()) {
        const DirectionalSpeeds& s = r.m.trace.back();
        out << "M " << num(s.M) << ": c(e1) " << num(s.e1.value) << ", c(e2) " << num(s.e2.value)
            << " (threshold " << num(r.m.threshold) << ")\n";
    }
    if (r.c > 0.0)
        out << "c " << num(r.c) << ", M' " << num(r.mprime.Mprime) << " (speed " << num(r.mprime.speed)
            << ")\n";
    for (const auto& d : r.directions) print_terrace(out, d.terrace, d.name);
    out << "direction  floors\n";
    for (const auto& d : r.directions) out << d.name << "         " << d.terrace.floors() << '\n';
    out << "c(e2) <= 2L/tau = " << num(r.bound) << ": " << (r.bound_holds ? "yes" : "NO") << '\n';
    out << "floor counts differ: " << (r.counts_differ ? "yes" : "no") << '\n';
    if (!r.two_floor_direction.empty())
        out << "two floors along " << r.two_floor_direction << ", ordered "
            << (r.two_floor_ordered ? "yes" : "no") << '\n';
    for (const auto& n : r.notes) out << "note: " << n << '\n';
    out << "result: " << (r.ok() ? "ok" : "NOT VERIFIED") << " (stage " << r.stage << ")\n";
}

int cmd_asym_demo(Run& run, bool smoke) {
    const RunConfig& c = run.config;
    DemoOptions o = smoke || c.demo_preset == "smoke" ? DemoOptions::smoke() : DemoOptions::full();
    o.L = c.demo_L;
    o.eps = c.demo_eps;
    o.gap = c.demo_gap;
    o.rule = c.demo_rule == "analytic_bound" ? SeparationRule::analytic_bound : SeparationRule::measured;
    o.progress = [&run](const std::string& stage) { run.err << "stage " << stage << '\n'; };
    run.manifest.grid.h_s = o.h;
    run.manifest.grid.tau = o.front.weinberger.tau;
    DemoReport r;
    int code = exit_ok;
    try {
        r = run_asymmetric_demo(o);
    } catch (const DemoError& e) {
        r = e.partial();
        run.err << "demo aborted: " << e.what() << '\n';
        code = exit_inconclusive;
    }
    print_demo(run.out, r);
    write_demo_outputs(run, r);
    if (code == exit_ok && !r.ok()) code = exit_inconclusive;
    return code;
}

int dispatch(Run& run, const CliFlags& flags) {
    const std::string& cmd = run.command;
    if (cmd == "speed") return cmd_speed(run);
    if (cmd == "front") return cmd_front(run);
    if (cmd == "terrace") return cmd_terrace(run);
    if (cmd == "eigen") return cmd_eigen(run);
    if (cmd == "counterprop") return cmd_counterprop(run);
    if (cmd == "asym-demo") return cmd_asym_demo(run, flags.smoke);
    if (cmd == "refine") return cmd_refine(run);
    throw ConfigurationError("unknown command '" + cmd + "'");
}

fs::path output_base(const RunConfig& c, const CliFlags& flags) {
    if (!flags.output_dir.empty()) return flags.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return c.output_directory;
}

}  // namespace

const std::vector<std::string>& cli_commands() {
    static const std::vector<std::string> commands{"speed",       "front",     "terrace", "eigen",
                                                   "counterprop", "asym-demo", "refine"};
    return commands;
}

std::string run_directory_name(std::time_t when, const std::string& hash, const std::string& command) {
    return utc_stamp(when, "%Y%m%d-%H%M%S") + "-" + hash.substr(0, 12) + "-" + command;
}

int run_command(const std::string& command, const std::string& config_path, const CliFlags& flags,
                std::ostream& out, std::ostream& err) {
    const auto& cmds = cli_commands();
    if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) {
        err << "unknown command '" << command << "'\n";
        return exit_usage;
    }
    RunConfig config;
    std::string text;
    try {
        text = read_text(config_path);
        config = parse_config(text);
    } catch (const ConfigurationError& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_usage;
    }
    const std::string hash = config_hash(config);
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    fs::path dir = output_base(config, flags) / run_directory_name(now, hash, command);
    for (int k = 2; fs::exists(dir); ++k)
        dir = output_base(config, flags) / (run_directory_name(now, hash, command) + "-" + std::to_string(k));
    fs::create_directories(dir);
    std::ofstream(dir / "config.ini") << text;

    Run run{config, command, dir, {}, out, err};
    run.manifest.command = command;
    run.manifest.config_hash = hash;
    run.manifest.config_text = text;
    run.manifest.seed = config.seed;
    run.manifest.started = utc_stamp(now, "%Y-%m-%dT%H:%M:%SZ");
    run.manifest.grid.h_s = config.h;
    run.manifest.grid.tau = config.tau;
    run.manifest.grid.window_min = -config.window_left;
    run.manifest.grid.window_max = config.window_right;
    run.manifest.outputs.push_back("config.ini");

    int code = exit_ok;
    try {
        code = dispatch(run, flags);
    } catch (const StructuralError& e) {
        err << "assumption failure: " << e.what() << '\n';
        code = exit_audit_failure;
    } catch (const InitializerError& e) {
        err << "assumption failure: " << e.what() << '\n';
        code = exit_audit_failure;
    } catch (const ConfigurationError& e) {
        err << "configuration error: " << e.what() << '\n';
        code = exit_usage;
    } catch (const ParameterError& e) {
        err << "configuration error: " << e.what() << '\n';
        code = exit_usage;
    } catch (const ConstructionError& e) {
        err << "configuration error: " << e.what() << '\n';
        code = exit_usage;
    } catch (const std::exception& e) {
        err << "inconclusive: " << e.what() << '\n';
        code = exit_inconclusive;
    }
    run.finish();
    out << "run directory " << dir.string() << '\n';
    return code;
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Front speeds, travelling fronts and terraces of periodic reaction-diffusion equations"};
    app.require_subcommand(1);
    std::string config_path;
    CliFlags flags;
    const std::map<std::string, std::string> help{
        {"speed", "critical speed by bisection, with a spreading cross-check"},
        {"front", "extract the travelling front and its fixed-point residual"},
        {"terrace", "build the terrace of fronts between the extremal stable states"},
        {"eigen", "steady-state catalog with principal eigenvalues"},
        {"counterprop", "audit the intermediate states by counter-propagation"},
        {"asym-demo", "layered example whose terrace depends on the direction"},
        {"refine", "time-step refinement study"},
    };
    std::string chosen;
    for (const auto& name : cli_commands()) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("-c,--config", config_path, "config file")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--output-dir", flags.output_dir, "base directory for run outputs");
        if (name == "asym-demo") sub->add_flag("--smoke", flags.smoke, "coarse preset");
        sub->callback([&chosen, name] { chosen = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }
    return run_command(chosen, config_path, flags, std::cout, std::cerr);
}

}  // namespace frontlab
