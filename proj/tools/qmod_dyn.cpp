// qmod-dyn: figures, sweeps and raw trajectories for the frequency-modulated
// qubit in a Lorentzian reservoir.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qmod/amplitude.hpp"
#include "qmod/config.hpp"
#include "qmod/errors.hpp"
#include "qmod/figures.hpp"

using namespace qmod;

namespace {

struct CommonFlags {
    ParamOverrides params;
    std::optional<std::string> units;
    std::optional<std::string> out_dir;
    std::optional<std::string> config;
    std::optional<unsigned> jobs;
    bool svg = false;
    bool exact_segments = false;
};

void add_model_flags(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--gamma", f.params.gamma, "Coupling strength gamma");
    cmd->add_option("--lambda", f.params.lambda, "Spectral width lambda");
    cmd->add_option("--delta", f.params.delta, "Modulation amplitude delta");
    cmd->add_option("--omega", f.params.omega, "Modulation frequency Omega");
    cmd->add_option("--theta", f.params.theta, "Initial polar angle (rad)");
    cmd->add_option("--phi", f.params.phi, "Initial azimuth (rad)");
    cmd->add_option("--tau-max", f.params.tau_max, "Largest time, in the figure's units");
    cmd->add_option("--points", f.params.points, "Solver grid points (default: 2001 per 10 time units)");
    cmd->add_option("--units", f.units, "Time unit: gamma, lambda or absolute");
    cmd->add_option("--config", f.config, "INI config file; flags take precedence");
}

void add_output_flags(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--out-dir", f.out_dir, "Output directory");
    cmd->add_option("--jobs", f.jobs, "Worker threads for sweeps (default $QMOD_DYN_JOBS or 1)");
}

unsigned env_jobs()
{
    if (const char* env = std::getenv("QMOD_DYN_JOBS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw ValidationError("QMOD_DYN_JOBS", std::string("expected a positive integer, got '") + env + "'");
    }
    return 1;
}

ConfigFile load_optional_config(const CommonFlags& f)
{
    return f.config ? load_config(*f.config) : ConfigFile{};
}

ParamOverrides cli_overrides(const CommonFlags& f)
{
    ParamOverrides o = f.params;
    if (f.units) o.unit = parse_time_unit(*f.units);
    return o;
}

unsigned resolve_jobs(const CommonFlags& f, const ConfigFile& cfg)
{
    const unsigned jobs = f.jobs ? *f.jobs : cfg.jobs ? *cfg.jobs : env_jobs();
    if (jobs == 0) throw ValidationError("jobs", "must be >= 1");
    return jobs;
}

int run_figures(const std::string& which, const CommonFlags& f)
{
    const ConfigFile cfg = load_optional_config(f);
    const ParamOverrides cli = cli_overrides(f);
    const ParamOverrides all = cfg.params.merged(cli);

    std::vector<FigureId> ids;
    if (which == "all")
        ids = all_figure_ids();
    else
        ids.push_back(parse_figure_id(which));

    for (FigureId id : ids) {
        FigureSpec spec = default_figure(id);
        std::map<std::string, ParamOverrides> per_panel;
        for (const auto& [name, o] : cfg.panels) {
            const bool known = std::any_of(spec.panels.begin(), spec.panels.end(),
                                           [&](const Panel& p) { return p.name == name; });
            if (known || which != "all")
                per_panel[name] = o.merged(cli);
        }
        apply_overrides(spec, all, per_panel);
        spec.out_dir = f.out_dir ? *f.out_dir : cfg.out_dir.value_or(".");
        spec.svg = f.svg || cfg.svg.value_or(false);
        spec.mode = (f.exact_segments || cfg.exact_segments.value_or(false)) ? SegmentMode::ExactSegments
                                                                               : SegmentMode::TimeHomogeneous;
        spec.jobs = resolve_jobs(f, cfg);

        const auto start = std::chrono::steady_clock::now();
        const auto files = run_figure(spec);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto& path : files)
            std::cout << path.string() << '\n';
        std::fprintf(stderr, "%s: %zu files in %.2f s\n", std::string(to_string(id)).c_str(), files.size(), secs);
    }
    return 0;
}

struct SweepFlags {
    std::optional<std::string> scenario;
    std::optional<double> axis_start, axis_stop, axis_step, eps;
    std::optional<std::string> taus;
    std::optional<std::string> out;
    bool refine = false;
};

int run_sweep_command(const CommonFlags& f, const SweepFlags& s)
{
    const ConfigFile cfg = load_optional_config(f);
    const ParamOverrides o = cfg.params.merged(cli_overrides(f));

    SweepConfig config;
    config.scenario = parse_scenario(s.scenario ? *s.scenario : cfg.scenario.value_or("excited"));
    config.base.lambda = o.lambda.value_or(1.0);
    config.base.delta = o.delta.value_or(0.0);
    config.base.omega_mod = o.omega.value_or(0.0);
    config.base.unit = o.unit.value_or(TimeUnit::Absolute);
    if (o.gamma || o.theta || o.phi)
        std::fprintf(stderr, "note: --gamma, --theta and --phi are set by the sweep axis and scenario\n");
    config.axis_start = s.axis_start ? *s.axis_start : cfg.axis_start.value_or(config.axis_start);
    config.axis_stop = s.axis_stop ? *s.axis_stop : cfg.axis_stop.value_or(config.axis_stop);
    config.axis_step = s.axis_step ? *s.axis_step : cfg.axis_step.value_or(config.axis_step);
    if (s.taus)
        config.taus = parse_number_list(*s.taus, "taus");
    else if (cfg.taus)
        config.taus = *cfg.taus;
    config.options.eps = s.eps ? *s.eps : cfg.eps.value_or(config.options.eps);
    config.options.refine_transitions = s.refine || cfg.refine.value_or(false);
    config.options.jobs = resolve_jobs(f, cfg);

    const CsvTable table = run_sweep(config);
    if (s.out && *s.out == "-") {
        std::cout << table.str();
        return 0;
    }
    const std::filesystem::path dir = f.out_dir ? *f.out_dir : cfg.out_dir.value_or(".");
    const std::filesystem::path path =
        s.out ? std::filesystem::path(*s.out) : dir / ("sweep_" + std::string(to_string(config.scenario)) + ".csv");
    table.save(path);
    std::cout << path.string() << '\n';
    return 0;
}

int run_solve(const CommonFlags& f, const std::string& solver, const std::optional<std::string>& out)
{
    const ConfigFile cfg = load_optional_config(f);
    const ParamOverrides o = cfg.params.merged(cli_overrides(f));
    ModelParams p;
    p.gamma = o.gamma.value_or(p.gamma);
    p.lambda = o.lambda.value_or(p.lambda);
    p.delta = o.delta.value_or(p.delta);
    p.omega_mod = o.omega.value_or(p.omega_mod);
    p.theta = o.theta.value_or(p.theta);
    p.phi = o.phi.value_or(p.phi);
    p.unit = o.unit.value_or(p.unit);
    p.validate();
    const double tau_max = o.tau_max.value_or(10.0);
    if (!(tau_max > 0.0)) throw ValidationError("tau-max", "must be > 0");
    const double t_end = tau_max / p.time_scale();
    const std::size_t n = o.points.value_or(default_points(p, t_end));
    if (n < 2) throw ValidationError("points", "must be >= 2");

    AmplitudeTrajectory traj;
    const Tolerances tol;
    if (solver == "ode-reform")
        traj = solve_ode_reform(p, t_end, n, tol);
    else if (solver == "volterra-quadrature")
        traj = solve_volterra(p, t_end, n);
    else if (solver == "analytic-unmodulated")
        traj = sample_unmodulated(p, t_end, n);
    else
        throw ValidationError("solver", "expected ode-reform, volterra-quadrature or analytic-unmodulated");

    CsvTable table;
    table.comment(std::string("qmod-dyn ") + QMOD_VERSION);
    table.comment("params: " + p.describe());
    table.comment("solver: " + std::string(to_string(traj.solver_tag)) + " rel=" + format_double(tol.rel) +
                  " abs=" + format_double(tol.abs));
    table.comment("grid: t in [0, " + format_double(t_end) + "], " + std::to_string(n) + " points");
    table.header({"t", "re_c", "im_c", "re_c_dot", "im_c_dot", "population"});
    for (std::size_t k = 0; k < traj.size(); ++k)
        table.row({traj.times[k], traj.c[k].real(), traj.c[k].imag(), traj.c_dot[k].real(), traj.c_dot[k].imag(),
                   std::norm(traj.c[k])});
    if (!out || *out == "-") {
        std::cout << table.str();
    } else {
        const std::filesystem::path dir = f.out_dir ? *f.out_dir : cfg.out_dir.value_or(".");
        const std::filesystem::path path = std::filesystem::path(*out).is_absolute() ? std::filesystem::path(*out) : dir / *out;
        table.save(path);
        std::cout << path.string() << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Frequency-modulated qubit in a leaky cavity: witnesses, speed limits, non-Markovianity"};
    app.set_version_flag("--version", std::string("qmod-dyn ") + QMOD_VERSION);
    app.require_subcommand(1);

    CommonFlags fig_flags;
    std::string figure_id;
    auto* fig = app.add_subcommand("figure", "Write the CSV (and SVG) files of one figure, or all of them");
    fig->add_option("id", figure_id, "fig2, fig3, qslt-tau-excited, qslt-gamma-excited, deriv-excited, "
                                     "qslt-tau-superpos, qslt-gamma-superpos, deriv-superpos or all")
        ->required();
    add_model_flags(fig, fig_flags);
    add_output_flags(fig, fig_flags);
    fig->add_flag("--svg", fig_flags.svg, "Also write SVG plots");
    fig->add_flag("--exact-segments", fig_flags.exact_segments,
                  "Re-solve the second half-interval after a blind measurement");

    CommonFlags sweep_flags;
    SweepFlags sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Speed metrics versus gamma/lambda in long CSV format");
    add_model_flags(sweep, sweep_flags);
    add_output_flags(sweep, sweep_flags);
    sweep->add_option("--scenario", sweep_opts.scenario, "excited or superposition");
    sweep->add_option("--axis-start", sweep_opts.axis_start, "First gamma/lambda value");
    sweep->add_option("--axis-stop", sweep_opts.axis_stop, "Last gamma/lambda value");
    sweep->add_option("--axis-step", sweep_opts.axis_step, "gamma/lambda step");
    sweep->add_option("--taus", sweep_opts.taus, "Driving times: 0.4,0.6,0.8 or start:stop:step");
    sweep->add_option("--eps", sweep_opts.eps, "Threshold on N and on 1 - ratio");
    sweep->add_flag("--refine", sweep_opts.refine, "Bisect each transition between grid values");
    sweep->add_option("--out", sweep_opts.out, "Output file ('-' for stdout)");

    int bessel_order = 0;
    double bessel_omega = 0.0;
    auto* tune = app.add_subcommand("tune-bessel", "Print delta = j_{n,1} * Omega");
    tune->add_option("n", bessel_order, "Bessel order")->required();
    tune->add_option("--omega", bessel_omega, "Modulation frequency")->required();

    CommonFlags solve_flags;
    std::string solver = "ode-reform";
    std::optional<std::string> solve_out;
    auto* solve = app.add_subcommand("solve", "Dump C(t) and C'(t) on a uniform grid");
    add_model_flags(solve, solve_flags);
    solve->add_option("--out-dir", solve_flags.out_dir, "Output directory");
    solve->add_option("--solver", solver, "ode-reform, volterra-quadrature or analytic-unmodulated");
    solve->add_option("--out", solve_out, "Output file ('-' for stdout, the default)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fig->parsed()) return run_figures(figure_id, fig_flags);
        if (sweep->parsed()) return run_sweep_command(sweep_flags, sweep_opts);
        if (tune->parsed()) {
            std::printf("%.17g\n", tune_bessel(bessel_order, bessel_omega));
            return 0;
        }
        if (solve->parsed()) return run_solve(solve_flags, solver, solve_out);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: invalid %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const SweepError& e) {
        std::fprintf(stderr, "error: sweep failed at %s\n", e.what());
        return 4;
    } catch (const SolverFailure& e) {
        std::fprintf(stderr, "error: solver failed: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
