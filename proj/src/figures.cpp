#include "qmod/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "qmod/bessel.hpp"
#include "qmod/errors.hpp"

#ifndef QMOD_VERSION
#define QMOD_VERSION "dev"
#endif

namespace qmod {

namespace {

constexpr double kPi = std::numbers::pi;

struct Modulation {
    const char* name;
    const char* label;
    double omega;
    double delta;
    std::optional<int> bessel_order;
};

// modulation settings shared by the speed-limit figures
const std::vector<Modulation>& speed_modulations()
{
    static const std::vector<Modulation> mods = {
        {"unmodulated", "Omega=0, delta=0", 0.0, 0.0, std::nullopt},
        {"omega5_delta10", "Omega=5, delta=10", 5.0, 10.0, std::nullopt},
        {"omega5_bessel0", "Omega=5, delta=j01*Omega", 5.0, 0.0, 0},
    };
    return mods;
}

Panel modulated_panel(const Modulation& m, ModelParams p)
{
    Panel panel;
    panel.name = m.name;
    panel.label = m.label;
    p.omega_mod = m.omega;
    p.delta = m.bessel_order ? tune_bessel(*m.bessel_order, m.omega) : m.delta;
    panel.params = p;
    panel.bessel_order = m.bessel_order;
    panel.fixed_unmodulated = m.omega == 0.0 && m.delta == 0.0;
    return panel;
}

FigureSpec witness_figure(FigureId id)
{
    FigureSpec spec;
    spec.id = id;
    spec.kind = PanelKind::Witness;
    ModelParams p;
    p.gamma = 1.0;
    p.lambda = 0.1;
    p.theta = kPi / 2;
    p.unit = TimeUnit::Gamma;
    const char* names[] = {"a", "b", "c", "d"};
    if (id == FigureId::Fig2) {
        const double omegas[] = {0.0, 0.1, 0.5, 5.0};
        for (int i = 0; i < 4; ++i) {
            Panel panel;
            panel.name = names[i];
            panel.params = p;
            panel.params.omega_mod = omegas[i];
            panel.params.delta = i == 0 ? 0.0 : 5.0;
            panel.fixed_unmodulated = i == 0;
            panel.tau_max = 10.0;
            char label[64];
            std::snprintf(label, sizeof label, "Omega=%g, delta=%g", panel.params.omega_mod, panel.params.delta);
            panel.label = label;
            spec.panels.push_back(panel);
        }
    } else {
        for (int n = 0; n < 4; ++n) {
            Panel panel;
            panel.name = names[n];
            panel.params = p;
            panel.params.omega_mod = 0.5;
            panel.params.delta = tune_bessel(n, 0.5);
            panel.bessel_order = n;
            panel.tau_max = 50.0;
            panel.label = "delta=j" + std::to_string(n) + "1*Omega";
            spec.panels.push_back(panel);
        }
    }
    return spec;
}

FigureSpec tau_series_figure(FigureId id, double gamma, double lambda, double theta)
{
    FigureSpec spec;
    spec.id = id;
    spec.kind = PanelKind::TauSeries;
    ModelParams p;
    p.gamma = gamma;
    p.lambda = lambda;
    p.theta = theta;
    for (const auto& m : speed_modulations()) {
        Panel panel = modulated_panel(m, p);
        panel.tau_max = 10.0;
        spec.panels.push_back(panel);
    }
    return spec;
}

FigureSpec sweep_figure(FigureId id, PanelKind kind, double theta)
{
    FigureSpec spec;
    spec.id = id;
    spec.kind = kind;
    ModelParams p;
    p.lambda = 1.0;
    p.theta = theta;
    for (const auto& m : speed_modulations()) {
        Panel panel = modulated_panel(m, p);
        panel.taus = {0.4, 0.6, 0.8};
        panel.axis = uniform_axis(0.05, 40.0, 0.05);
        spec.panels.push_back(panel);
    }
    return spec;
}

std::string time_column(TimeUnit unit)
{
    switch (unit) {
    case TimeUnit::Gamma: return "gamma_tau";
    case TimeUnit::Lambda: return "lambda_tau";
    case TimeUnit::Absolute: return "tau";
    }
    return "tau";
}

void provenance(CsvTable& table, const FigureSpec& spec, const Panel& panel)
{
    table.comment(std::string("qmod-dyn ") + QMOD_VERSION);
    table.comment("figure=" + std::string(to_string(spec.id)) + " panel=" + panel.name + " (" + panel.label + ")");
    table.comment("params: " + panel.params.describe());
    table.comment("solver: " + std::string(to_string(SolverTag::OdeReform)) + " rel=" + format_double(spec.tol.rel) +
                  " abs=" + format_double(spec.tol.abs));
}

std::size_t witness_points(const Panel& panel, double t_end)
{
    std::size_t n = panel.points ? panel.points : default_points(panel.params, t_end);
    if (n % 2 == 0) ++n;
    return std::max<std::size_t>(n, 3);
}

PanelOutput witness_panel(const FigureSpec& spec, const Panel& panel)
{
    const double scale = panel.params.time_scale();
    const double t_end = panel.tau_max / scale;
    const std::size_t n_solver = witness_points(panel, t_end);
    const WitnessCurves curves =
        witness_curves(panel.params, t_end, (n_solver - 1) / 2, WitnessOptions{spec.mode, spec.tol});

    PanelOutput out;
    out.stem = std::string(to_string(spec.id)) + "_" + panel.name;
    provenance(out.table, spec, panel);
    out.table.comment("grid: tau in [0, " + format_double(panel.tau_max) + "] " + std::string(to_string(panel.params.unit)) +
                      " units, " + std::to_string(curves.taus.size()) + " tau points, " + std::to_string(n_solver) +
                      " solver points");
    out.table.comment(std::string("blind measurement: ") +
                      (spec.mode == SegmentMode::TimeHomogeneous ? "time-homogeneous reuse" : "exact segments"));
    const std::string tcol = time_column(panel.params.unit);
    out.table.header({tcol, "sqw", "oqw", "coherence_half"});
    std::vector<double> x(curves.taus.size());
    for (std::size_t k = 0; k < curves.taus.size(); ++k) {
        x[k] = curves.taus[k] * scale;
        out.table.row({x[k], curves.sqw[k], curves.oqw[k], curves.coherence_half[k]});
    }
    out.plot.title = std::string(to_string(spec.id)) + " (" + panel.name + "): " + panel.label;
    out.plot.x_label = tcol;
    out.plot.y_label = "witness";
    out.plot.series = {{"SQW", x, curves.sqw}, {"OQW", x, curves.oqw}, {"C/2", x, curves.coherence_half}};
    return out;
}

double rg_value(const SpeedMetrics& m)
{
    return m.r_g.value_or(std::numeric_limits<double>::quiet_NaN());
}

PanelOutput tau_series_panel(const FigureSpec& spec, const Panel& panel)
{
    const double scale = panel.params.time_scale();
    const double t_end = panel.tau_max / scale;
    const AmplitudeTrajectory traj = panel.points ? solve_ode_reform(panel.params, t_end, panel.points, spec.tol)
                                                  : solve_refined(panel.params, t_end, 1e-6, 4, spec.tol);
    const auto series = speed_series(traj, panel.general_rg);

    PanelOutput out;
    out.stem = std::string(to_string(spec.id)) + "_" + panel.name;
    provenance(out.table, spec, panel);
    out.table.comment("grid: tau in (0, " + format_double(panel.tau_max) + "] " +
                      std::string(to_string(panel.params.unit)) + " units, " + std::to_string(traj.size()) +
                      " solver points");
    const std::string tcol = time_column(panel.params.unit);
    out.table.header({tcol, "qslt_ratio", "n_blp", "r_g"});
    std::vector<double> x, ratio, n_blp;
    for (const auto& m : series) {
        x.push_back(m.tau * scale);
        ratio.push_back(m.qslt_ratio);
        n_blp.push_back(m.n_blp);
        out.table.row({x.back(), m.qslt_ratio, m.n_blp, rg_value(m)});
    }
    out.plot.title = std::string(to_string(spec.id)) + ": " + panel.label;
    out.plot.x_label = tcol;
    out.plot.y_label = "tau_QSL/tau, N";
    out.plot.series = {{"tau_QSL/tau", x, ratio}, {"N", x, n_blp}};
    return out;
}

void sweep_comment(CsvTable& table, const Panel& panel, const SweepOptions& options)
{
    table.comment("axis: gamma/lambda in [" + format_double(panel.axis.front()) + ", " +
                  format_double(panel.axis.back()) + "], " + std::to_string(panel.axis.size()) + " points");
    std::string taus;
    for (double t : panel.taus)
        taus += (taus.empty() ? "" : ",") + format_double(t);
    table.comment("taus: " + taus + " eps=" + format_double(options.eps) +
                  " grid: refined until N changes by < 1e-6");
}

SweepOptions sweep_options(const FigureSpec& spec, const Panel& panel)
{
    SweepOptions options;
    options.jobs = spec.jobs;
    options.general_rg = panel.general_rg;
    options.tol = spec.tol;
    return options;
}

PanelOutput sweep_panel(const FigureSpec& spec, const Panel& panel)
{
    const SweepOptions options = sweep_options(spec, panel);
    PanelOutput out;
    out.stem = std::string(to_string(spec.id)) + "_" + panel.name;
    provenance(out.table, spec, panel);
    sweep_comment(out.table, panel, options);
    const bool derivative = spec.kind == PanelKind::AxisDerivative;
    if (derivative)
        out.table.header({"axis_value", "tau", "d_qslt_ratio", "d_r_g"});
    else
        out.table.header({"axis_value", "tau", "qslt_ratio", "n_blp", "r_g", "speedup_transition",
                          "nonmarkov_transition"});
    out.plot.title = std::string(to_string(spec.id)) + ": " + panel.label;
    out.plot.x_label = "gamma/lambda";
    out.plot.y_label = derivative ? "derivative" : "tau_QSL/tau, N";

    for (double tau_units : panel.taus) {
        const double tau = tau_units / panel.params.time_scale();
        const SweepResult result = sweep_gamma_lambda(panel.params, tau, panel.axis, options);
        const std::string suffix = " tau=" + format_double(tau_units);
        if (derivative) {
            const auto d_ratio = derivative_along_axis(result, AxisQuantity::QsltRatio);
            const auto d_rg = derivative_along_axis(result, AxisQuantity::RG);
            for (std::size_t i = 0; i < result.axis.size(); ++i)
                out.table.row({result.axis[i], tau_units, d_ratio[i], d_rg[i]});
            out.plot.series.push_back({"d ratio" + suffix, result.axis, d_ratio});
            out.plot.series.push_back({"d R_g" + suffix, result.axis, d_rg});
            continue;
        }
        std::vector<double> ratio;
        for (std::size_t i = 0; i < result.axis.size(); ++i) {
            const auto& m = result.metrics[i];
            const double flag_s = result.transition_speedup == result.axis[i] ? 1.0 : 0.0;
            const double flag_n = result.transition_nonmarkov == result.axis[i] ? 1.0 : 0.0;
            out.table.row({result.axis[i], tau_units, m.qslt_ratio, m.n_blp, rg_value(m), flag_s, flag_n});
            ratio.push_back(m.qslt_ratio);
        }
        out.plot.series.push_back({"ratio" + suffix, result.axis, ratio});
    }
    return out;
}

} // namespace

std::string_view to_string(FigureId id)
{
    switch (id) {
    case FigureId::Fig2: return "fig2";
    case FigureId::Fig3: return "fig3";
    case FigureId::QsltTauExcited: return "qslt-tau-excited";
    case FigureId::QsltGammaExcited: return "qslt-gamma-excited";
    case FigureId::DerivExcited: return "deriv-excited";
    case FigureId::QsltTauSuperpos: return "qslt-tau-superpos";
    case FigureId::QsltGammaSuperpos: return "qslt-gamma-superpos";
    case FigureId::DerivSuperpos: return "deriv-superpos";
    }
    return "fig2";
}

const std::vector<FigureId>& all_figure_ids()
{
    static const std::vector<FigureId> ids = {
        FigureId::Fig2,         FigureId::Fig3,            FigureId::QsltTauExcited,    FigureId::QsltGammaExcited,
        FigureId::DerivExcited, FigureId::QsltTauSuperpos, FigureId::QsltGammaSuperpos, FigureId::DerivSuperpos,
    };
    return ids;
}

FigureId parse_figure_id(std::string_view text)
{
    for (FigureId id : all_figure_ids())
        if (to_string(id) == text)
            return id;
    throw ValidationError("figure", "unknown figure id '" + std::string(text) + "'");
}

FigureSpec default_figure(FigureId id)
{
    switch (id) {
    case FigureId::Fig2:
    case FigureId::Fig3: return witness_figure(id);
    case FigureId::QsltTauExcited: return tau_series_figure(id, 0.1, 1.0, 0.0);
    case FigureId::QsltTauSuperpos: return tau_series_figure(id, 1.0, 3.0, kPi / 2);
    case FigureId::QsltGammaExcited: return sweep_figure(id, PanelKind::GammaSweep, 0.0);
    case FigureId::DerivExcited: return sweep_figure(id, PanelKind::AxisDerivative, 0.0);
    case FigureId::QsltGammaSuperpos: return sweep_figure(id, PanelKind::GammaSweep, kPi / 2);
    case FigureId::DerivSuperpos: {
        FigureSpec spec;
        spec.id = id;
        spec.kind = PanelKind::AxisDerivative;
        Panel panel;
        panel.name = "omega5_delta5";
        panel.label = "Omega=5, delta=5";
        panel.params.lambda = 1.0;
        panel.params.delta = 5.0;
        panel.params.omega_mod = 5.0;
        panel.params.theta = kPi / 2;
        panel.taus = {1.0};
        panel.axis = uniform_axis(0.05, 40.0, 0.05);
        panel.general_rg = true;
        spec.panels.push_back(panel);
        return spec;
    }
    }
    throw ValidationError("figure", "unknown figure id");
}

ParamOverrides ParamOverrides::merged(const ParamOverrides& higher) const
{
    ParamOverrides out = *this;
    auto take = [](auto& dst, const auto& src) {
        if (src) dst = src;
    };
    take(out.gamma, higher.gamma);
    take(out.lambda, higher.lambda);
    take(out.delta, higher.delta);
    take(out.omega, higher.omega);
    take(out.theta, higher.theta);
    take(out.phi, higher.phi);
    take(out.unit, higher.unit);
    take(out.tau_max, higher.tau_max);
    take(out.points, higher.points);
    return out;
}

void ParamOverrides::apply(Panel& panel) const
{
    ModelParams& p = panel.params;
    if (gamma) p.gamma = *gamma;
    if (lambda) p.lambda = *lambda;
    if (theta) p.theta = *theta;
    if (phi) p.phi = *phi;
    if (unit) p.unit = *unit;
    if (tau_max) panel.tau_max = *tau_max;
    if (points) panel.points = *points;
    if (panel.fixed_unmodulated)
        return;
    if (omega) p.omega_mod = *omega;
    if (delta) {
        p.delta = *delta;
        panel.bessel_order.reset();
    } else if (omega && panel.bessel_order) {
        p.delta = tune_bessel(*panel.bessel_order, p.omega_mod);
    }
}

void apply_overrides(FigureSpec& spec, const ParamOverrides& all,
                     const std::map<std::string, ParamOverrides>& per_panel)
{
    for (const auto& [name, o] : per_panel) {
        const bool known = std::any_of(spec.panels.begin(), spec.panels.end(),
                                       [&](const Panel& panel) { return panel.name == name; });
        if (!known)
            throw ValidationError("panel." + name, "no such panel in " + std::string(to_string(spec.id)));
    }
    for (Panel& panel : spec.panels) {
        all.apply(panel);
        if (auto it = per_panel.find(panel.name); it != per_panel.end())
            it->second.apply(panel);
        panel.params.validate();
        if (spec.kind == PanelKind::Witness || spec.kind == PanelKind::TauSeries) {
            if (!(panel.tau_max > 0.0) || !std::isfinite(panel.tau_max))
                throw ValidationError("tau-max", "must be > 0");
        }
        if (panel.points > 0 && panel.points < 3)
            throw ValidationError("points", "must be >= 3");
    }
}

std::vector<double> uniform_axis(double start, double stop, double step)
{
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || !(step > 0.0) || stop < start)
        throw ValidationError("axis", "empty range [" + format_double(start) + ", " + format_double(stop) +
                                          "] with step " + format_double(step));
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step * (1.0 + 1e-12) + 1e-6)) + 1;
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i)
        axis[i] = start + static_cast<double>(i) * step;
    return axis;
}

double tune_bessel(int n, double omega_mod)
{
    if (n < 0)
        throw ValidationError("n", "Bessel order must be >= 0");
    if (!(omega_mod > 0.0) || !std::isfinite(omega_mod))
        throw ValidationError("omega", "must be > 0 for Bessel tuning");
    return bessel::first_zero(n) * omega_mod;
}

std::vector<PanelOutput> compute_figure(const FigureSpec& spec)
{
    std::vector<PanelOutput> outputs;
    for (const Panel& panel : spec.panels) {
        panel.params.validate();
        switch (spec.kind) {
        case PanelKind::Witness: outputs.push_back(witness_panel(spec, panel)); break;
        case PanelKind::TauSeries: outputs.push_back(tau_series_panel(spec, panel)); break;
        case PanelKind::GammaSweep:
        case PanelKind::AxisDerivative: outputs.push_back(sweep_panel(spec, panel)); break;
        }
    }
    return outputs;
}

std::vector<std::filesystem::path> run_figure(const FigureSpec& spec)
{
    std::vector<std::filesystem::path> written;
    for (const PanelOutput& out : compute_figure(spec)) {
        const auto csv = spec.out_dir / (out.stem + ".csv");
        out.table.save(csv);
        written.push_back(csv);
        if (spec.svg) {
            const auto svg = spec.out_dir / (out.stem + ".svg");
            write_text_file(svg, render_svg(out.plot));
            written.push_back(svg);
        }
    }
    return written;
}

std::string_view to_string(Scenario s)
{
    return s == Scenario::Excited ? "excited" : "superposition";
}

Scenario parse_scenario(std::string_view text)
{
    if (text == "excited") return Scenario::Excited;
    if (text == "superposition") return Scenario::Superposition;
    throw ValidationError("scenario", "expected excited or superposition, got '" + std::string(text) + "'");
}

CsvTable run_sweep(const SweepConfig& config)
{
    const std::vector<double> axis = uniform_axis(config.axis_start, config.axis_stop, config.axis_step);
    if (config.taus.empty())
        throw ValidationError("taus", "at least one driving time is required");
    for (double tau : config.taus)
        if (!(tau > 0.0) || !std::isfinite(tau))
            throw ValidationError("taus", "driving times must be > 0");
    ModelParams base = config.base;
    base.theta = config.scenario == Scenario::Excited ? 0.0 : kPi / 2;
    base.phi = 0.0;
    base.validate();

    CsvTable table;
    table.comment(std::string("qmod-dyn ") + QMOD_VERSION);
    table.comment("sweep scenario=" + std::string(to_string(config.scenario)));
    table.comment("params: " + base.describe() + " (gamma = axis_value * lambda)");
    table.comment("solver: " + std::string(to_string(SolverTag::OdeReform)) +
                  " rel=" + format_double(config.options.tol.rel) + " abs=" + format_double(config.options.tol.abs));
    table.comment("axis: gamma/lambda from " + format_double(config.axis_start) + " to " +
                  format_double(config.axis_stop) + " step " + format_double(config.axis_step) + ", " +
                  std::to_string(axis.size()) + " points; eps=" + format_double(config.options.eps));
    table.header({"axis_value", "tau", "qslt_ratio", "n_blp", "r_g", "speedup_transition", "nonmarkov_transition"});
    for (double tau : config.taus) {
        const SweepResult result = sweep_gamma_lambda(base, tau, axis, config.options);
        for (std::size_t i = 0; i < axis.size(); ++i) {
            const auto& m = result.metrics[i];
            table.row({axis[i], tau, m.qslt_ratio, m.n_blp, rg_value(m),
                       result.transition_speedup == axis[i] ? 1.0 : 0.0,
                       result.transition_nonmarkov == axis[i] ? 1.0 : 0.0});
        }
        if (config.options.refine_transitions) {
            if (result.refined_speedup)
                table.comment("tau=" + format_double(tau) + " refined speedup transition " +
                              format_double(*result.refined_speedup));
            if (result.refined_nonmarkov)
                table.comment("tau=" + format_double(tau) + " refined nonmarkov transition " +
                              format_double(*result.refined_nonmarkov));
        }
    }
    return table;
}

} // namespace qmod
