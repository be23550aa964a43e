// Acceptance runner: one PASS/FAIL line per criterion.
//
//   qmod_acceptance [--cli path/to/qmod-dyn] [--known-failure N]... [--only N]...
//
// Exit status is nonzero when a criterion fails that was not listed with
// --known-failure. Criteria that drive the command-line tool are skipped
// (and reported as FAIL) without --cli.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "qmod/amplitude.hpp"
#include "qmod/bessel.hpp"
#include "qmod/figures.hpp"
#include "qmod/speed_metrics.hpp"
#include "qmod/witness.hpp"

namespace fs = std::filesystem;
using namespace qmod;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ModelParams unmodulated(double gamma, double lambda, double theta = 0.0)
{
    ModelParams p;
    p.gamma = gamma;
    p.lambda = lambda;
    p.theta = theta;
    return p;
}

/// Every witness panel of the two witness figures.
std::vector<Panel> witness_panels()
{
    std::vector<Panel> out;
    for (FigureId id : {FigureId::Fig2, FigureId::Fig3})
        for (const Panel& panel : default_figure(id).panels)
            out.push_back(panel);
    return out;
}

WitnessCurves curves_for(const Panel& panel)
{
    const double t_end = panel.tau_max / panel.params.time_scale();
    const std::size_t n = default_points(panel.params, t_end);
    return witness_curves(panel.params, t_end, (n - 1) / 2);
}

Outcome criterion_1()
{
    Outcome o;
    for (auto [g, l] : {std::pair{0.1, 1.0}, {1.0, 0.1}, {0.5, 1.0}}) {
        const ModelParams p = unmodulated(g, l);
        const auto t0 = Clock::now();
        const auto traj = solve_ode_reform(p, 30.0, 6001);
        const double elapsed = seconds_since(t0);
        double err = 0.0;
        for (std::size_t k = 0; k < traj.size(); ++k)
            err = std::max(err, std::abs(traj.c[k] - analytic_unmodulated(p, traj.times[k])));
        o.detail += fmt("(%g,%g): sup=%.2e t=%.3fs  ", g, l, err, elapsed);
        o.pass = o.pass && err <= 1e-6 && elapsed < 1.0;
    }
    return o;
}

Outcome criterion_2()
{
    Outcome o;
    double worst = 0.0;
    int sets = 0;
    for (FigureId id : all_figure_ids()) {
        const FigureSpec spec = default_figure(id);
        for (const Panel& panel : spec.panels) {
            ModelParams p = panel.params;
            double t_end;
            if (spec.kind == PanelKind::Witness || spec.kind == PanelKind::TauSeries) {
                t_end = panel.tau_max / p.time_scale();
            } else {
                // strongest coupling on the axis, longest driving time
                p.gamma = panel.axis.back() * p.lambda;
                t_end = *std::max_element(panel.taus.begin(), panel.taus.end()) / p.time_scale();
            }
            const auto n = static_cast<std::size_t>(std::ceil(t_end / 0.001)) + 1;
            const double err = sup_distance(solve_ode_reform(p, t_end, n).c, solve_volterra(p, t_end, n).c);
            worst = std::max(worst, err);
            ++sets;
        }
    }
    o.pass = worst <= 1e-4;

    // step halving against the ODE solution for a modulated case
    ModelParams p = unmodulated(1.0, 0.1, kPi / 2);
    p.delta = 5.0;
    p.omega_mod = 0.5;
    const auto ref_coarse = solve_ode_reform(p, 10.0, 1001);
    const auto ref_fine = solve_ode_reform(p, 10.0, 2001);
    const double e_coarse = sup_distance(solve_volterra(p, 10.0, 1001).c, ref_coarse.c);
    const double e_fine = sup_distance(solve_volterra(p, 10.0, 2001).c, ref_fine.c);
    const double reduction = e_coarse / e_fine;
    o.pass = o.pass && reduction >= 3.5;
    o.detail = fmt("%d panel parameter sets, worst sup=%.2e; halving %.2e -> %.2e (x%.2f)", sets, worst, e_coarse,
                   e_fine, reduction);
    return o;
}

Outcome criterion_3()
{
    double max_sqw = 0.0, max_excess = -1.0;
    for (const Panel& panel : witness_panels()) {
        const auto w = curves_for(panel);
        for (std::size_t k = 0; k < w.taus.size(); ++k) {
            max_sqw = std::max(max_sqw, w.sqw[k]);
            max_excess = std::max(max_excess, w.oqw[k] - w.coherence_half[k]);
        }
    }
    return {max_sqw <= 0.5 + 1e-12 && max_excess <= 1e-12,
            fmt("max sqw=%.6f, max(oqw - C/2)=%.2e", max_sqw, max_excess)};
}

Outcome criterion_4()
{
    const Panel panel = default_figure(FigureId::Fig3).panels.front(); // j_{0,1} tuning
    Panel p10 = panel;
    p10.tau_max = 10.0;
    const auto w = curves_for(p10);
    int maxima = 0;
    double worst = 1.0;
    for (std::size_t k = 1; k + 1 < w.taus.size(); ++k) {
        if (w.oqw[k] > w.oqw[k - 1] && w.oqw[k] >= w.oqw[k + 1]) {
            ++maxima;
            worst = std::min(worst, w.oqw[k] / w.coherence_half[k]);
        }
    }
    return {maxima > 0 && worst >= 0.99, fmt("%d maxima, smallest oqw/(C/2)=%.6f", maxima, worst)};
}

Outcome criterion_5()
{
    const auto c = curves_for(default_figure(FigureId::Fig2).panels[2]);
    const double max_sqw = *std::max_element(c.sqw.begin(), c.sqw.end());
    const double max_coh = *std::max_element(c.coherence_half.begin(), c.coherence_half.end());

    const auto d = curves_for(default_figure(FigureId::Fig3).panels[3]);
    int above = 0;
    for (std::size_t k = 0; k < d.taus.size(); ++k)
        if (d.sqw[k] > d.coherence_half[k]) ++above;
    return {max_sqw < 0.1 * max_coh && above > 0,
            fmt("fig2(c) max sqw / max C/2 = %.4f; fig3(d) sqw > C/2 at %d points", max_sqw / max_coh, above)};
}

Outcome criterion_6()
{
    double worst = 0.0;
    for (const Panel& panel : witness_panels()) {
        const double t_end = panel.tau_max / panel.params.time_scale();
        const auto traj = solve_ode_reform(panel.params, t_end, default_points(panel.params, t_end));
        for (std::size_t k = 1; k < traj.size(); k += 7) {
            const double tau = traj.times[k];
            const double half = oqw_composed(traj, k, tau / 2);
            for (double frac : {1.0 / 3.0, 0.25})
                worst = std::max(worst, std::abs(oqw_composed(traj, k, frac * tau) - half));
            worst = std::max(worst, std::abs(oqw(traj, k) - half));
        }
    }
    return {worst <= 1e-12, fmt("largest spread %.2e", worst)};
}

Outcome criterion_7()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ratio(0.05, 3.0), tau(0.1, 5.0);
    double worst = 0.0, worst_markov = 0.0;
    int markov = 0;
    for (int i = 0; i < 200; ++i) {
        const ModelParams p = unmodulated(ratio(rng), 1.0);
        const double t = tau(rng);
        const auto traj = solve_ode_reform(p, t, default_points(p, t));
        const std::size_t k = traj.size() - 1;
        const double general = qslt_ratio_general(traj, k).unified;
        worst = std::max(worst, std::abs(general - qslt_ratio_excited(traj, k)));
        if (blp_nonmarkovianity(traj, k) == 0.0) {
            ++markov;
            worst_markov = std::max(worst_markov, std::abs(general - 1.0));
        }
    }
    return {worst <= 1e-8 && worst_markov <= 1e-9 && markov > 0,
            fmt("max |general - closed|=%.2e; %d Markovian points, max |ratio - 1|=%.2e", worst, markov,
                worst_markov)};
}

Outcome criterion_8()
{
    Outcome o;
    const auto axis = uniform_axis(0.01, 40.0, 0.01);
    SweepOptions options;
    options.eps = 1e-6;
    for (double tau : {0.4, 0.6, 0.8}) {
        const auto r = sweep_gamma_lambda(unmodulated(1.0, 1.0), tau, axis, options);
        const bool same = r.transition_speedup == r.transition_nonmarkov;
        o.pass = o.pass && same && r.transition_speedup.has_value();
        o.detail += fmt("tau=%g: ratio %.2f, N %.2f  ", tau, r.transition_speedup.value_or(NAN),
                        r.transition_nonmarkov.value_or(NAN));
    }
    return o;
}

Outcome criterion_9()
{
    const FigureSpec spec = default_figure(FigureId::QsltGammaSuperpos);
    const auto axis = uniform_axis(0.05, 2.0, 0.01);
    double worst = 0.0;
    std::size_t points = 0;
    for (const Panel& panel : spec.panels) {
        for (double tau_units : panel.taus) {
            const auto r = sweep_gamma_lambda(panel.params, tau_units / panel.params.time_scale(), axis);
            for (const auto& m : r.metrics) {
                worst = std::max(worst, m.qslt_ratio);
                ++points;
            }
        }
    }
    return {worst < 1.0, fmt("%zu points, largest ratio %.6f", points, worst)};
}

double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx < 1e-24 || syy < 1e-24) return NAN;
    return sxy / std::sqrt(sxx * syy);
}

Outcome criterion_10()
{
    Outcome o;
    int valid = 0, skipped = 0;
    double worst = -1.0;
    for (const Panel& panel : default_figure(FigureId::DerivExcited).panels) {
        for (double tau_units : panel.taus) {
            const auto r = sweep_gamma_lambda(panel.params, tau_units / panel.params.time_scale(), panel.axis);
            const auto d_ratio = derivative_along_axis(r, AxisQuantity::QsltRatio);
            const auto d_rg = derivative_along_axis(r, AxisQuantity::RG);
            std::vector<double> x, y;
            for (std::size_t i = 0; i < d_ratio.size(); ++i) {
                if (std::isfinite(d_ratio[i]) && std::isfinite(d_rg[i])) {
                    x.push_back(d_ratio[i]);
                    y.push_back(d_rg[i]);
                }
            }
            const double rho = x.size() > 2 ? pearson(x, y) : NAN;
            if (std::isnan(rho)) {
                ++skipped;
                continue;
            }
            ++valid;
            worst = std::max(worst, rho);
        }
    }
    o.pass = valid > 0 && worst < -0.5;
    o.detail = fmt("excited: %d sets, largest Pearson %.3f (%d flat sets skipped)", valid, worst, skipped);

    std::size_t finite = 0, total = 0;
    for (const Panel& panel : default_figure(FigureId::DerivSuperpos).panels) {
        SweepOptions options;
        options.general_rg = panel.general_rg;
        for (double tau_units : panel.taus) {
            const auto r = sweep_gamma_lambda(panel.params, tau_units / panel.params.time_scale(), panel.axis, options);
            for (const auto& d : {derivative_along_axis(r, AxisQuantity::QsltRatio),
                                  derivative_along_axis(r, AxisQuantity::RG)}) {
                total += d.size();
                finite += static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [](double v) { return std::isfinite(v); }));
            }
        }
    }
    o.pass = o.pass && total > 0 && finite == total;
    o.detail += fmt("; superposition: %zu/%zu derivatives finite", finite, total);
    return o;
}

Outcome criterion_11()
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ratio(0.0, 10.0), t(-20.0, 20.0), omega(0.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
        worst = std::max(worst, bessel::jacobi_anger_residual(ratio(rng), t(rng), omega(rng), 50));
    return {worst <= 1e-10, fmt("largest residual %.2e", worst)};
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int run(const std::string& command)
{
    return std::system((command + " > /dev/null 2>&1").c_str());
}

std::string shell_quote(const fs::path& p)
{
    return "'" + p.string() + "'";
}

Outcome criterion_12(const std::string& cli, const fs::path& work)
{
    if (cli.empty()) return {false, "no --cli given"};
    const fs::path a = work / "det_a", b = work / "det_b";
    if (run(shell_quote(cli) + " figure fig2 --out-dir " + shell_quote(a)) != 0 ||
        run(shell_quote(cli) + " figure fig2 --out-dir " + shell_quote(b)) != 0)
        return {false, "figure fig2 failed"};
    int files = 0, differing = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().extension() != ".csv") continue;
        ++files;
        if (slurp(entry.path()) != slurp(b / entry.path().filename())) ++differing;
    }
    const fs::path s1 = work / "sweep_j1.csv", s4 = work / "sweep_j4.csv";
    if (run(shell_quote(cli) + " sweep --jobs 1 --out " + shell_quote(s1)) != 0 ||
        run(shell_quote(cli) + " sweep --jobs 4 --out " + shell_quote(s4)) != 0)
        return {false, "sweep failed"};
    const bool sweep_same = slurp(s1) == slurp(s4) && !slurp(s1).empty();
    return {files > 0 && differing == 0 && sweep_same,
            fmt("%d fig2 CSVs, %d differ; sweep jobs 4 vs 1 %s", files, differing, sweep_same ? "identical" : "differ")};
}

Outcome criterion_13(const std::string& cli, const fs::path& work)
{
    if (cli.empty()) return {false, "no --cli given"};
    const auto t0 = Clock::now();
    const int rc = run(shell_quote(cli) + " figure all --out-dir " + shell_quote(work / "all"));
    const double elapsed = seconds_since(t0);
    return {rc == 0 && elapsed < 60.0, fmt("exit %d after %.1f s", rc, elapsed)};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance checks for qmod"};
    std::string cli;
    std::vector<int> known, only;
    app.add_option("--cli", cli, "qmod-dyn executable");
    app.add_option("--known-failure", known, "Criterion expected to fail");
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);

    const fs::path work = fs::temp_directory_path() / ("qmod_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(work);

    const std::vector<std::function<Outcome()>> criteria = {
        criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
        criterion_11, [&] { return criterion_12(cli, work); }, [&] { return criterion_13(cli, work); },
    };
    const std::set<int> known_set(known.begin(), known.end()), only_set(only.begin(), only.end());

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only_set.empty() && !only_set.count(id)) continue;
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const bool expected = known_set.count(id) > 0;
        if (!o.pass && !expected) ++unexpected;
        std::printf("%-4s criterion %2d%s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id,
                    !o.pass && expected ? " (known)" : "", o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::error_code ec;
    fs::remove_all(work, ec);
    return unexpected == 0 ? 0 : 1;
}
