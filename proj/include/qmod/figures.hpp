#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmod/amplitude.hpp"
#include "qmod/csv.hpp"
#include "qmod/speed_metrics.hpp"
#include "qmod/svg.hpp"
#include "qmod/witness.hpp"

namespace qmod {

enum class FigureId {
    Fig2,
    Fig3,
    QsltTauExcited,
    QsltGammaExcited,
    DerivExcited,
    QsltTauSuperpos,
    QsltGammaSuperpos,
    DerivSuperpos,
};

std::string_view to_string(FigureId id);
/// Throws ValidationError("figure") for unknown ids.
FigureId parse_figure_id(std::string_view text);
const std::vector<FigureId>& all_figure_ids();

enum class PanelKind {
    Witness,        // sqw, oqw, coherence/2 versus tau
    TauSeries,      // speed metrics versus tau
    GammaSweep,     // speed metrics versus gamma/lambda, several tau
    AxisDerivative, // d(ratio)/d(gamma/lambda) and d(R_g)/d(gamma/lambda)
};

struct Panel {
    std::string name;
    std::string label;
    ModelParams params;
    /// delta follows j_{n,1} * Omega when set.
    std::optional<int> bessel_order;
    /// delta and Omega stay zero under overrides.
    bool fixed_unmodulated = false;
    double tau_max = 0.0;    // in params.unit
    std::size_t points = 0;  // solver grid; 0 picks the default
    std::vector<double> taus; // driving times of a sweep, in params.unit
    std::vector<double> axis; // gamma / lambda
    bool general_rg = false;
};

struct FigureSpec {
    FigureId id = FigureId::Fig2;
    PanelKind kind = PanelKind::Witness;
    std::vector<Panel> panels;
    std::filesystem::path out_dir = ".";
    bool svg = false;
    SegmentMode mode = SegmentMode::TimeHomogeneous;
    unsigned jobs = 1;
    Tolerances tol;
};

/// Parameter overrides layered on top of figure defaults.
struct ParamOverrides {
    std::optional<double> gamma, lambda, delta, omega, theta, phi;
    std::optional<TimeUnit> unit;
    std::optional<double> tau_max;
    std::optional<std::size_t> points;

    /// Fields set in `higher` win.
    ParamOverrides merged(const ParamOverrides& higher) const;
    void apply(Panel& panel) const;
};

/// Caption defaults for a figure.
FigureSpec default_figure(FigureId id);

/// Applies `all` to every panel, then `per_panel[name]` to the matching
/// panel, and validates the result.
void apply_overrides(FigureSpec& spec, const ParamOverrides& all,
                     const std::map<std::string, ParamOverrides>& per_panel = {});

/// start, start + step, ... up to stop (inclusive within step/1e6).
/// Throws ValidationError("axis") if the range is empty.
std::vector<double> uniform_axis(double start, double stop, double step);

/// delta = j_{n,1} * Omega.
double tune_bessel(int n, double omega_mod);

struct PanelOutput {
    std::string stem;
    CsvTable table;
    SvgPlot plot;
};

/// Computes every panel without touching the file system.
std::vector<PanelOutput> compute_figure(const FigureSpec& spec);

/// Writes <out_dir>/<id>_<panel>.csv (and .svg) and returns the paths.
std::vector<std::filesystem::path> run_figure(const FigureSpec& spec);

enum class Scenario { Excited, Superposition };
std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view text);

struct SweepConfig {
    Scenario scenario = Scenario::Excited;
    ModelParams base; // gamma is replaced by axis * lambda
    double axis_start = 0.05;
    double axis_stop = 2.0;
    double axis_step = 0.01;
    std::vector<double> taus = {0.4, 0.6, 0.8};
    SweepOptions options;
};

/// Long-format table: one row per (tau, axis value).
CsvTable run_sweep(const SweepConfig& config);

} // namespace qmod
