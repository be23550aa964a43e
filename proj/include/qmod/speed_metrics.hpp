#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qmod/amplitude.hpp"

namespace qmod {

/// Time integrals over [0, t_k] of quantities built from the trajectory:
/// the positive part of d|C|^2/dt (information backflow), its absolute value,
/// and the three Schatten norms of d rho/dt.
struct PathIntegrals {
    double backflow = 0.0;
    double abs_population_rate = 0.0;
    double op_norm = 0.0;
    double trace_norm = 0.0;
    double hs_norm = 0.0;
};

/// Cumulative integrals at every grid point up to and including `upto`.
///
/// On each grid interval the integrands are evaluated on the cubic Hermite
/// interpolant of (c, c_dot). d|C|^2/dt is then a quintic; the interval is
/// split at its sign changes and each piece integrated by 5-point
/// Gauss-Legendre, so the integral of d|C|^2/dt telescopes to |C|^2 - 1
/// to rounding error.
std::vector<PathIntegrals> cumulative_integrals(const AmplitudeTrajectory& traj, std::size_t upto);
PathIntegrals path_integrals(const AmplitudeTrajectory& traj, std::size_t tau_index);

/// BLP measure N(tau) = (1/2)(int |d|C|^2/dt| + |C(tau)|^2 - 1).
double blp_nonmarkovianity(const AmplitudeTrajectory& traj, std::size_t tau_index);

/// (1 - |C|^2) / (2N + 1 - |C|^2); requires theta = 0.
double qslt_ratio_excited(const AmplitudeTrajectory& traj, std::size_t tau_index);

struct QsltRatios {
    double unified = 0.0; // largest of the three candidates
    double op = 0.0;
    double tr = 0.0;
    double hs = 0.0;
};

/// tau_QSLT/tau for each Schatten norm from the Bures angle to the initial
/// state and the time-averaged norm of d rho/dt. Throws at tau = 0.
QsltRatios qslt_ratio_general(const AmplitudeTrajectory& traj, std::size_t tau_index);

/// Superposition-state formula (theta = pi/2, phi = 0)
/// (1 - Re C(tau)) / int sqrt(|C'|^2 + (d|C|^2/dt)^2) dt, integrated with the
/// same scheme as cumulative_integrals. Kept as a second route for comparison.
double qslt_ratio_superposition_closed(const AmplitudeTrajectory& traj, std::size_t tau_index);

/// N / (1 - |C(tau)|^2); requires theta = 0. NaN when |1 - |C|^2| < 1e-12.
double r_g(const AmplitudeTrajectory& traj, std::size_t tau_index);

/// Experimental: N / (1 - <psi0|rho|psi0>) for any initial state.
double r_g_general(const AmplitudeTrajectory& traj, std::size_t tau_index);

struct SpeedMetrics {
    double tau = 0.0;
    double n_blp = 0.0;
    double qslt_ratio_op = 0.0;
    double qslt_ratio_tr = 0.0;
    double qslt_ratio_hs = 0.0;
    double qslt_ratio = 0.0;
    std::optional<double> r_g;
    ModelParams params;
};

/// Metrics at one grid point. r_g is filled for theta = 0, or for any theta
/// with `general_rg`.
SpeedMetrics speed_metrics(const AmplitudeTrajectory& traj, std::size_t tau_index, bool general_rg = false);

/// Metrics at grid points 1..n-1 (tau > 0) sharing one cumulative pass.
std::vector<SpeedMetrics> speed_series(const AmplitudeTrajectory& traj, bool general_rg = false);

/// Solve on the default grid, doubling the resolution until N(t_end) moves by
/// less than `n_tol` (at most `max_doublings` times).
AmplitudeTrajectory solve_refined(const ModelParams& p, double t_end, double n_tol = 1e-6, int max_doublings = 4,
                                  Tolerances tol = {});

struct SweepOptions {
    double eps = 1e-6;
    unsigned jobs = 1;
    bool general_rg = false;
    /// Bisect each transition between the bracketing grid values.
    bool refine_transitions = false;
    double refine_tol = 1e-6;
    Tolerances tol;
};

struct SweepResult {
    std::vector<double> axis; // gamma / lambda
    std::vector<SpeedMetrics> metrics;
    std::optional<double> transition_speedup;
    std::optional<double> transition_nonmarkov;
    std::optional<double> refined_speedup;
    std::optional<double> refined_nonmarkov;
};

/// Sweep error carrying the offending axis value.
class SweepError : public std::runtime_error {
public:
    SweepError(double axis_value, const std::string& what);
    double axis_value() const noexcept { return axis_value_; }

private:
    double axis_value_;
};

/// Speed metrics at fixed tau for gamma = axis[i] * lambda. Results are
/// ordered by axis and identical for any number of jobs.
SweepResult sweep_gamma_lambda(const ModelParams& base, double tau, std::span<const double> axis,
                               const SweepOptions& options = {});

/// Single-point evaluation used by the sweep.
SpeedMetrics metrics_at(const ModelParams& base, double gamma_over_lambda, double tau, const SweepOptions& options);

enum class AxisQuantity { QsltRatio, RG };

/// d quantity / d(gamma/lambda): central differences inside, second-order
/// one-sided at the ends. Non-uniform axes use three-point Lagrange weights.
std::vector<double> derivative_along_axis(const SweepResult& result, AxisQuantity quantity);
std::vector<double> derivative_along_axis(std::span<const double> axis, std::span<const double> values);

} // namespace qmod
