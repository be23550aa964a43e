#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "qmod/model.hpp"

namespace qmod {

using cplx = std::complex<double>;

enum class SolverTag { OdeReform, VolterraQuadrature, AnalyticUnmodulated };

std::string_view to_string(SolverTag tag);

struct Tolerances {
    double rel = 1e-9;
    double abs = 1e-12;
};

/// Excited-state amplitude C(t) sampled on a grid that starts at t = 0.
///
/// `c_dot` comes from the right-hand side of the amplitude equation, never
/// from differencing `c`. Immutable once built.
struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<cplx> c;
    std::vector<cplx> c_dot;
    ModelParams params;
    SolverTag solver_tag = SolverTag::OdeReform;
    Tolerances tolerances;
    bool uniform = true;

    std::size_t size() const { return times.size(); }
    double t_end() const { return times.back(); }

    /// Second derivative at grid point k from the closed second-order form
    /// C'' = (i delta cos(Omega t) - lambda) C' - (gamma lambda / 2) C.
    cplx c_ddot(std::size_t k) const;

    /// Cubic Hermite interpolant of C (and its derivative) at any t in range.
    cplx interpolate(double t) const;
    cplx interpolate_derivative(double t) const;

    /// Throws std::out_of_range if k is not a grid index.
    void check_index(std::size_t k) const;
};

/// Memory kernel F(t, t') of the amplitude equation for the Lorentzian
/// spectral density. Requires 0 <= t_prime <= t.
cplx kernel(const ModelParams& p, double t, double t_prime);

/// C'' in terms of C and C' (see AmplitudeTrajectory::c_ddot).
cplx amplitude_second_derivative(const ModelParams& p, double t, cplx c, cplx c_dot);

/// Integrates the amplitude equation through its local reformulation
///   C' = -(gamma lambda/2) e^{i Phi(t)} z,  z' = -lambda z + e^{-i Phi(t)} C
/// with an adaptive Dormand-Prince 5(4) pair and dense output on a uniform
/// grid of n_points over [0, t_end].
AmplitudeTrajectory solve_ode_reform(const ModelParams& p, double t_end, std::size_t n_points,
                                     Tolerances tol = {});

/// Same equation restarted at t_start with C(t_start) = 1 and an empty memory.
/// Samples C at each entry of `times` (ascending, all >= t_start).
/// Used for the exact-segment blind-measurement composition.
std::vector<cplx> solve_segment(const ModelParams& p, double t_start, std::span<const double> times,
                                Tolerances tol = {});

/// Independent discretisation: trapezoidal product integration of the
/// integro-differential equation, second order in h = t_end/(n_points-1).
AmplitudeTrajectory solve_volterra(const ModelParams& p, double t_end, std::size_t n_points);

/// Closed form for delta = Omega = 0:
///   C(t) = e^{-lambda t/2} [cosh(d t/2) + (lambda/d) sinh(d t/2)],
///   d = sqrt(lambda^2 - 2 gamma lambda),
/// continued to the trigonometric branch when 2 gamma > lambda.
cplx analytic_unmodulated(const ModelParams& p, double t);
cplx analytic_unmodulated_derivative(const ModelParams& p, double t);

/// Trajectory sampled from the closed form.
AmplitudeTrajectory sample_unmodulated(const ModelParams& p, double t_end, std::size_t n_points);

/// 2001 points per 10 units of dimensionless time, at least 201.
std::size_t default_points(const ModelParams& p, double t_end);

/// Largest |a[k] - b[k]| over a common grid.
double sup_distance(std::span<const cplx> a, std::span<const cplx> b);

} // namespace qmod
