#include "qmod/speed_metrics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "qmod/errors.hpp"
#include "qmod/qubit_state.hpp"

namespace qmod {

namespace {

constexpr std::array<double, 5> kGaussNodes = {-0.90617984593866399, -0.53846931010568309, 0.0,
                                               0.53846931010568309, 0.90617984593866399};
constexpr std::array<double, 5> kGaussWeights = {0.23692688505618909, 0.47862867049936647, 0.56888888888888889,
                                                 0.47862867049936647, 0.23692688505618909};
constexpr int kSignSamples = 8;

// Cubic Hermite interpolant of C on one grid interval, s in [0, 1].
struct HermiteInterval {
    double t0;
    double h;
    cplx c0, d0, c1, d1;

    cplx value(double s) const
    {
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * c0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * c1 +
               (s3 - s2) * h * d1;
    }

    cplx derivative(double s) const
    {
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) / h) * c0 + (3 * s2 - 4 * s + 1) * d0 + ((-6 * s2 + 6 * s) / h) * c1 +
               (3 * s2 - 2 * s) * d1;
    }

    double population_rate(double s) const { return 2.0 * (std::conj(value(s)) * derivative(s)).real(); }
};

double find_root(const HermiteInterval& iv, double lo, double hi, double f_lo)
{
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = iv.population_rate(mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PathIntegrals integrate_interval(const ModelParams& p, const HermiteInterval& iv)
{
    std::array<double, kSignSamples + 1> f{};
    for (int j = 0; j <= kSignSamples; ++j)
        f[static_cast<std::size_t>(j)] = iv.population_rate(static_cast<double>(j) / kSignSamples);

    std::array<double, kSignSamples + 2> cuts{};
    std::size_t n_cuts = 0;
    cuts[n_cuts++] = 0.0;
    for (int j = 0; j < kSignSamples; ++j) {
        const double a = f[static_cast<std::size_t>(j)];
        const double b = f[static_cast<std::size_t>(j) + 1];
        if (a * b < 0.0) {
            const double lo = static_cast<double>(j) / kSignSamples;
            cuts[n_cuts++] = find_root(iv, lo, lo + 1.0 / kSignSamples, a);
        }
    }
    cuts[n_cuts++] = 1.0;

    PathIntegrals out;
    for (std::size_t piece = 0; piece + 1 < n_cuts; ++piece) {
        const double a = cuts[piece];
        const double b = cuts[piece + 1];
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            const double s = mid + half * kGaussNodes[q];
            const double w = kGaussWeights[q] * half * iv.h;
            const cplx c = iv.value(s);
            const cplx dc = iv.derivative(s);
            const double rate = 2.0 * (std::conj(c) * dc).real();
            const auto sv = state_derivative(p, iv.t0 + s * iv.h, c, dc).singular_values();
            out.backflow += w * std::max(rate, 0.0);
            out.abs_population_rate += w * std::abs(rate);
            out.op_norm += w * sv[0];
            out.trace_norm += w * (sv[0] + sv[1]);
            out.hs_norm += w * std::hypot(sv[0], sv[1]);
        }
    }
    return out;
}

HermiteInterval interval(const AmplitudeTrajectory& traj, std::size_t k)
{
    return {traj.times[k], traj.times[k + 1] - traj.times[k], traj.c[k], traj.c_dot[k], traj.c[k + 1],
            traj.c_dot[k + 1]};
}

void require_positive_tau(std::size_t tau_index, const char* what)
{
    if (tau_index == 0)
        throw DomainError(std::string(what) + ": tau must be > 0");
}

void require_excited(const AmplitudeTrajectory& traj, const char* what)
{
    if (traj.params.theta != 0.0)
        throw DomainError(std::string(what) + ": defined for the excited initial state (theta = 0)");
}

double guarded_ratio(double num, double den)
{
    if (std::abs(den) < 1e-12)
        return std::numeric_limits<double>::quiet_NaN();
    return num / den;
}

QsltRatios ratios_from(const AmplitudeTrajectory& traj, std::size_t k, const PathIntegrals& acc)
{
    const double distance = 1.0 - fidelity_to_initial(traj, k); // sin^2 of the Bures angle
    // A state that never moved saturates the bound.
    auto ratio = [&](double integral) { return integral > 0.0 ? distance / integral : 1.0; };
    QsltRatios r;
    r.op = ratio(acc.op_norm);
    r.tr = ratio(acc.trace_norm);
    r.hs = ratio(acc.hs_norm);
    r.unified = std::max({r.op, r.tr, r.hs});
    return r;
}

SpeedMetrics metrics_from(const AmplitudeTrajectory& traj, std::size_t k, const PathIntegrals& acc, bool general_rg)
{
    SpeedMetrics m;
    m.params = traj.params;
    m.tau = traj.times[k];
    m.n_blp = acc.backflow;
    const QsltRatios r = ratios_from(traj, k, acc);
    m.qslt_ratio = r.unified;
    m.qslt_ratio_op = r.op;
    m.qslt_ratio_tr = r.tr;
    m.qslt_ratio_hs = r.hs;
    if (traj.params.theta == 0.0)
        m.r_g = guarded_ratio(acc.backflow, 1.0 - std::norm(traj.c[k]));
    else if (general_rg)
        m.r_g = guarded_ratio(acc.backflow, 1.0 - fidelity_to_initial(traj, k));
    return m;
}

} // namespace

std::vector<PathIntegrals> cumulative_integrals(const AmplitudeTrajectory& traj, std::size_t upto)
{
    traj.check_index(upto);
    std::vector<PathIntegrals> out(upto + 1);
    for (std::size_t k = 0; k < upto; ++k) {
        const PathIntegrals piece = integrate_interval(traj.params, interval(traj, k));
        PathIntegrals next = out[k];
        next.backflow += piece.backflow;
        next.abs_population_rate += piece.abs_population_rate;
        next.op_norm += piece.op_norm;
        next.trace_norm += piece.trace_norm;
        next.hs_norm += piece.hs_norm;
        out[k + 1] = next;
    }
    return out;
}

PathIntegrals path_integrals(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    return cumulative_integrals(traj, tau_index).back();
}

double blp_nonmarkovianity(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    return path_integrals(traj, tau_index).backflow;
}

double qslt_ratio_excited(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    require_excited(traj, "qslt_ratio_excited");
    require_positive_tau(tau_index, "qslt_ratio_excited");
    const double n = blp_nonmarkovianity(traj, tau_index);
    const double decay = 1.0 - std::norm(traj.c[tau_index]);
    const double den = 2.0 * n + decay;
    return den > 0.0 ? decay / den : 1.0;
}

QsltRatios qslt_ratio_general(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    require_positive_tau(tau_index, "qslt_ratio_general");
    return ratios_from(traj, tau_index, path_integrals(traj, tau_index));
}

double qslt_ratio_superposition_closed(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    require_positive_tau(tau_index, "qslt_ratio_superposition_closed");
    traj.check_index(tau_index);
    double integral = 0.0;
    for (std::size_t k = 0; k < tau_index; ++k) {
        const HermiteInterval iv = interval(traj, k);
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            const double s = 0.5 + 0.5 * kGaussNodes[q];
            const cplx c = iv.value(s);
            const cplx dc = iv.derivative(s);
            const double rate = 2.0 * (std::conj(c) * dc).real();
            integral += 0.5 * kGaussWeights[q] * iv.h * std::sqrt(std::norm(dc) + rate * rate);
        }
    }
    return (1.0 - traj.c[tau_index].real()) / integral;
}

double r_g(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    require_excited(traj, "r_g");
    const double n = blp_nonmarkovianity(traj, tau_index);
    return guarded_ratio(n, 1.0 - std::norm(traj.c[tau_index]));
}

double r_g_general(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    const double n = blp_nonmarkovianity(traj, tau_index);
    return guarded_ratio(n, 1.0 - fidelity_to_initial(traj, tau_index));
}

SpeedMetrics speed_metrics(const AmplitudeTrajectory& traj, std::size_t tau_index, bool general_rg)
{
    require_positive_tau(tau_index, "speed_metrics");
    return metrics_from(traj, tau_index, path_integrals(traj, tau_index), general_rg);
}

std::vector<SpeedMetrics> speed_series(const AmplitudeTrajectory& traj, bool general_rg)
{
    const auto acc = cumulative_integrals(traj, traj.size() - 1);
    std::vector<SpeedMetrics> out;
    out.reserve(traj.size() - 1);
    for (std::size_t k = 1; k < traj.size(); ++k)
        out.push_back(metrics_from(traj, k, acc[k], general_rg));
    return out;
}

AmplitudeTrajectory solve_refined(const ModelParams& p, double t_end, double n_tol, int max_doublings, Tolerances tol)
{
    std::size_t n = default_points(p, t_end);
    AmplitudeTrajectory traj = solve_ode_reform(p, t_end, n, tol);
    double n_blp = blp_nonmarkovianity(traj, traj.size() - 1);
    for (int i = 0; i < max_doublings; ++i) {
        n = 2 * (n - 1) + 1;
        AmplitudeTrajectory finer = solve_ode_reform(p, t_end, n, tol);
        const double n_finer = blp_nonmarkovianity(finer, finer.size() - 1);
        const bool converged = std::abs(n_finer - n_blp) < n_tol;
        traj = std::move(finer);
        n_blp = n_finer;
        if (converged)
            break;
    }
    return traj;
}

// --- sweeps --------------------------------------------------------------------

SweepError::SweepError(double axis_value, const std::string& what)
    : std::runtime_error("gamma/lambda = " + std::to_string(axis_value) + ": " + what), axis_value_(axis_value)
{
}

SpeedMetrics metrics_at(const ModelParams& base, double gamma_over_lambda, double tau, const SweepOptions& options)
{
    ModelParams p = base;
    p.gamma = gamma_over_lambda * base.lambda;
    const AmplitudeTrajectory traj = solve_refined(p, tau, 1e-6, 4, options.tol);
    return speed_metrics(traj, traj.size() - 1, options.general_rg);
}

namespace {

// Bisect on gamma/lambda between a point where `crossed` is false and one
// where it is true.
template <class Pred>
double bisect_transition(const ModelParams& base, double tau, double lo, double hi, const SweepOptions& options,
                         Pred crossed)
{
    while (hi - lo > options.refine_tol) {
        const double mid = 0.5 * (lo + hi);
        if (crossed(metrics_at(base, mid, tau, options)))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

SweepResult sweep_gamma_lambda(const ModelParams& base, double tau, std::span<const double> axis,
                               const SweepOptions& options)
{
    if (!(options.eps > 0.0))
        throw ValidationError("eps", "must be > 0");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw ValidationError("tau", "must be > 0");
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (!(axis[i] > axis[i - 1]))
            throw ValidationError("axis", "must be strictly increasing");

    SweepResult result;
    result.axis.assign(axis.begin(), axis.end());
    result.metrics.resize(axis.size());
    if (axis.empty())
        return result;

    std::vector<std::exception_ptr> errors(axis.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < axis.size(); i = next++) {
            try {
                result.metrics[i] = metrics_at(base, axis[i], tau, options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(axis.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!errors[i])
            continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw SweepError(axis[i], e.what());
        }
    }

    auto speedup = [&](const SpeedMetrics& m) { return m.qslt_ratio < 1.0 - options.eps; };
    auto nonmarkov = [&](const SpeedMetrics& m) { return m.n_blp > options.eps; };
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!result.transition_speedup && speedup(result.metrics[i])) {
            result.transition_speedup = axis[i];
            if (options.refine_transitions && i > 0)
                result.refined_speedup = bisect_transition(base, tau, axis[i - 1], axis[i], options, speedup);
        }
        if (!result.transition_nonmarkov && nonmarkov(result.metrics[i])) {
            result.transition_nonmarkov = axis[i];
            if (options.refine_transitions && i > 0)
                result.refined_nonmarkov = bisect_transition(base, tau, axis[i - 1], axis[i], options, nonmarkov);
        }
    }
    return result;
}

std::vector<double> derivative_along_axis(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw DomainError("derivative_along_axis: axis and values differ in length");
    const std::size_t n = x.size();
    if (n < 3)
        throw DomainError("derivative_along_axis: needs at least 3 points");
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = x[i] - x[i - 1];
        const double h2 = x[i + 1] - x[i];
        d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] + h1 / (h2 * (h1 + h2)) * y[i + 1];
    }
    {
        const double h1 = x[1] - x[0];
        const double h2 = x[2] - x[1];
        d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] - h1 / (h2 * (h1 + h2)) * y[2];
    }
    {
        const double h1 = x[n - 2] - x[n - 3];
        const double h2 = x[n - 1] - x[n - 2];
        d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2] +
                   (2 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
    }
    return d;
}

std::vector<double> derivative_along_axis(const SweepResult& result, AxisQuantity quantity)
{
    std::vector<double> values;
    values.reserve(result.metrics.size());
    for (const auto& m : result.metrics) {
        if (quantity == AxisQuantity::QsltRatio)
            values.push_back(m.qslt_ratio);
        else
            values.push_back(m.r_g.value_or(std::numeric_limits<double>::quiet_NaN()));
    }
    return derivative_along_axis(result.axis, values);
}

} // namespace qmod
