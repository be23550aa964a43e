#include "qmod/amplitude.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "qmod/errors.hpp"

namespace qmod {

using namespace std::complex_literals;

std::string_view to_string(SolverTag tag)
{
    switch (tag) {
    case SolverTag::OdeReform: return "ode-reform";
    case SolverTag::VolterraQuadrature: return "volterra-quadrature";
    case SolverTag::AnalyticUnmodulated: return "analytic-unmodulated";
    }
    return "ode-reform";
}

// --- trajectory --------------------------------------------------------------

void AmplitudeTrajectory::check_index(std::size_t k) const
{
    if (k >= times.size())
        throw std::out_of_range("grid index " + std::to_string(k) + " outside trajectory of " +
                                std::to_string(times.size()) + " points");
}

cplx AmplitudeTrajectory::c_ddot(std::size_t k) const
{
    check_index(k);
    return amplitude_second_derivative(params, times[k], c[k], c_dot[k]);
}

namespace {

struct HermiteSpan {
    std::size_t k;
    double h;
    double s; // local coordinate in [0, 1]
};

HermiteSpan locate(const AmplitudeTrajectory& traj, double t)
{
    const auto& ts = traj.times;
    if (!(t >= ts.front() && t <= ts.back()))
        throw DomainError("interpolate: t outside trajectory range");
    std::size_t k;
    if (traj.uniform) {
        const double h = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
        k = static_cast<std::size_t>((t - ts.front()) / h);
    } else {
        k = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
        k = k == 0 ? 0 : k - 1;
    }
    k = std::min(k, ts.size() - 2);
    const double h = ts[k + 1] - ts[k];
    return {k, h, (t - ts[k]) / h};
}

} // namespace

cplx AmplitudeTrajectory::interpolate(double t) const
{
    const auto [k, h, s] = locate(*this, t);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * c[k] + h10 * h * c_dot[k] + h01 * c[k + 1] + h11 * h * c_dot[k + 1];
}

cplx AmplitudeTrajectory::interpolate_derivative(double t) const
{
    const auto [k, h, s] = locate(*this, t);
    const double s2 = s * s;
    const double d00 = (6 * s2 - 6 * s) / h;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h;
    const double d11 = 3 * s2 - 2 * s;
    return d00 * c[k] + d10 * c_dot[k] + d01 * c[k + 1] + d11 * c_dot[k + 1];
}

// --- kernel ------------------------------------------------------------------

cplx kernel(const ModelParams& p, double t, double t_prime)
{
    if (t_prime > t)
        throw DomainError("kernel: requires t_prime <= t");
    const double phase = modulation_phase(p, t) - modulation_phase(p, t_prime);
    return 0.5 * p.gamma * p.lambda * std::exp(-p.lambda * (t - t_prime)) * std::exp(1i * phase);
}

cplx amplitude_second_derivative(const ModelParams& p, double t, cplx c, cplx c_dot)
{
    return (1i * modulation_phase_rate(p, t) - p.lambda) * c_dot - 0.5 * p.gamma * p.lambda * c;
}

// --- ODE reformulation ---------------------------------------------------------

namespace {

namespace odeint = boost::numeric::odeint;

// (Re C, Im C, Re z, Im z)
using State = std::array<double, 4>;

struct LocalSystem {
    const ModelParams* p;
    double* last_time;

    void operator()(const State& x, State& dxdt, double t) const
    {
        *last_time = t;
        const cplx c{x[0], x[1]};
        const cplx z{x[2], x[3]};
        const cplx rot = std::exp(1i * modulation_phase(*p, t));
        const cplx dc = -0.5 * p->gamma * p->lambda * rot * z;
        const cplx dz = -p->lambda * z + std::conj(rot) * c;
        dxdt = {dc.real(), dc.imag(), dz.real(), dz.imag()};
    }

    cplx c_dot(const State& x, double t) const
    {
        const cplx z{x[2], x[3]};
        return -0.5 * p->gamma * p->lambda * std::exp(1i * modulation_phase(*p, t)) * z;
    }
};

template <class Observer>
void integrate_local(const ModelParams& p, double t_start, std::span<const double> times, Tolerances tol,
                     Observer&& obs)
{
    double last_time = t_start;
    LocalSystem system{&p, &last_time};
    const State x0{1.0, 0.0, 0.0, 0.0};
    if (times.empty())
        return;

    // Initial step: a fraction of the fastest physical time scale.
    const double rate = std::max({p.lambda, std::sqrt(p.gamma * p.lambda), p.delta, p.omega_mod, 1e-3});
    const double dt0 = std::min(1e-3 / rate, std::max(times.back() - t_start, 1e-12));

    auto stepper = odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(x0, t_start, dt0);
    State x;
    try {
        for (double target : times) {
            while (stepper.current_time() < target) {
                const double t = stepper.current_time();
                const double dt = stepper.current_time_step();
                if (!(dt > 1e-14 * std::max(1.0, std::abs(t))))
                    throw SolverFailure(t, "ode-reform step size underflow");
                stepper.do_step(system);
            }
            if (target == t_start) {
                x = x0;
            } else {
                stepper.calc_state(target, x);
            }
            if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); }))
                throw SolverFailure(target, "ode-reform produced a non-finite state");
            obs(cplx{x[0], x[1]}, system.c_dot(x, target));
        }
    } catch (const odeint::odeint_error& e) {
        throw SolverFailure(last_time, std::string("ode-reform integration failed: ") + e.what());
    }
}

} // namespace

AmplitudeTrajectory solve_ode_reform(const ModelParams& p, double t_end, std::size_t n_points, Tolerances tol)
{
    p.validate();
    if (!(t_end > 0.0))
        throw DomainError("solve_ode_reform: t_end must be > 0");
    if (n_points < 2)
        throw DomainError("solve_ode_reform: n_points must be >= 2");

    AmplitudeTrajectory traj;
    traj.params = p;
    traj.solver_tag = SolverTag::OdeReform;
    traj.tolerances = tol;
    traj.times.resize(n_points);
    const double h = t_end / static_cast<double>(n_points - 1);
    for (std::size_t k = 0; k < n_points; ++k)
        traj.times[k] = h * static_cast<double>(k);
    traj.times.back() = t_end;
    traj.c.reserve(n_points);
    traj.c_dot.reserve(n_points);

    integrate_local(p, 0.0, traj.times, tol, [&](cplx c, cplx c_dot) {
        traj.c.push_back(c);
        traj.c_dot.push_back(c_dot);
    });
    traj.c.front() = 1.0;
    return traj;
}

std::vector<cplx> solve_segment(const ModelParams& p, double t_start, std::span<const double> times, Tolerances tol)
{
    p.validate();
    if (!times.empty() && times.front() < t_start)
        throw DomainError("solve_segment: sample times must not precede t_start");
    std::vector<cplx> out;
    out.reserve(times.size());
    if (times.empty())
        return out;
    if (times.back() == t_start) {
        out.assign(times.size(), cplx{1.0, 0.0});
        return out;
    }
    integrate_local(p, t_start, times, tol, [&](cplx c, cplx) { out.push_back(c); });
    return out;
}

// --- Volterra quadrature -------------------------------------------------------

AmplitudeTrajectory solve_volterra(const ModelParams& p, double t_end, std::size_t n_points)
{
    p.validate();
    if (!(t_end > 0.0))
        throw DomainError("solve_volterra: t_end must be > 0");
    if (n_points < 2)
        throw DomainError("solve_volterra: n_points must be >= 2");

    const double h = t_end / static_cast<double>(n_points - 1);
    const double coupling = 0.5 * p.gamma * p.lambda;
    const double decay = std::exp(-p.lambda * h);

    AmplitudeTrajectory traj;
    traj.params = p;
    traj.solver_tag = SolverTag::VolterraQuadrature;
    traj.tolerances = {0.0, 0.0};
    traj.times.resize(n_points);
    traj.c.resize(n_points);
    traj.c_dot.resize(n_points);

    // Memory integral M(t_n) = int_0^{t_n} e^{-lambda(t_n - s)} e^{-i Phi(s)} C(s) ds
    // with trapezoid weights. Because e^{-lambda(t_n - t_j)} factorises, the
    // weighted history sum obeys M_n = e^{-lambda h} M_{n-1}
    //   + (h/2) (e^{-lambda h} g_{n-1} + g_n),  g_j = e^{-i Phi_j} C_j.
    cplx memory = 0.0;
    cplx g_prev = 1.0;
    traj.times[0] = 0.0;
    traj.c[0] = 1.0;
    traj.c_dot[0] = 0.0;
    for (std::size_t n = 1; n < n_points; ++n) {
        const double t = h * static_cast<double>(n);
        const cplx rot = std::exp(1i * modulation_phase(p, t));
        const cplx known = decay * memory + 0.5 * h * decay * g_prev;
        // C_n = C_{n-1} + h/2 (F_{n-1} + F_n),  F_n = -k e^{i Phi_n} (known + h/2 e^{-i Phi_n} C_n)
        const cplx rhs = traj.c[n - 1] + 0.5 * h * traj.c_dot[n - 1] - 0.5 * h * coupling * rot * known;
        const cplx c_n = rhs / (1.0 + 0.25 * h * h * coupling);
        memory = known + 0.5 * h * std::conj(rot) * c_n;
        g_prev = std::conj(rot) * c_n;
        traj.times[n] = t;
        traj.c[n] = c_n;
        traj.c_dot[n] = -coupling * rot * memory;
    }
    traj.times.back() = t_end;
    return traj;
}

// --- closed form ---------------------------------------------------------------

namespace {

void require_unmodulated(const ModelParams& p)
{
    if (p.delta != 0.0 || p.omega_mod != 0.0)
        throw DomainError("analytic_unmodulated: requires delta = 0 and Omega = 0");
}

// sinh(x)/x, series near 0
cplx sinhc(cplx x)
{
    if (std::abs(x) < 1e-4)
        return 1.0 + x * x / 6.0;
    return std::sinh(x) / x;
}

} // namespace

cplx analytic_unmodulated(const ModelParams& p, double t)
{
    require_unmodulated(p);
    const cplx d = std::sqrt(cplx{p.lambda * p.lambda - 2.0 * p.gamma * p.lambda, 0.0});
    const cplx half = 0.5 * d * t;
    // (lambda/d) sinh(d t/2) = (lambda t/2) sinhc(d t/2), regular at d = 0
    const cplx value = std::exp(-0.5 * p.lambda * t) * (std::cosh(half) + 0.5 * p.lambda * t * sinhc(half));
    return {value.real(), 0.0};
}

cplx analytic_unmodulated_derivative(const ModelParams& p, double t)
{
    require_unmodulated(p);
    const cplx d = std::sqrt(cplx{p.lambda * p.lambda - 2.0 * p.gamma * p.lambda, 0.0});
    const cplx half = 0.5 * d * t;
    // -(gamma lambda/d) sinh(d t/2) e^{-lambda t/2}
    const cplx value = -p.gamma * p.lambda * 0.5 * t * sinhc(half) * std::exp(-0.5 * p.lambda * t);
    return {value.real(), 0.0};
}

AmplitudeTrajectory sample_unmodulated(const ModelParams& p, double t_end, std::size_t n_points)
{
    require_unmodulated(p);
    if (n_points < 2)
        throw DomainError("sample_unmodulated: n_points must be >= 2");
    AmplitudeTrajectory traj;
    traj.params = p;
    traj.solver_tag = SolverTag::AnalyticUnmodulated;
    traj.tolerances = {0.0, 0.0};
    const double h = t_end / static_cast<double>(n_points - 1);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double t = k + 1 == n_points ? t_end : h * static_cast<double>(k);
        traj.times.push_back(t);
        traj.c.push_back(analytic_unmodulated(p, t));
        traj.c_dot.push_back(analytic_unmodulated_derivative(p, t));
    }
    return traj;
}

std::size_t default_points(const ModelParams& p, double t_end)
{
    const double units = std::max(t_end * p.time_scale(), 0.0);
    const auto n = static_cast<std::size_t>(std::ceil(units / 10.0 * 2000.0)) + 1;
    return std::max<std::size_t>(n, 201);
}

double sup_distance(std::span<const cplx> a, std::span<const cplx> b)
{
    if (a.size() != b.size())
        throw DomainError("sup_distance: grids differ in length");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

} // namespace qmod
