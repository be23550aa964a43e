#include "qmod/witness.hpp"

#include <cmath>

#include "qmod/errors.hpp"

namespace qmod {

PauliPropagator PauliPropagator::from_amplitude(cplx c)
{
    const double re = c.real();
    const double im = c.imag();
    const double pop = std::norm(c);
    PauliPropagator p;
    // <sx> - i<sy> scales by C; <sz> -> |C|^2 <sz> + |C|^2 - 1
    p.matrix << re, im, 0.0, 0.0,
               -im, re, 0.0, 0.0,
               0.0, 0.0, pop, pop - 1.0,
               0.0, 0.0, 0.0, 1.0;
    return p;
}

PauliPropagator propagator(const AmplitudeTrajectory& traj, std::size_t k)
{
    traj.check_index(k);
    return PauliPropagator::from_amplitude(traj.c[k]);
}

Eigen::Vector4d initial_pauli_vector(const ModelParams& p)
{
    const double s = std::sin(p.theta);
    Eigen::Vector4d v;
    v << s * std::cos(p.phi), s * std::sin(p.phi), std::cos(p.theta), 1.0;
    return v;
}

QubitState state_from_pauli(const Eigen::Vector4d& v, double t)
{
    QubitState s;
    s.t = t;
    s.rho << 0.5 * (1.0 + v[2]), cplx{0.5 * v[0], -0.5 * v[1]},
             cplx{0.5 * v[0], 0.5 * v[1]}, 0.5 * (1.0 - v[2]);
    return s;
}

Eigen::Vector4d blind_measure(const Eigen::Vector4d& v, BlindBasis basis)
{
    Eigen::Vector4d out = Eigen::Vector4d::Zero();
    out[3] = v[3];
    if (basis == BlindBasis::X)
        out[0] = v[0];
    else
        out[2] = v[2];
    return out;
}

double quantum_probability_plus(const AmplitudeTrajectory& traj, std::size_t k)
{
    Eigen::Matrix2cd proj;
    proj << 0.5, 0.5, 0.5, 0.5;
    return (density_matrix(traj, k).rho * proj).trace().real();
}

namespace {

void require_even(std::size_t tau_index, const char* what)
{
    if (tau_index % 2 != 0)
        throw DomainError(std::string(what) + ": tau index must be even so that tau/2 is on the grid");
}

// Amplitude that propagates the second half-interval [t0, tau].
cplx second_segment_amplitude(const AmplitudeTrajectory& traj, double t0, double tau, SegmentMode mode,
                              Tolerances tol)
{
    if (mode == SegmentMode::TimeHomogeneous)
        return traj.interpolate(tau - t0);
    const double sample[] = {tau};
    return solve_segment(traj.params, t0, sample, tol).front();
}

} // namespace

double sqw(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    require_even(tau_index, "sqw");
    traj.check_index(tau_index);
    const double re_tau = traj.c[tau_index].real();
    const double re_half = traj.c[tau_index / 2].real();
    return 0.5 * std::abs(std::sin(traj.params.theta)) * std::abs(re_tau - re_half * re_half);
}

double sqw_composed(const AmplitudeTrajectory& traj, std::size_t tau_index, SegmentMode mode, Tolerances tol)
{
    require_even(tau_index, "sqw_composed");
    traj.check_index(tau_index);
    const std::size_t half = tau_index / 2;
    const double tau = traj.times[tau_index];
    const double t0 = traj.times[half];

    const Eigen::Vector4d v0 = initial_pauli_vector(traj.params);
    const Eigen::Vector4d quantum = propagator(traj, tau_index).apply(v0);

    Eigen::Vector4d classical = blind_measure(propagator(traj, half).apply(v0), BlindBasis::X);
    const cplx c_second = mode == SegmentMode::TimeHomogeneous
                              ? traj.c[tau_index - half]
                              : second_segment_amplitude(traj, t0, tau, mode, tol);
    classical = PauliPropagator::from_amplitude(c_second).apply(classical);

    // P_+ = (1 + <sx>)/2 for the final projector (I + sx)/2
    return 0.5 * std::abs(quantum[0] - classical[0]);
}

QubitState classicalized_state(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    require_even(tau_index, "classicalized_state");
    traj.check_index(tau_index);
    const double c = std::cos(0.5 * traj.params.theta);
    const double pop_half = std::norm(traj.c[tau_index / 2]);
    const double excited = c * c * pop_half * pop_half;
    QubitState s;
    s.t = traj.times[tau_index];
    s.rho << excited, 0.0, 0.0, 1.0 - excited;
    return s;
}

double oqw(const AmplitudeTrajectory& traj, std::size_t tau_index)
{
    traj.check_index(tau_index);
    const cplx rotated = std::polar(1.0, -traj.params.phi) * traj.c[tau_index];
    return 0.5 * std::abs(std::sin(traj.params.theta) * rotated.real());
}

double oqw_composed(const AmplitudeTrajectory& traj, std::size_t tau_index, double t_blind)
{
    traj.check_index(tau_index);
    const double tau = traj.times[tau_index];
    if (t_blind < 0.0 || t_blind > tau)
        throw DomainError("oqw_composed: blind time must lie in [0, tau]");
    const Eigen::Vector4d v0 = initial_pauli_vector(traj.params);
    const Eigen::Vector4d quantum = propagator(traj, tau_index).apply(v0);
    Eigen::Vector4d classical =
        blind_measure(PauliPropagator::from_amplitude(traj.interpolate(t_blind)).apply(v0), BlindBasis::Z);
    classical = PauliPropagator::from_amplitude(traj.interpolate(tau - t_blind)).apply(classical);
    return 0.5 * std::abs(quantum[0] - classical[0]);
}

WitnessCurves witness_curves(const AmplitudeTrajectory& traj, WitnessOptions options)
{
    if (traj.size() < 3 || traj.size() % 2 == 0)
        throw DomainError("witness_curves: trajectory needs an odd number (>= 3) of points");
    const std::size_t n = (traj.size() - 1) / 2;
    WitnessCurves out;
    out.params = traj.params;
    out.taus.reserve(n + 1);
    const double sin_theta = std::abs(std::sin(traj.params.theta));
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t idx = 2 * k;
        out.taus.push_back(traj.times[idx]);
        out.sqw.push_back(options.mode == SegmentMode::TimeHomogeneous
                              ? sqw(traj, idx)
                              : sqw_composed(traj, idx, options.mode, options.tol));
        out.oqw.push_back(oqw(traj, idx));
        out.coherence_half.push_back(0.5 * sin_theta * std::abs(traj.c[idx]));
    }
    return out;
}

WitnessCurves witness_curves(const ModelParams& p, double tau_max, std::size_t n, WitnessOptions options)
{
    if (n < 1)
        throw DomainError("witness_curves: n must be >= 1");
    const AmplitudeTrajectory traj = solve_ode_reform(p, tau_max, 2 * n + 1, options.tol);
    return witness_curves(traj, options);
}

} // namespace qmod
