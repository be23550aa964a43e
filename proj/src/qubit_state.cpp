#include "qmod/qubit_state.hpp"

#include <algorithm>
#include <cmath>

namespace qmod {

namespace {

struct Angles {
    double cos2_half; // cos^2(theta/2)
    double sin_theta;
    cplx phase;       // e^{-i phi}
};

Angles angles(const ModelParams& p)
{
    const double c = std::cos(0.5 * p.theta);
    return {c * c, std::sin(p.theta), std::polar(1.0, -p.phi)};
}

} // namespace

std::array<double, 3> QubitState::bloch() const
{
    // rho = (I + x sx + y sy + z sz)/2  =>  rho_eg = (x - i y)/2
    const cplx eg = rho(0, 1);
    return {2.0 * eg.real(), -2.0 * eg.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

bool QubitState::is_physical(double trace_tol, double herm_tol, double pos_tol) const
{
    if (std::abs(rho.trace() - cplx{1.0, 0.0}) > trace_tol)
        return false;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        return false;
    return hermitian_eigenvalues(rho)[0] >= pos_tol;
}

std::array<double, 2> hermitian_eigenvalues(const Eigen::Matrix2cd& m)
{
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    return {mean - radius, mean + radius};
}

std::array<double, 2> StateDerivative::singular_values() const
{
    const auto ev = hermitian_eigenvalues(rho_dot);
    const double s0 = std::abs(ev[0]);
    const double s1 = std::abs(ev[1]);
    return {std::max(s0, s1), std::min(s0, s1)};
}

double StateDerivative::trace_norm() const
{
    const auto s = singular_values();
    return s[0] + s[1];
}

double StateDerivative::hilbert_schmidt_norm() const
{
    const auto s = singular_values();
    return std::hypot(s[0], s[1]);
}

double StateDerivative::operator_norm() const { return singular_values()[0]; }

QubitState density_matrix(const ModelParams& p, double t, cplx c)
{
    const Angles a = angles(p);
    const double excited = a.cos2_half * std::norm(c);
    const cplx coherence = 0.5 * a.sin_theta * a.phase * c;
    QubitState s;
    s.t = t;
    s.rho << excited, coherence, std::conj(coherence), 1.0 - excited;
    return s;
}

QubitState density_matrix(const AmplitudeTrajectory& traj, std::size_t k)
{
    traj.check_index(k);
    return density_matrix(traj.params, traj.times[k], traj.c[k]);
}

double coherence_l1(const AmplitudeTrajectory& traj, std::size_t k)
{
    traj.check_index(k);
    return std::abs(std::sin(traj.params.theta)) * std::abs(traj.c[k]);
}

Eigen::Vector2cd initial_state_vector(const ModelParams& p)
{
    Eigen::Vector2cd psi;
    psi << std::cos(0.5 * p.theta), std::sin(0.5 * p.theta) * std::polar(1.0, p.phi);
    return psi;
}

double fidelity_to_initial(const ModelParams& p, cplx c)
{
    // cos^2(theta/2) rho_ee + sin^2(theta/2) rho_gg + sin(theta) Re(e^{i phi} rho_eg)
    const double ch = std::cos(0.5 * p.theta);
    const double sh = std::sin(0.5 * p.theta);
    const double sin_theta = std::sin(p.theta);
    const double excited = ch * ch * std::norm(c);
    const double f = ch * ch * excited + sh * sh * (1.0 - excited) + 0.5 * sin_theta * sin_theta * c.real();
    return std::clamp(f, 0.0, 1.0);
}

double fidelity_to_initial(const AmplitudeTrajectory& traj, std::size_t k)
{
    traj.check_index(k);
    return fidelity_to_initial(traj.params, traj.c[k]);
}

StateDerivative state_derivative(const ModelParams& p, double t, cplx c, cplx c_dot)
{
    const Angles a = angles(p);
    const double pop_rate = 2.0 * (std::conj(c) * c_dot).real();
    const double excited = a.cos2_half * pop_rate;
    const cplx coherence = 0.5 * a.sin_theta * a.phase * c_dot;
    StateDerivative d;
    d.t = t;
    d.rho_dot << excited, coherence, std::conj(coherence), -excited;
    return d;
}

StateDerivative state_derivative(const AmplitudeTrajectory& traj, std::size_t k)
{
    traj.check_index(k);
    return state_derivative(traj.params, traj.times[k], traj.c[k], traj.c_dot[k]);
}

} // namespace qmod
