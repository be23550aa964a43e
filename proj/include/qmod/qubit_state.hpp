#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

#include "qmod/amplitude.hpp"

namespace qmod {

/// Reduced qubit density matrix in the {|e>, |g>} basis at time t.
struct QubitState {
    Eigen::Matrix2cd rho;
    double t = 0.0;

    /// (<sigma_x>, <sigma_y>, <sigma_z>)
    std::array<double, 3> bloch() const;
    double excited_population() const { return rho(0, 0).real(); }

    /// Unit trace, Hermiticity and positivity at the given tolerances.
    bool is_physical(double trace_tol = 1e-12, double herm_tol = 1e-12, double pos_tol = -1e-10) const;
};

/// Real eigenvalues of a Hermitian 2x2 matrix, ascending.
std::array<double, 2> hermitian_eigenvalues(const Eigen::Matrix2cd& m);

/// d rho/dt built analytically from C and C'.
struct StateDerivative {
    Eigen::Matrix2cd rho_dot;
    double t = 0.0;

    /// Absolute values of the two real eigenvalues, descending.
    std::array<double, 2> singular_values() const;
    double trace_norm() const;
    double hilbert_schmidt_norm() const;
    double operator_norm() const;
};

QubitState density_matrix(const ModelParams& p, double t, cplx c);
QubitState density_matrix(const AmplitudeTrajectory& traj, std::size_t k);

/// l1 coherence |sin(theta)| |C(t_k)| = 2 |rho_eg|.
double coherence_l1(const AmplitudeTrajectory& traj, std::size_t k);

/// |psi0> = cos(theta/2)|e> + sin(theta/2) e^{i phi}|g>
Eigen::Vector2cd initial_state_vector(const ModelParams& p);

/// <psi0| rho |psi0>
double fidelity_to_initial(const ModelParams& p, cplx c);
double fidelity_to_initial(const AmplitudeTrajectory& traj, std::size_t k);

StateDerivative state_derivative(const ModelParams& p, double t, cplx c, cplx c_dot);
StateDerivative state_derivative(const AmplitudeTrajectory& traj, std::size_t k);

} // namespace qmod
