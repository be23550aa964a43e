#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qmod/amplitude.hpp"
#include "qmod/qubit_state.hpp"

namespace qmod {

/// Heisenberg-picture map of the Pauli expectation vector
/// (<sx>, <sy>, <sz>, 1) generated by the amplitude C(t).
struct PauliPropagator {
    Eigen::Matrix4d matrix;

    static PauliPropagator from_amplitude(cplx c);
    Eigen::Vector4d apply(const Eigen::Vector4d& v) const { return matrix * v; }
};

PauliPropagator propagator(const AmplitudeTrajectory& traj, std::size_t k);

/// (<sx>, <sy>, <sz>, 1) of the initial pure state.
Eigen::Vector4d initial_pauli_vector(const ModelParams& p);

/// State with the given Pauli expectation vector.
QubitState state_from_pauli(const Eigen::Vector4d& v, double t);

/// Dephasing in the sigma_x or sigma_z eigenbasis; outcome discarded.
enum class BlindBasis { X, Z };
Eigen::Vector4d blind_measure(const Eigen::Vector4d& v, BlindBasis basis);

/// How the evolution after a blind measurement at t0 is propagated.
///  - TimeHomogeneous: reuse the amplitude at (tau - t0) from the same
///    trajectory, as if the dynamics were time-homogeneous.
///  - ExactSegments: re-solve the amplitude equation on [t0, tau] with the
///    true modulation phase.
enum class SegmentMode { TimeHomogeneous, ExactSegments };

/// Tr(rho(t_k) Pi_+^x)
double quantum_probability_plus(const AmplitudeTrajectory& traj, std::size_t k);

/// Standard witness with the blind x-measurement at tau/2, closed form
/// (1/2)|sin(theta)| |Re C(tau) - (Re C(tau/2))^2|. tau_index must be even.
double sqw(const AmplitudeTrajectory& traj, std::size_t tau_index);

/// Standard witness built by explicit composition
/// propagator -> blind x-measurement -> propagator -> final trace.
/// Valid for any phi; the blind time is t_{tau_index/2}.
double sqw_composed(const AmplitudeTrajectory& traj, std::size_t tau_index,
                    SegmentMode mode = SegmentMode::TimeHomogeneous, Tolerances tol = {});

/// z-classicalised state at tau: diag(cos^2(theta/2)|C(tau/2)|^4, 1 - ...).
QubitState classicalized_state(const AmplitudeTrajectory& traj, std::size_t tau_index);

/// Optimised witness (1/2)|sin(theta) Re(e^{-i phi} C(tau))|.
double oqw(const AmplitudeTrajectory& traj, std::size_t tau_index);

/// Optimised witness by explicit composition with the blind z-measurement at
/// an arbitrary t_blind in [0, tau]; the amplitude off-grid comes from the
/// trajectory's Hermite interpolant.
double oqw_composed(const AmplitudeTrajectory& traj, std::size_t tau_index, double t_blind);

struct WitnessCurves {
    std::vector<double> taus;
    std::vector<double> sqw;
    std::vector<double> oqw;
    std::vector<double> coherence_half;
    ModelParams params;
};

struct WitnessOptions {
    SegmentMode mode = SegmentMode::TimeHomogeneous;
    Tolerances tol;
};

/// Curves on taus = k tau_max / n, k = 0..n, from one solve on 2n+1 points.
WitnessCurves witness_curves(const ModelParams& p, double tau_max, std::size_t n, WitnessOptions options = {});

/// Same from an existing trajectory with an odd number of points.
WitnessCurves witness_curves(const AmplitudeTrajectory& traj, WitnessOptions options = {});

} // namespace qmod
