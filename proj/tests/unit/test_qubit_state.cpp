#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "qmod/qubit_state.hpp"
#include "synthetic.hpp"

using namespace qmod;
using qmod::testing::ending_at;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams state(double theta, double phi = 0.0)
{
    ModelParams p;
    p.theta = theta;
    p.phi = phi;
    return p;
}

} // namespace

TEST_CASE("density matrix examples")
{
    const auto excited = density_matrix(state(0), 0.0, 1.0);
    CHECK(excited.rho(0, 0) == cplx(1.0));
    CHECK(std::abs(excited.rho(0, 1)) == 0.0);
    CHECK(excited.rho(1, 1) == cplx(0.0));

    const auto plus = density_matrix(state(kPi / 2), 0.0, 1.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(plus.rho(i, j) - 0.5) < 1e-15);

    const auto traj = ending_at(state(kPi / 2), 0.6);
    const auto s = density_matrix(traj, 1);
    CHECK_THAT(s.rho(0, 0).real(), WithinAbs(0.18, 1e-15));
    CHECK_THAT(s.rho(0, 1).real(), WithinAbs(0.3, 1e-15));
    CHECK_THAT(s.rho(1, 0).real(), WithinAbs(0.3, 1e-15));
    CHECK_THAT(s.rho(1, 1).real(), WithinAbs(0.82, 1e-15));
    CHECK(s.is_physical());
}

TEST_CASE("coherence monotone")
{
    CHECK(coherence_l1(ending_at(state(0), cplx(0.3, 0.2)), 1) == 0.0);
    CHECK(coherence_l1(ending_at(state(kPi / 2), 1.0), 0) == 1.0);
    CHECK_THAT(coherence_l1(ending_at(state(kPi / 2), cplx(0.6, 0.8)), 1), WithinAbs(1.0, 1e-15));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const auto traj = ending_at(state(kPi * u(rng), 2 * kPi * u(rng) * 0.999), std::polar(u(rng), 2 * kPi * u(rng)));
        CHECK_THAT(coherence_l1(traj, 1), WithinAbs(2.0 * std::abs(density_matrix(traj, 1).rho(0, 1)), 1e-15));
    }
}

TEST_CASE("fidelity to the initial state")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = state(kPi * u(rng), 2 * kPi * u(rng) * 0.999);
        const cplx c = std::polar(u(rng), 2 * kPi * u(rng));
        const auto traj = ending_at(p, c);
        const Eigen::Vector2cd psi = initial_state_vector(p);
        const double oracle = (psi.adjoint() * density_matrix(traj, 1).rho * psi)(0, 0).real();
        CHECK_THAT(fidelity_to_initial(traj, 1), WithinAbs(oracle, 1e-14));
        CHECK_THAT(fidelity_to_initial(traj, 0), WithinAbs(1.0, 1e-15));
    }
    const cplx c(0.3, -0.4);
    CHECK_THAT(fidelity_to_initial(ending_at(state(0), c), 1), WithinAbs(std::norm(c), 1e-15));
    // |+>: (1 + Re C)/2
    CHECK_THAT(fidelity_to_initial(ending_at(state(kPi / 2), c), 1), WithinAbs(0.65, 1e-15));
}

TEST_CASE("state derivative norms against an eigensolver")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = state(kPi * std::abs(u(rng)), kPi * (1.0 + u(rng) * 0.999));
        const cplx c(u(rng), u(rng));
        const cplx dc(3 * u(rng), 3 * u(rng));
        const StateDerivative d = state_derivative(p, 0.0, c, dc);

        CHECK(std::abs(d.rho_dot.trace()) < 1e-12);
        CHECK((d.rho_dot - d.rho_dot.adjoint()).norm() < 1e-12);

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(d.rho_dot);
        const double a = std::abs(es.eigenvalues()(0)), b = std::abs(es.eigenvalues()(1));
        CHECK_THAT(d.operator_norm(), WithinAbs(std::max(a, b), 1e-12));
        CHECK_THAT(d.trace_norm(), WithinAbs(a + b, 1e-12));
        CHECK_THAT(d.hilbert_schmidt_norm(), WithinAbs(d.rho_dot.norm(), 1e-12));
        CHECK(d.operator_norm() <= d.trace_norm() + 1e-15);
        CHECK(d.operator_norm() <= std::sqrt(2.0) * d.hilbert_schmidt_norm() + 1e-15);
    }
}

TEST_CASE("state derivative special cases")
{
    const cplx c(0.5, 0.2), dc(-0.3, 0.1);
    const double rate = 2.0 * (std::conj(c) * dc).real();
    const auto excited = state_derivative(state(0), 0.0, c, dc).singular_values();
    CHECK_THAT(excited[0], WithinAbs(std::abs(rate), 1e-15));
    CHECK_THAT(excited[1], WithinAbs(std::abs(rate), 1e-15));

    const auto plus = state_derivative(state(kPi / 2), 0.0, c, dc);
    // eigenvalues +-sqrt((rate/2)^2 + |C'/2|^2)
    CHECK_THAT(plus.operator_norm(), WithinAbs(0.5 * std::sqrt(rate * rate + std::norm(dc)), 1e-15));

    const auto still = state_derivative(state(1.0, 2.0), 0.0, 0.7, 0.0);
    CHECK(still.operator_norm() == 0.0);
    CHECK(still.trace_norm() == 0.0);
    CHECK(still.hilbert_schmidt_norm() == 0.0);
}

TEST_CASE("hermitian eigenvalues closed form")
{
    Eigen::Matrix2cd m;
    m << 2.0, cplx(1.0, -1.0), cplx(1.0, 1.0), -1.0;
    const auto ev = hermitian_eigenvalues(m);
    CHECK_THAT(ev[0], WithinAbs(0.5 - std::sqrt(2.25 + 2.0), 1e-14));
    CHECK_THAT(ev[1], WithinAbs(0.5 + std::sqrt(2.25 + 2.0), 1e-14));
}

TEST_CASE("states along figure trajectories are physical")
{
    ModelParams sets[4];
    sets[0].gamma = 1; sets[0].lambda = 0.1; sets[0].delta = 5; sets[0].omega_mod = 0.5; sets[0].theta = kPi / 2;
    sets[1].gamma = 0.1; sets[1].lambda = 1; sets[1].delta = 10; sets[1].omega_mod = 5;
    sets[2].gamma = 1; sets[2].lambda = 3; sets[2].theta = kPi / 2;
    sets[3].gamma = 5; sets[3].lambda = 0.1; sets[3].delta = 3.8317 * 0.5; sets[3].omega_mod = 0.5;
    sets[3].theta = 1.0; sets[3].phi = 4.0;
    for (const auto& p : sets) {
        const auto traj = solve_ode_reform(p, 10.0, 2001);
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const auto s = density_matrix(traj, k);
            CHECK(s.is_physical());
            const auto d = state_derivative(traj, k);
            CHECK(std::abs(d.rho_dot.trace()) < 1e-12);
            const double f = fidelity_to_initial(traj, k);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
        }
    }
}
