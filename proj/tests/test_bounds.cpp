#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "speedlimit/bounds.hpp"
#include "speedlimit/dynamics.hpp"
#include "speedlimit/grid.hpp"
#include "speedlimit/metrics.hpp"
#include "speedlimit/states.hpp"
#include "speedlimit/units.hpp"

using namespace speedlimit;

namespace {

const UnitSystem kUnits;

GridPtr static_grid(double extent, int nodes, Measure measure = Measure::Plain) {
    const double x0 = kUnits.x0();
    return make_grid(-extent * x0, extent * x0, nodes, -extent * kUnits.hbar / x0,
                     extent * kUnits.hbar / x0, nodes, measure, kUnits);
}

// Hamiltonian of the quench: trap on for t < 0, free flight afterwards.
HamiltonianSpec quench_hamiltonian() {
    const auto profile = FrequencyProfile::sudden_quench(kUnits.omega0);
    return HamiltonianSpec::harmonic(kUnits, [profile](double t) { return profile.omega(t); });
}

void quench_params(double s, double& b, double& bdot) {
    b = std::sqrt(1.0 + s * s);
    bdot = s / b;
}

}  // namespace

TEST_CASE("wigner speed against a finite-difference-in-time oracle") {
    // The quench has exact snapshots at any time, so the L1 speed can be
    // estimated as T(W(t+e), W(t-e)) / 2e without touching the bracket
    // code. Central differencing leaves an O(e^2) bias.
    const GridPtr grid = static_grid(10.0, 513, Measure::Gamma);
    const HamiltonianSpec h = quench_hamiltonian();
    const double t = 1.0, eps = 1e-3;
    double b, bdot;
    quench_params(t, b, bdot);
    const PhaseField w = ho_eigenstate_wigner(0, kUnits, b, bdot, grid);

    double bp, bdotp, bm, bdotm;
    quench_params(t + eps, bp, bdotp);
    quench_params(t - eps, bm, bdotm);
    const PhaseField w_plus = ho_eigenstate_wigner(0, kUnits, bp, bdotp, grid);
    const PhaseField w_minus = ho_eigenstate_wigner(0, kUnits, bm, bdotm, grid);
    const double fd = wigner_trace_distance(w_plus, w_minus) / (2.0 * eps);

    const double v = v_qsl(h, t, w, MoyalOrder::Hbar2);
    CHECK(v == doctest::Approx(fd).epsilon(1e-4));
}

TEST_CASE("wigner speed of the quenched ground state is 2 omega0 / pi") {
    // Plain measure; the grid-measure value just carries the 2 pi hbar
    // prefactor. The speed is constant along the whole quench. The |bracket|
    // integrand kinks along its zero curves, which limits Simpson to a few
    // parts in 1e4 at this resolution.
    const HamiltonianSpec h = quench_hamiltonian();
    for (double s : {0.25, 1.0, 2.5}) {
        double b, bdot;
        quench_params(s, b, bdot);
        const GridPtr plain = static_grid(10.0, 513, Measure::Plain);
        const PhaseField w = ho_eigenstate_wigner(0, kUnits, b, bdot, plain);
        CHECK(v_qsl(h, s, w, MoyalOrder::Hbar2) ==
              doctest::Approx(2.0 / M_PI).epsilon(1e-3));
    }
    const GridPtr gamma = static_grid(10.0, 513, Measure::Gamma);
    double b, bdot;
    quench_params(1.0, b, bdot);
    const PhaseField w = ho_eigenstate_wigner(0, kUnits, b, bdot, gamma);
    CHECK(v_qsl(h, 1.0, w, MoyalOrder::Hbar2) ==
          doctest::Approx(4.0 * kUnits.hbar).epsilon(1e-3));
}

TEST_CASE("semiclassical speed coincides bit for bit for quadratic hamiltonians") {
    const GridPtr grid = static_grid(9.0, 257, Measure::Gamma);
    const HamiltonianSpec h = quench_hamiltonian();
    double b, bdot;
    quench_params(1.5, b, bdot);
    const PhaseField w = ho_eigenstate_wigner(2, kUnits, b, bdot, grid);
    CHECK(v_qsl(h, 1.5, w, MoyalOrder::Hbar2) == v_ssl(h, 1.5, w));
}

TEST_CASE("classical speed of the matched gaussian is constant 4 omega0 / sqrt(2 pi)") {
    const HamiltonianSpec h = quench_hamiltonian();
    const GaussianSpec ground = GaussianSpec::ground_state(kUnits);
    const double expected = 4.0 / std::sqrt(2.0 * M_PI);  // 1.5957691216057308
    for (double s : {1.0, 3.0}) {
        double b, bdot;
        quench_params(s, b, bdot);
        const GridPtr grid = static_grid(10.0, 513);
        const PhaseField rho = gaussian_classical_density(ground, kUnits, b, bdot, grid);
        // Same kink-limited quadrature accuracy as the Wigner speed above.
        CHECK(v_csl(h, s, rho) == doctest::Approx(expected).epsilon(1e-3));
    }
}

TEST_CASE("closed-form classical speed: matched widths") {
    const double expected = 1.5957691216057308;
    // At the quench start (b, bdot, bddot) = (1, 0, omega0^2)...
    CHECK(v_csl_gaussian_exact(kUnits, GaussianSpec::ground_state(kUnits), 1.0, 0.0, 1.0) ==
          doctest::Approx(expected).epsilon(1e-14));
    // ...and further along the trajectory the speed has not moved.
    double b, bdot;
    quench_params(1.0, b, bdot);
    CHECK(v_csl_gaussian_exact(kUnits, GaussianSpec::ground_state(kUnits), b, bdot,
                               1.0 / (b * b * b)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("closed-form classical speed: squeezed widths against quadrature") {
    // A squeezed pure state (sigma_q sigma_p = hbar/2, but mismatched to
    // the trap) exercises every term of the closed form; the quadrature
    // route knows nothing about it.
    const GaussianSpec squeezed{1.0, 0.5, 0.0, 0.0};
    const HamiltonianSpec h = quench_hamiltonian();
    double b, bdot;
    quench_params(1.0, b, bdot);
    const double bddot = 1.0 / (b * b * b);

    const GridPtr grid = static_grid(10.0, 513);
    const PhaseField rho = gaussian_classical_density(squeezed, kUnits, b, bdot, grid);
    const double quad = v_csl(h, 1.0, rho);
    const double closed = v_csl_gaussian_exact(kUnits, squeezed, b, bdot, bddot);
    CHECK(quad == doctest::Approx(closed).epsilon(1e-3));
}

TEST_CASE("simple closed-form speed is linear in the curvature") {
    const double base = v_csl_analytic(kUnits, 1.0);
    CHECK(base == doctest::Approx(1.5957691216057308).epsilon(1e-14));
    CHECK(v_csl_analytic(kUnits, 2.0) == doctest::Approx(2.0 * base).epsilon(1e-14));
    CHECK(v_csl_analytic(kUnits, -1.0) == doctest::Approx(base).epsilon(1e-14));  // |bddot|
}

TEST_CASE("comparator speed of the quenched gaussian is omega0 / 2") {
    const HamiltonianSpec h = quench_hamiltonian();
    const GaussianSpec ground = GaussianSpec::ground_state(kUnits);
    for (double s : {0.0, 1.0}) {
        double b, bdot;
        quench_params(s, b, bdot);
        const GridPtr grid = static_grid(10.0, 513);
        const PhaseField rho = gaussian_classical_density(ground, kUnits, b, bdot, grid);
        CHECK(v_mt_comparator(h, s, rho) == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("mean energy and the energy cap") {
    const GridPtr grid = static_grid(9.0, 257);
    const HamiltonianSpec trap = HamiltonianSpec::harmonic(kUnits, [](double) { return 1.0; });
    const PhaseField w0 = ho_eigenstate_wigner(0, kUnits, 1.0, 0.0, grid);
    CHECK(mean_energy(trap, 0.0, w0) == doctest::Approx(0.5).epsilon(1e-9));

    // After the quench only kinetic energy remains: <p^2>/2m = hbar omega0/4,
    // and the scale transformation conserves it along the free flight. The
    // state spreads with b, so the box must be wide enough that the
    // p^2-weighted tail it cuts stays below the tolerance.
    const HamiltonianSpec h = quench_hamiltonian();
    const GridPtr wide = static_grid(14.0, 341);
    for (double s : {0.0, 1.0, 2.0}) {
        double b, bdot;
        quench_params(s, b, bdot);
        const PhaseField w = ho_eigenstate_wigner(0, kUnits, b, bdot, wide);
        CHECK(mean_energy(h, s, w) == doctest::Approx(0.25).epsilon(1e-8));
    }

    double b, bdot;
    quench_params(1.0, b, bdot);
    const PhaseField w = ho_eigenstate_wigner(0, kUnits, b, bdot, grid);
    CHECK(energy_cap(h, 1.0, w, 0.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(energy_cap(h, 1.0, w, 0.25) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("speed-limit times from distance and average speed") {
    CHECK(tau_bound(0.5, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(tau_bound(0.0, 0.0) == 0.0);
    CHECK(tau_bound(1e-15, 0.0) == 0.0);  // no distance, no claim
    CHECK(std::isinf(tau_bound(0.5, 0.0)));
    CHECK_THROWS_AS(tau_bound(-0.1, 1.0), std::invalid_argument);
}
