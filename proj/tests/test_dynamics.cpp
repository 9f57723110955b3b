#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "speedlimit/dynamics.hpp"
#include "speedlimit/grid.hpp"
#include "speedlimit/states.hpp"
#include "speedlimit/units.hpp"

using namespace speedlimit;

namespace {

const UnitSystem kUnits;

GridPtr static_grid(double extent, int nodes) {
    const double x0 = kUnits.x0();
    return make_grid(-extent * x0, extent * x0, nodes, -extent * kUnits.hbar / x0,
                     extent * kUnits.hbar / x0, nodes, Measure::Plain, kUnits);
}

}  // namespace

TEST_CASE("frequency profiles evaluate piecewise as documented") {
    const auto constant = FrequencyProfile::constant(1.0);
    CHECK(constant.omega(-1.0) == 1.0);
    CHECK(constant.omega(5.0) == 1.0);

    // Right-continuous switch-off: omega(0) is already 0.
    const auto quench = FrequencyProfile::sudden_quench(1.0);
    CHECK(quench.omega(-1e-9) == 1.0);
    CHECK(quench.omega(0.0) == 0.0);
    CHECK(quench.omega(2.0) == 0.0);

    const auto ramp = FrequencyProfile::linear_ramp(1.0, 0.5, 2.0);
    CHECK(ramp.omega(-1.0) == 1.0);
    CHECK(ramp.omega(0.0) == 1.0);
    CHECK(ramp.omega(1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(ramp.omega(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ramp.omega(10.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("tabulated profiles interpolate and clamp") {
    const auto prof = FrequencyProfile::tabulated(
        1.0, {{-1.0, 1.0}, {0.0, 1.0}, {0.5, 0.6}, {2.0, 0.6}});
    CHECK(prof.omega(0.25) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(prof.omega(1.0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(prof.omega(5.0) == doctest::Approx(0.6).epsilon(1e-12));  // clamped
    CHECK(prof.omega(-3.0) == doctest::Approx(1.0).epsilon(1e-12));

    // Table must reach t = 0 with the reference frequency and ascend.
    CHECK_THROWS_AS(FrequencyProfile::tabulated(1.0, {{0.5, 1.0}, {1.0, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FrequencyProfile::tabulated(1.0, {{0.0, 0.7}, {1.0, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FrequencyProfile::tabulated(1.0, {{0.0, 1.0}, {0.0, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FrequencyProfile::tabulated(1.0, {{0.0, 1.0}, {1.0, -0.5}}),
                    std::invalid_argument);
}

TEST_CASE("quench scale factor follows the closed form") {
    const auto quench = FrequencyProfile::sudden_quench(1.0);
    const ErmakovTrajectory traj = solve_ermakov(quench, 1.0, 1024);
    CHECK(traj.b.back() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    CHECK(traj.bdot.back() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    // bddot = omega0^2 / b^3 once the trap is off: 2^{-3/2} at t = 1.
    CHECK(traj.bddot.back() == doctest::Approx(0.35355339059327373).epsilon(1e-8));
    CHECK(traj.b.front() == 1.0);
    CHECK(traj.bdot.front() == 0.0);
}

TEST_CASE("constant profile is a fixed point of the scale equation") {
    const ErmakovTrajectory traj =
        solve_ermakov(FrequencyProfile::constant(1.0), 5.0, 2048);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        CHECK(std::abs(traj.b[k] - 1.0) < 1e-10);
        CHECK(std::abs(traj.bdot[k]) < 1e-10);
    }
}

TEST_CASE("stored bddot satisfies the scale equation at every node") {
    const auto ramp = FrequencyProfile::linear_ramp(1.0, 0.5, 1.0);
    const ErmakovTrajectory traj = solve_ermakov(ramp, 3.0, 512);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double w = ramp.omega(traj.t[k]);
        const double rhs = 1.0 / (traj.b[k] * traj.b[k] * traj.b[k]) - w * w * traj.b[k];
        CHECK(std::abs(traj.bddot[k] - rhs) < 1e-12);
    }
    CHECK(traj.max_b() >= 1.0);
}

TEST_CASE("ermakov solver rejects bad windows and step counts") {
    const auto quench = FrequencyProfile::sudden_quench(1.0);
    CHECK_THROWS_AS(solve_ermakov(quench, 0.0, 1024), std::invalid_argument);
    CHECK_THROWS_AS(solve_ermakov(quench, -1.0, 1024), std::invalid_argument);
    CHECK_THROWS_AS(solve_ermakov(quench, 1.0, 8), std::invalid_argument);
}

TEST_CASE("scale map at (1, 0) reproduces the initial state exactly") {
    const GridPtr grid = static_grid(6.0, 65);
    const PhaseField w = scaling_map(EigenstateSpec{1}, kUnits, 1.0, 0.0, grid);
    const PhaseField direct = ho_eigenstate_wigner(1, kUnits, 1.0, 0.0, grid);
    CHECK(w.role == FieldRole::Wigner);
    for (std::size_t k = 0; k < w.values.size(); ++k) REQUIRE(w.values[k] == direct.values[k]);

    const GaussianSpec ground = GaussianSpec::ground_state(kUnits);
    const PhaseField rho = scaling_map(ground, kUnits, 1.0, 0.0, grid);
    const PhaseField rho_direct = gaussian_classical_density(ground, kUnits, 1.0, 0.0, grid);
    CHECK(rho.role == FieldRole::Density);
    for (std::size_t k = 0; k < rho.values.size(); ++k) {
        REQUIRE(rho.values[k] == rho_direct.values[k]);
    }
}

TEST_CASE("characteristics propagation closes a full period in a static trap") {
    // One revolution in the constant trap maps every phase-space point to
    // itself, so the backward-characteristics field must come back to the
    // initial state up to time-integration error.
    const GridPtr grid = static_grid(7.0, 65);
    const HamiltonianSpec h = HamiltonianSpec::harmonic(kUnits, [](double) { return 1.0; });
    const double period = 2.0 * M_PI;
    const PhaseField evolved =
        propagate_characteristics(EigenstateSpec{1}, kUnits, h, period, grid, 2048);
    const PhaseField initial = ho_eigenstate_wigner(1, kUnits, 1.0, 0.0, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < evolved.values.size(); ++k) {
        worst = std::max(worst, std::abs(evolved.values[k] - initial.values[k]));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("characteristics propagation requires a separable hamiltonian") {
    const GridPtr grid = static_grid(4.0, 33);
    HamiltonianSpec h = HamiltonianSpec::harmonic(kUnits, [](double) { return 1.0; });
    h.add_term([](double) { return 0.1; }, 1, 1);
    CHECK_THROWS_AS(propagate_characteristics(EigenstateSpec{0}, kUnits, h, 1.0, grid, 64),
                    std::invalid_argument);
}

TEST_CASE("time averages are trapezoid sums") {
    const std::vector<double> times{0.0, 1.0, 3.0};
    const std::vector<double> values{0.0, 1.0, 3.0};
    // [ (0+1)/2 * 1 + (1+3)/2 * 2 ] / 3
    CHECK(time_average(values, times) == doctest::Approx(1.5).epsilon(1e-15));

    const std::vector<double> single_t{2.0};
    const std::vector<double> single_v{7.0};
    CHECK(time_average(single_v, single_t) == 7.0);

    const std::vector<double> bad_times{0.0, 0.0, 1.0};
    CHECK_THROWS_AS(time_average(values, bad_times), std::invalid_argument);
    const std::vector<double> short_times{0.0, 1.0};
    CHECK_THROWS_AS(time_average(values, short_times), std::invalid_argument);
}
