#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "speedlimit/brackets.hpp"
#include "speedlimit/grid.hpp"
#include "speedlimit/hamiltonian.hpp"
#include "speedlimit/states.hpp"
#include "speedlimit/units.hpp"

using namespace speedlimit;

namespace {

const UnitSystem kUnits;

double max_abs_diff(const PhaseField& a, const PhaseField& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
    }
    return worst;
}

}  // namespace

TEST_CASE("hamiltonian term bookkeeping") {
    HamiltonianSpec h = HamiltonianSpec::harmonic(kUnits, [](double) { return 1.0; });
    CHECK(h.max_total_degree() == 2);
    CHECK(h.is_separable());
    CHECK(h.value(0.0, 2.0, 3.0) == doctest::Approx(0.5 * 9.0 + 0.5 * 4.0).epsilon(1e-15));

    h.add_term([](double) { return 0.25; }, 1, 1);  // q p cross term
    CHECK(!h.is_separable());
    CHECK(h.max_total_degree() == 2);

    HamiltonianSpec bad(kUnits);
    CHECK_THROWS_AS(bad.add_term([](double) { return 1.0; }, 4, 3), std::invalid_argument);
    CHECK_THROWS_AS(bad.add_term([](double) { return 1.0; }, -1, 0), std::invalid_argument);
}

TEST_CASE("analytic partials of a monomial hamiltonian") {
    HamiltonianSpec h(kUnits);
    h.add_term([](double) { return 0.5; }, 2, 3);
    // d/dq d^2/dp^2 (0.5 q^2 p^3) = 0.5 * 2q * 6p = 6 q p
    CHECK(h.partial_value(0.0, 1.5, 2.0, 1, 2) == doctest::Approx(18.0).epsilon(1e-15));
    // Orders beyond the monomial vanish identically.
    CHECK(h.partial_value(0.0, 1.5, 2.0, 3, 0) == 0.0);
}

TEST_CASE("time-dependent coefficients are evaluated at the requested time") {
    HamiltonianSpec h(kUnits);
    h.add_term([](double t) { return 1.0 + t; }, 2, 0);
    CHECK(h.value(0.0, 3.0, 0.0) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(h.value(2.0, 3.0, 0.0) == doctest::Approx(27.0).epsilon(1e-15));
    const auto profile_omega = [](double t) { return t < 0.5 ? 1.0 : 2.0; };
    const HamiltonianSpec hw = HamiltonianSpec::harmonic(kUnits, profile_omega);
    CHECK(hw.value(0.0, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(hw.value(1.0, 1.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("poisson bracket of a gaussian with the free hamiltonian") {
    // H = p^2/2m: {f, H} = (p/m) df/dq. For the ground density
    // f = (2/pi) exp(-2q^2 - 2p^2) that is -4 q p f / m, an oracle that
    // never touches the stencils.
    const GridPtr grid = make_grid(-8.0, 8.0, 513, -8.0, 8.0, 513, Measure::Plain, kUnits);
    HamiltonianSpec h(kUnits);
    h.add_term([](double) { return 0.5 / kUnits.mass; }, 0, 2);
    const PhaseField f =
        gaussian_classical_density(GaussianSpec::ground_state(kUnits), kUnits, 1.0, 0.0, grid);
    const PhaseField bracket = poisson_bracket(h, 0.0, f);
    double worst = 0.0;
    for (int i = 0; i < grid->n_q(); ++i) {
        for (int j = 0; j < grid->n_p(); ++j) {
            const double q = grid->q()[i], p = grid->p()[j];
            const double expected = -4.0 * q * p * f.at(i, j) / kUnits.mass;
            worst = std::max(worst, std::abs(bracket.at(i, j) - expected));
        }
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("constant fields have vanishing brackets") {
    const GridPtr grid = make_grid(-2.0, 2.0, 33, -2.0, 2.0, 33, Measure::Plain, kUnits);
    const HamiltonianSpec h = HamiltonianSpec::harmonic(kUnits, [](double) { return 1.0; });
    PhaseField f(grid, FieldRole::Generic);
    for (auto& v : f.values) v = 3.7;
    const PhaseField bracket = poisson_bracket(h, 0.0, f);
    double worst = 0.0;
    for (double v : bracket.values) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-12);
}

TEST_CASE("matching eigenstates are stationary") {
    const GridPtr grid = make_grid(-6.0, 6.0, 1025, -6.0, 6.0, 1025, Measure::Plain, kUnits);
    const HamiltonianSpec h = HamiltonianSpec::harmonic(kUnits, [](double) { return 1.0; });
    for (int n : {0, 2}) {
        const PhaseField w = ho_eigenstate_wigner(n, kUnits, 1.0, 0.0, grid);
        CHECK(l1_norm(poisson_bracket(h, 0.0, w)) < 1e-6);
    }
}

TEST_CASE("moyal bracket collapses onto poisson for quadratic hamiltonians") {
    // Not just close: the hbar^2 stage is skipped when every third
    // H-derivative vanishes identically, so the fields are bit-identical.
    const GridPtr grid = make_grid(-6.0, 6.0, 257, -6.0, 6.0, 257, Measure::Gamma, kUnits);
    HamiltonianSpec h = HamiltonianSpec::harmonic(kUnits, [](double) { return 1.0; });
    h.add_term([](double) { return 0.3; }, 1, 1);
    const PhaseField w = ho_eigenstate_wigner(3, kUnits, 1.0, 0.0, grid);
    CHECK(max_abs_diff(moyal_bracket(h, 0.0, w, MoyalOrder::Hbar2),
                       poisson_bracket(h, 0.0, w)) == 0.0);
    CHECK(max_abs_diff(moyal_bracket(h, 0.0, w, MoyalOrder::Hbar0),
                       poisson_bracket(h, 0.0, w)) == 0.0);
}

TEST_CASE("quartic hamiltonian activates the hbar^2 correction") {
    // H = lambda q^4, f = q^2 p^3. The only surviving series term couples
    // H_qqq = 24 lambda q to f_ppp = 6 q^2:
    //   moyal - poisson = -(hbar^2/24) * 24 lambda q * 6 q^2 = -6 hbar^2 lambda q^3.
    // Degree <= 5 polynomials are inside the stencils' exactness class, so
    // the identity holds to rounding.
    const double lambda = 0.3;
    const GridPtr grid = make_grid(-2.0, 2.0, 33, -2.0, 2.0, 33, Measure::Plain, kUnits);
    HamiltonianSpec h(kUnits);
    h.add_term([lambda](double) { return lambda; }, 4, 0);

    PhaseField f(grid, FieldRole::Generic);
    for (int i = 0; i < grid->n_q(); ++i) {
        for (int j = 0; j < grid->n_p(); ++j) {
            const double q = grid->q()[i], p = grid->p()[j];
            f.at(i, j) = q * q * p * p * p;
        }
    }

    const PhaseField moyal = moyal_bracket(h, 0.0, f, MoyalOrder::Hbar2);
    const PhaseField poisson = poisson_bracket(h, 0.0, f);
    const double hbar2 = kUnits.hbar * kUnits.hbar;
    double worst = 0.0;
    for (int i = 0; i < grid->n_q(); ++i) {
        const double q = grid->q()[i];
        const double expected = -6.0 * hbar2 * lambda * q * q * q;
        for (int j = 0; j < grid->n_p(); ++j) {
            worst = std::max(worst,
                             std::abs(moyal.at(i, j) - poisson.at(i, j) - expected));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("bracket of the zero field is zero") {
    const GridPtr grid = make_grid(-2.0, 2.0, 17, -2.0, 2.0, 17, Measure::Plain, kUnits);
    HamiltonianSpec h(kUnits);
    h.add_term([](double) { return 1.0; }, 4, 0);
    PhaseField f(grid, FieldRole::Generic);
    const PhaseField out = moyal_bracket(h, 0.0, f, MoyalOrder::Hbar2);
    for (double v : out.values) CHECK(v == 0.0);
}
