#include "speedlimit/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace speedlimit {

double v_qsl(const HamiltonianSpec& h, double t, const PhaseField& wigner, MoyalOrder order) {
    detail::require_role(wigner, FieldRole::Wigner, "v_qsl");
    return l1_norm(moyal_bracket(h, t, wigner, order));
}

double v_ssl(const HamiltonianSpec& h, double t, const PhaseField& wigner) {
    detail::require_role(wigner, FieldRole::Wigner, "v_ssl");
    return l1_norm(poisson_bracket(h, t, wigner));
}

double v_csl(const HamiltonianSpec& h, double t, const PhaseField& rho) {
    detail::require_role(rho, FieldRole::Density, "v_csl");
    const PhaseField bracket = poisson_bracket(h, t, sqrt_density(rho));
    // The classical functional is defined on bare dq dp regardless of the
    // grid's bookkeeping measure.
    return l1_norm(bracket) / bracket.grid->measure_prefactor();
}

double v_csl_analytic(const UnitSystem& units, double bddot) {
    const double sq = units.sigma_q();
    const double sp = units.sigma_p();
    return std::sqrt(sq / (M_PI * sp)) * 4.0 * units.mass * sq * std::abs(bddot);
}

double v_csl_gaussian_exact(const UnitSystem& units, const GaussianSpec& spec,
                            double b, double bdot, double bddot) {
    if (!(b > 0.0)) {
        throw std::invalid_argument("v_csl_gaussian_exact: scale factor must be positive");
    }
    const double m = units.mass;
    const double w0 = units.omega0;
    const double radial = bdot / b;
    const double shear = spec.sigma_p / (2.0 * m * b * b * spec.sigma_q) -
                         m * spec.sigma_q * (bdot * bdot - b * bddot) / (2.0 * spec.sigma_p) -
                         m * w0 * w0 * spec.sigma_q / (2.0 * b * b * spec.sigma_p);
    return 8.0 * std::sqrt(spec.sigma_q * spec.sigma_p / M_PI) *
           std::sqrt(radial * radial + shear * shear);
}

double v_mt_comparator(const HamiltonianSpec& h, double t, const PhaseField& rho) {
    detail::require_role(rho, FieldRole::Density, "v_mt_comparator");
    const PhaseField bracket = poisson_bracket(h, t, sqrt_density(rho));
    return l2_norm(bracket) / std::sqrt(bracket.grid->measure_prefactor());
}

double mean_energy(const HamiltonianSpec& h, double t, const PhaseField& wigner) {
    detail::require_role(wigner, FieldRole::Wigner, "mean_energy");
    const PhaseGrid& g = *wigner.grid;
    PhaseField weighted(wigner.grid, FieldRole::Generic);
    for (int i = 0; i < g.n_q(); ++i) {
        for (int j = 0; j < g.n_p(); ++j) {
            const std::size_t k = g.index(i, j);
            weighted.values[k] = h.value(t, g.q()[i], g.p()[j]) * wigner.values[k];
        }
    }
    return integrate(weighted) / g.measure_prefactor();
}

double energy_cap(const HamiltonianSpec& h, double t, const PhaseField& wigner, double e0) {
    return 2.0 * (mean_energy(h, t, wigner) - e0) / h.units().hbar;
}

double tau_bound(double distance, double average_velocity) {
    if (!(distance >= 0.0) || !std::isfinite(distance) || !std::isfinite(average_velocity)) {
        throw std::invalid_argument(
            "tau_bound: distance and velocity must be finite, distance >= 0");
    }
    if (average_velocity < 1e-14) {
        return distance > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return distance / average_velocity;
}

}  // namespace speedlimit
