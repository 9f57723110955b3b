#pragma once

#include "speedlimit/brackets.hpp"
#include "speedlimit/grid.hpp"
#include "speedlimit/hamiltonian.hpp"
#include "speedlimit/states.hpp"

namespace speedlimit {

/// Quantum phase-space speed: l1 norm (grid measure) of the Moyal bracket
/// of the Wigner function with H.
double v_qsl(const HamiltonianSpec& h, double t, const PhaseField& wigner, MoyalOrder order);

/// Semiclassical speed: same functional with the Poisson bracket.
double v_ssl(const HamiltonianSpec& h, double t, const PhaseField& wigner);

/// Classical speed: plain-measure l1 norm of {sqrt(rho), H}. Takes the
/// density and applies the square root internally.
double v_csl(const HamiltonianSpec& h, double t, const PhaseField& rho);

/// Closed-form classical speed in the small-time/static limit,
///   sqrt(sigma_q / (pi sigma_p)) * 4 m sigma_q * |bddot|,
/// exact for the scale-transported ground-width Gaussian at bdot = 0 and
/// reported alongside the quadrature value for comparison.
double v_csl_analytic(const UnitSystem& units, double bddot);

/// Exact plain L1 norm of {sqrt(rho), H} for a centered Gaussian density
/// carried by the scale transformation, obtained by symbolic integration
/// in polar coordinates:
///   v = 8 sqrt(sigma_q sigma_p / pi) * sqrt( (bdot/b)^2 + shear^2 ),
///   shear = sigma_p / (2 m b^2 sigma_q) - m sigma_q (bdot^2 - b bddot) / (2 sigma_p)
///           - m omega0^2 sigma_q / (2 b^2 sigma_p),
/// where the trap frequency has been eliminated through the scale
/// equation omega(t)^2 = omega0^2 / b^4 - bddot / b. For ground-state
/// widths (sigma_p = m omega0 sigma_q) the first and last shear terms
/// cancel, and at bdot = 0, b = 1 the whole expression reduces to
/// v_csl_analytic.
double v_csl_gaussian_exact(const UnitSystem& units, const GaussianSpec& spec,
                            double b, double bdot, double bddot);

/// Riemannian (Cauchy-Schwarz) comparator bounding |dB/dt|: the plain
/// l2 norm of {sqrt(rho), H}.
double v_mt_comparator(const HamiltonianSpec& h, double t, const PhaseField& rho);

/// Mean energy of a Wigner function, integral H W dq dp (plain measure);
/// exact for polynomial H.
double mean_energy(const HamiltonianSpec& h, double t, const PhaseField& wigner);

/// Energy speed cap 2 (<H> - e0) / hbar.
double energy_cap(const HamiltonianSpec& h, double t, const PhaseField& wigner, double e0);

/// Speed-limit time distance / average velocity. Degenerate cases: when
/// the average velocity underflows 1e-14 the bound is 0 for vanishing
/// distance (<= 1e-12) and +infinity otherwise.
double tau_bound(double distance, double average_velocity);

}  // namespace speedlimit
