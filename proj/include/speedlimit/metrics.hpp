#pragma once

#include "speedlimit/grid.hpp"
#include "speedlimit/states.hpp"
#include "speedlimit/units.hpp"

namespace speedlimit {

/// L1 distance between two Wigner functions under the grid's measure:
/// integrate(|w_t - w_0|). Symmetric by construction.
double wigner_trace_distance(const PhaseField& w_t, const PhaseField& w_0);

/// L1 distance between the square roots of two classical densities,
/// always under the plain dq dp measure regardless of the grid's flag:
/// integral |sqrt(rho_t) - sqrt(rho_0)| dq dp.
double classical_trace_distance(const PhaseField& rho_t, const PhaseField& rho_0);

/// Bhattacharyya overlap integral sqrt(rho_t rho_0) dq dp (plain measure).
/// Clipped into [0, 1] when quadrature noise overshoots by <= 1e-9.
double bhattacharyya(const PhaseField& rho_t, const PhaseField& rho_0);

/// Closed-form overlap for a Gaussian density carried by the scale
/// transformation (b, bdot) against its own initial condition:
///   B = 2 [ (1 + b^2)^2 / b^2 + (m sigma_q bdot / sigma_p)^2 ]^{-1/2}.
/// The two-argument overload uses the ground-state widths of `units`.
double bhattacharyya_analytic(double b, double bdot, const UnitSystem& units,
                              double sigma_q, double sigma_p);
double bhattacharyya_analytic(double b, double bdot, const UnitSystem& units);

/// Hellinger distance H = sqrt( 1/2 integral (sqrt(rho_t) - sqrt(rho_0))^2 ),
/// plain measure. Satisfies B = 1 - H^2 for normalized densities.
double hellinger(const PhaseField& rho_t, const PhaseField& rho_0);

}  // namespace speedlimit
