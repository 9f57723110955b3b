#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "speedlimit/grid.hpp"
#include "speedlimit/units.hpp"

namespace speedlimit {

/// Laguerre polynomial L_n(x) by the standard three-term recurrence
///   (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
/// Supported for 0 <= n <= 60; larger orders are rejected because the
/// recurrence terms overflow double range before they cancel.
double laguerre(int n, double x);

/// Parameters of a Gaussian phase-space probability density
///   rho(q, p) = exp(-(q-q0)^2/sigma_q^2 - (p-p0)^2/sigma_p^2) / (pi sigma_q sigma_p).
/// Note the convention: sigma_q, sigma_p are the e^(-1) half-widths of the
/// density divided by sqrt(2), i.e. Var(q) = sigma_q^2 / 2.
struct GaussianSpec {
    double sigma_q = 0.0;
    double sigma_p = 0.0;
    double q0 = 0.0;
    double p0 = 0.0;

    static GaussianSpec ground_state(const UnitSystem& units) {
        return {units.sigma_q(), units.sigma_p(), 0.0, 0.0};
    }
    void validate() const;
};

/// Initial state of a scenario: either a harmonic-oscillator eigenstate
/// (Wigner representation, classical density derived from it) or an
/// explicit Gaussian density.
struct EigenstateSpec {
    int n = 0;
};
using StateSpec = std::variant<EigenstateSpec, GaussianSpec>;

/// Pointwise value of the n-th oscillator eigenstate Wigner function
/// carried along the scale transformation with parameters (b, bdot):
///   W_n(q, p) = (-1)^n / (pi hbar) * exp(-2 E(Q,P) / (hbar omega0))
///                                  * L_n(4 E(Q,P) / (hbar omega0)),
///   E(Q, P) = P^2 / 2m + m omega0^2 Q^2 / 2,
///   Q = q / b,  P = b p - m q bdot.
/// (b, bdot) = (1, 0) gives the static eigenstate.
double ho_eigenstate_wigner_value(int n, const UnitSystem& units,
                                  double b, double bdot, double q, double p);

/// Samples ho_eigenstate_wigner_value on a grid. Role: Wigner.
PhaseField ho_eigenstate_wigner(int n, const UnitSystem& units,
                                double b, double bdot, const GridPtr& grid);

/// Pointwise value of a Gaussian density carried along the same scale
/// transformation: rho_t(q, p) = rho_0(Q, P).
double gaussian_density_value(const GaussianSpec& spec, const UnitSystem& units,
                              double b, double bdot, double q, double p);

/// Samples gaussian_density_value on a grid. Role: Density.
PhaseField gaussian_classical_density(const GaussianSpec& spec, const UnitSystem& units,
                                      double b, double bdot, const GridPtr& grid);

/// Wigner function matching a Gaussian density spec, W = sqrt(rho / (2 pi hbar))
/// pointwise. Only specs with sigma_q * sigma_p = hbar / 2 describe a pure
/// (squeezed) state; other width products are rejected. Role: Wigner.
PhaseField gaussian_wigner(const GaussianSpec& spec, const UnitSystem& units,
                           double b, double bdot, const GridPtr& grid);

/// A wavefunction sampled on a uniform position grid.
struct SampledWavefunction {
    double q_min = 0.0;
    double dq = 0.0;
    std::vector<std::complex<double>> psi;

    double q_max() const { return q_min + dq * (psi.empty() ? 0 : psi.size() - 1); }
    /// Linear interpolation between samples; zero outside the sampled window.
    std::complex<double> value(double q) const;
    /// Throws if the sample count is < 8, dq <= 0, or the L2 norm is not 1
    /// within 1e-6.
    void validate() const;
};

/// Wigner transform of a sampled wavefunction,
///   W(q, p) = 1/(pi hbar) Integral dy psi(q - y) conj(psi)(q + y) e^{-2 i p y / hbar},
/// evaluated with the trapezoid rule on the wavefunction's native spacing.
/// The grid's q-range must lie inside the sampled support. The imaginary
/// residue of the integral is checked (max |Im| < 1e-8) and discarded.
PhaseField wigner_from_wavefunction(const SampledWavefunction& psi, const UnitSystem& units,
                                    const GridPtr& grid);

/// Classical density associated with a pure-state Wigner function:
/// rho = 2 pi hbar W^2. Requires role Wigner; returns role Density.
PhaseField classical_from_wigner(const PhaseField& w, const UnitSystem& units);

/// Pointwise square root of a density. Values in [-1e-14, 0) are treated
/// as quadrature noise and clamped to zero; anything more negative throws.
/// Requires role Density; returns role SqrtDensity.
PhaseField sqrt_density(const PhaseField& rho);

}  // namespace speedlimit
