#pragma once

#include <cmath>
#include <stdexcept>

namespace speedlimit {

/// Physical scales of the problem. Everything downstream is expressed in
/// terms of these three numbers; the characteristic oscillator length
/// x0 = sqrt(hbar / (m * omega0)) sets the default grid extents and the
/// widths of the reference Gaussian state.
struct UnitSystem {
    double hbar = 1.0;
    double mass = 1.0;
    double omega0 = 1.0;

    double x0() const { return std::sqrt(hbar / (mass * omega0)); }

    /// Position width of the ground-state probability density,
    /// sigma_q = x0 / sqrt(2).
    double sigma_q() const { return x0() / std::sqrt(2.0); }

    /// Momentum width of the ground-state probability density,
    /// sigma_p = hbar / (x0 * sqrt(2)).
    double sigma_p() const { return hbar / (x0() * std::sqrt(2.0)); }

    void validate() const {
        auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!positive(hbar) || !positive(mass) || !positive(omega0)) {
            throw std::invalid_argument(
                "UnitSystem: hbar, mass and omega0 must be finite and strictly positive");
        }
    }
};

}  // namespace speedlimit
