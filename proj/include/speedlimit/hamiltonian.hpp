#pragma once

#include <functional>
#include <vector>

#include "speedlimit/grid.hpp"
#include "speedlimit/units.hpp"

namespace speedlimit {

/// Polynomial Hamiltonian H(q, p, t) = sum_k c_k(t) q^{a_k} p^{b_k} with
/// time-dependent coefficients and total degree a + b <= 6. All partial
/// derivatives used by the bracket routines are evaluated analytically
/// from this representation; only the field being differentiated ever goes
/// through finite-difference stencils.
class HamiltonianSpec {
public:
    struct Term {
        std::function<double(double)> coefficient;  // c(t)
        int q_power = 0;
        int p_power = 0;
    };

    explicit HamiltonianSpec(const UnitSystem& units);

    /// H = p^2 / 2m + m omega(t)^2 q^2 / 2.
    static HamiltonianSpec harmonic(const UnitSystem& units,
                                    std::function<double(double)> omega_of_t);

    HamiltonianSpec& add_term(std::function<double(double)> coefficient,
                              int q_power, int p_power);

    const UnitSystem& units() const { return units_; }
    const std::vector<Term>& terms() const { return terms_; }

    double value(double t, double q, double p) const;

    /// Analytic mixed partial d^{jq}/dq^{jq} d^{jp}/dp^{jp} H at a point.
    double partial_value(double t, double q, double p, int jq, int jp) const;

    /// Same partial sampled on a grid. Role: Generic.
    PhaseField partial_field(double t, int jq, int jp, const GridPtr& grid) const;

    /// Highest total degree a + b over all terms.
    int max_total_degree() const;

    /// True when every term depends on q only or on p only, which is what
    /// the kick/drift characteristics integrator requires.
    bool is_separable() const;

private:
    UnitSystem units_;
    std::vector<Term> terms_;
};

}  // namespace speedlimit
