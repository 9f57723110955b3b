#include "speedlimit/hamiltonian.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "speedlimit/parallel.hpp"

namespace speedlimit {

namespace {

// Falling factorial n (n-1) ... (n-j+1); the power rule prefactor for the
// j-th derivative of x^n. Zero when j > n.
double falling_factorial(int n, int j) {
    double f = 1.0;
    for (int k = 0; k < j; ++k) f *= (n - k);
    return f;
}

double int_pow(double x, int n) {
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

}  // namespace

HamiltonianSpec::HamiltonianSpec(const UnitSystem& units) : units_(units) {
    units_.validate();
}

HamiltonianSpec HamiltonianSpec::harmonic(const UnitSystem& units,
                                          std::function<double(double)> omega_of_t) {
    if (!omega_of_t) {
        throw std::invalid_argument("HamiltonianSpec::harmonic: omega_of_t must be callable");
    }
    HamiltonianSpec h(units);
    const double mass = units.mass;
    h.add_term([mass](double) { return 1.0 / (2.0 * mass); }, 0, 2);
    h.add_term([mass, omega = std::move(omega_of_t)](double t) {
        const double w = omega(t);
        return 0.5 * mass * w * w;
    }, 2, 0);
    return h;
}

HamiltonianSpec& HamiltonianSpec::add_term(std::function<double(double)> coefficient,
                                           int q_power, int p_power) {
    if (!coefficient) {
        throw std::invalid_argument("HamiltonianSpec::add_term: coefficient must be callable");
    }
    if (q_power < 0 || p_power < 0 || q_power + p_power > 6) {
        std::ostringstream msg;
        msg << "HamiltonianSpec::add_term: powers must be non-negative with total degree <= 6 "
            << "(got q^" << q_power << " p^" << p_power << ")";
        throw std::invalid_argument(msg.str());
    }
    terms_.push_back({std::move(coefficient), q_power, p_power});
    return *this;
}

double HamiltonianSpec::value(double t, double q, double p) const {
    return partial_value(t, q, p, 0, 0);
}

double HamiltonianSpec::partial_value(double t, double q, double p, int jq, int jp) const {
    if (jq < 0 || jp < 0) {
        throw std::invalid_argument("HamiltonianSpec::partial_value: derivative orders must be >= 0");
    }
    double sum = 0.0;
    for (const Term& term : terms_) {
        if (term.q_power < jq || term.p_power < jp) continue;
        const double c = term.coefficient(t);
        sum += c * falling_factorial(term.q_power, jq) * int_pow(q, term.q_power - jq) *
               falling_factorial(term.p_power, jp) * int_pow(p, term.p_power - jp);
    }
    return sum;
}

PhaseField HamiltonianSpec::partial_field(double t, int jq, int jp, const GridPtr& grid) const {
    if (!grid) throw std::invalid_argument("HamiltonianSpec::partial_field: null grid");
    PhaseField out(grid, FieldRole::Generic);
    const PhaseGrid& g = *grid;

    // Separable per-axis accumulation: evaluate sum_k c_k fq_k(q) fp_k(p)
    // one term at a time using per-axis power tables.
    std::vector<double> qpow(static_cast<std::size_t>(g.n_q()));
    std::vector<double> ppow(static_cast<std::size_t>(g.n_p()));
    for (const Term& term : terms_) {
        if (term.q_power < jq || term.p_power < jp) continue;
        const double c = term.coefficient(t) * falling_factorial(term.q_power, jq) *
                         falling_factorial(term.p_power, jp);
        if (c == 0.0) continue;
        for (int i = 0; i < g.n_q(); ++i) qpow[i] = int_pow(g.q()[i], term.q_power - jq);
        for (int j = 0; j < g.n_p(); ++j) ppow[j] = int_pow(g.p()[j], term.p_power - jp);
        parallel_for(static_cast<std::size_t>(g.n_q()), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double cq = c * qpow[i];
                double* row = out.values.data() + g.index(static_cast<int>(i), 0);
                for (int j = 0; j < g.n_p(); ++j) row[j] += cq * ppow[j];
            }
        });
    }
    return out;
}

int HamiltonianSpec::max_total_degree() const {
    int deg = 0;
    for (const Term& term : terms_) deg = std::max(deg, term.q_power + term.p_power);
    return deg;
}

bool HamiltonianSpec::is_separable() const {
    for (const Term& term : terms_) {
        if (term.q_power > 0 && term.p_power > 0) return false;
    }
    return true;
}

}  // namespace speedlimit
