#include "speedlimit/brackets.hpp"

#include <stdexcept>

#include "speedlimit/parallel.hpp"

namespace speedlimit {

namespace {

// out += scale * a .* b, elementwise.
void add_product(PhaseField& out, double scale, const PhaseField& a, const PhaseField& b) {
    parallel_for(out.values.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            out.values[k] += scale * a.values[k] * b.values[k];
        }
    });
}

}  // namespace

PhaseField poisson_bracket(const HamiltonianSpec& h, double t, const PhaseField& f) {
    detail::require_nonempty(f, "poisson_bracket");
    const GridPtr& grid = f.grid;

    const PhaseField h_q = h.partial_field(t, 1, 0, grid);
    const PhaseField h_p = h.partial_field(t, 0, 1, grid);
    const PhaseField f_q = partial_q(f);
    const PhaseField f_p = partial_p(f);

    PhaseField out(grid, FieldRole::Bracket);
    parallel_for(out.values.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            out.values[k] = h_p.values[k] * f_q.values[k] - h_q.values[k] * f_p.values[k];
        }
    });
    return out;
}

PhaseField moyal_bracket(const HamiltonianSpec& h, double t, const PhaseField& f,
                         MoyalOrder order) {
    detail::require_nonempty(f, "moyal_bracket");
    PhaseField out = poisson_bracket(h, t, f);
    if (order == MoyalOrder::Hbar0) return out;

    // The hbar^2 term couples third derivatives of H to third derivatives
    // of f. Every H-factor is identically zero for quadratic Hamiltonians,
    // so the deformation is skipped entirely in that case and the
    // degeneracy with the Poisson bracket is exact rather than numerical.
    if (h.max_total_degree() < 3) return out;

    const GridPtr& grid = f.grid;
    const PhaseField f_p = partial_p(f);
    const PhaseField f_pp = partial_p(f_p);
    const PhaseField f_ppp = partial_p(f_pp);
    const PhaseField f_ppq = partial_q(f_pp);
    const PhaseField f_q = partial_q(f);
    const PhaseField f_qq = partial_q(f_q);
    const PhaseField f_qqq = partial_q(f_qq);
    const PhaseField f_pqq = partial_p(f_qq);

    const PhaseField h_qqq = h.partial_field(t, 3, 0, grid);
    const PhaseField h_qqp = h.partial_field(t, 2, 1, grid);
    const PhaseField h_qpp = h.partial_field(t, 1, 2, grid);
    const PhaseField h_ppp = h.partial_field(t, 0, 3, grid);

    const double hbar = h.units().hbar;
    const double scale = hbar * hbar / 24.0;
    add_product(out, -scale, h_qqq, f_ppp);
    add_product(out, 3.0 * scale, h_qqp, f_ppq);
    add_product(out, -3.0 * scale, h_qpp, f_pqq);
    add_product(out, scale, h_ppp, f_qqq);
    return out;
}

}  // namespace speedlimit
