#pragma once

#include "speedlimit/grid.hpp"
#include "speedlimit/hamiltonian.hpp"

namespace speedlimit {

/// Poisson bracket of a sampled field with the Hamiltonian,
///   {f, H} = (dH/dp) df/dq - (dH/dq) df/dp,
/// which is minus the convective time derivative generated by H: a field
/// transported by the flow satisfies df/dt = -{f, H}. Downstream speed
/// functionals only consume |{f, H}|, so the overall orientation drops
/// out; the convention is fixed here once so that eigenstate stationarity
/// ({W_n, H} = 0 for the matching oscillator) holds exactly.
///
/// H-derivatives are analytic; f-derivatives use the grid stencils.
PhaseField poisson_bracket(const HamiltonianSpec& h, double t, const PhaseField& f);

/// Truncation order of the sine-series deformation of the bracket.
enum class MoyalOrder { Hbar0, Hbar2 };

/// Moyal bracket of f with H, truncated at the given order in hbar^2:
///   {{f, H}} = {f, H} - hbar^2/24 [ H_qqq f_ppp - 3 H_qqp f_ppq
///                                  + 3 H_qpp f_pqq - H_ppp f_qqq ] + O(hbar^4).
/// For Hamiltonians of total degree <= 2 every third derivative of H
/// vanishes and the result equals poisson_bracket exactly (bit for bit).
PhaseField moyal_bracket(const HamiltonianSpec& h, double t, const PhaseField& f,
                         MoyalOrder order);

}  // namespace speedlimit
