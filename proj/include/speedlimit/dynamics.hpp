#pragma once

#include <span>
#include <utility>
#include <vector>

#include "speedlimit/grid.hpp"
#include "speedlimit/hamiltonian.hpp"
#include "speedlimit/states.hpp"
#include "speedlimit/units.hpp"

namespace speedlimit {

/// Trap frequency as a function of time. omega(t) is non-negative and
/// finite on the evolution window; omega0 is the pre-evolution reference
/// frequency the initial state belongs to.
///
/// The sudden-quench profile is right-continuous at the switch: omega(t)
/// equals omega0 for t < 0 and 0 from t = 0 on, so integrating over
/// [0, T] sees exactly the post-quench generator (the discontinuity lives
/// in the profile, not the state).
class FrequencyProfile {
public:
    enum class Kind { Constant, SuddenQuench, LinearRamp, Tabulated };

    static FrequencyProfile constant(double omega0);
    static FrequencyProfile sudden_quench(double omega0);
    static FrequencyProfile linear_ramp(double omega0, double omega_final, double ramp_time);
    /// Piecewise-linear interpolation through (t, omega) samples; clamped
    /// to the end values outside the table. The table must start at t <= 0
    /// with omega(0) = omega0 and have strictly increasing times.
    static FrequencyProfile tabulated(double omega0, std::vector<std::pair<double, double>> table);

    double omega(double t) const;
    double omega0() const { return omega0_; }
    Kind kind() const { return kind_; }

private:
    FrequencyProfile(Kind kind, double omega0) : kind_(kind), omega0_(omega0) {}

    Kind kind_;
    double omega0_ = 1.0;
    double omega_final_ = 0.0;
    double ramp_time_ = 0.0;
    std::vector<std::pair<double, double>> table_;
};

/// Solution samples of the auxiliary scale equation
///   bddot + omega(t)^2 b = omega0^2 / b^3,   b(0) = 1, bdot(0) = 0.
/// bddot is recomputed from the right-hand side at every node, so the
/// stored triple satisfies the equation identically.
struct ErmakovTrajectory {
    std::vector<double> t;
    std::vector<double> b;
    std::vector<double> bdot;
    std::vector<double> bddot;

    std::size_t size() const { return t.size(); }
    double max_b() const;
};

/// Classic fixed-step RK4 on (b, bdot) over [0, t_end] with n_steps steps.
/// Throws on non-positive b (trap collapse) or non-finite state.
ErmakovTrajectory solve_ermakov(const FrequencyProfile& profile, double t_end, int n_steps);

/// Builds the state's field at scale parameters (b, bdot): eigenstates
/// yield their Wigner function, Gaussian specs their classical density.
/// (b, bdot) = (1, 0) reproduces the initial field.
PhaseField scaling_map(const StateSpec& state, const UnitSystem& units,
                       double b, double bdot, const GridPtr& grid);

/// Independent propagation path used to cross-check scaling_map: for each
/// grid node, integrate Hamilton's equations backwards from time t to 0
/// with the kick/drift (velocity-Verlet) scheme in `substeps` steps, then
/// evaluate the initial state's analytic field at the preimage. Requires a
/// separable Hamiltonian. Trajectories leaving a 10x-widened bounding box
/// of the grid abort the propagation.
PhaseField propagate_characteristics(const StateSpec& state, const UnitSystem& units,
                                     const HamiltonianSpec& h, double t,
                                     const GridPtr& grid, int substeps);

/// Trapezoid time average of samples over [times.front(), times.back()].
/// A single sample is returned as-is; times must be strictly increasing.
double time_average(std::span<const double> values, std::span<const double> times);

}  // namespace speedlimit
