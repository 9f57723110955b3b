#pragma once

#include <string>
#include <vector>

#include "speedlimit/scenario.hpp"

namespace speedlimit {

/// Everything `run` computes: one entry per report node in each column.
/// Column meanings (also the CSV schema, in this order):
///   t               time
///   T_wigner        L1 distance of W_t from W_0 under the grid measure
///   T_classical     plain L1 distance of sqrt(rho_t) from sqrt(rho_0)
///   B               Bhattacharyya overlap of rho_t with rho_0
///   H2              squared Hellinger distance (= 1 - B for unit mass)
///   v_qsl           L1 speed of the Moyal flow (grid measure)
///   v_ssl           L1 speed of the Poisson flow (grid measure)
///   v_csl           plain L1 speed of sqrt(rho) under the Poisson flow
///   v_csl_analytic  closed-form reference for v_csl (bddot convention
///                   per toggles.const_bddot)
///   v_mt            plain L2 speed of sqrt(rho) (bounds |dB/dt|)
///   tau_qsl/ssl/csl speed-limit times distance / running average speed
///   energy_cap      2 (<H> - e0) / hbar
///   slack_*         t - tau_*; nonnegative when the bound holds
struct SpeedLimitReport {
    ScenarioConfig config;
    ErmakovTrajectory trajectory;  // at report nodes
    double q_half = 0.0, p_half = 0.0;

    std::vector<double> t, T_wigner, T_classical, B, H2;
    std::vector<double> v_qsl, v_ssl, v_csl, v_csl_analytic, v_mt;
    std::vector<double> tau_qsl, tau_ssl, tau_csl;
    std::vector<double> energy_cap, slack_qsl, slack_ssl, slack_csl;

    /// Worst |integral - 1| over all nodes for W (plain) and rho.
    double max_wigner_mass_defect = 0.0;
    double max_density_mass_defect = 0.0;

    /// Closed-form cross-checks, available when the state is a centered
    /// Gaussian family member (eigenstate n = 0 or centered Gaussian spec).
    bool has_closed_forms = false;
    std::vector<double> v_csl_exact;           // closed-form oracle per node
    double max_B_rel_dev = 0.0;                // quadrature vs closed form
    double max_v_csl_abs_dev = 0.0;            // quadrature vs closed form

    std::size_t nodes() const { return t.size(); }
};

/// Runs the scenario: solves the scale equation, sizes the grid so the
/// state stays captured at every node (extents widened by the trajectory),
/// evaluates distances, speeds, bounds and running averages at each node.
/// Throws std::runtime_error if more than 1e-3 of the state's mass leaves
/// the grid (widen the configured extents).
SpeedLimitReport build_report(const ScenarioConfig& config);

/// Classical comparison series: |dB/dt| from central differences of the
/// closed-form overlap, the quadrature L2 speed v_mt, and the closed-form
/// classical speed under both curvature conventions. Requires a centered
/// Gaussian-family state.
struct Fig1Data {
    ScenarioConfig config;
    std::vector<double> t;                    // in units of 1/omega0
    std::vector<double> abs_dB_dt;
    std::vector<double> v_mt;
    std::vector<double> v_csl_ermakov_bddot;  // bddot from the trajectory
    std::vector<double> v_csl_const_bddot;    // bddot frozen at omega0^2
};

Fig1Data build_fig1(const ScenarioConfig& config);

/// CSV writers: header row, 17-significant-digit values, atomic
/// write-then-rename so no partial file survives a failure.
void write_report_csv(const SpeedLimitReport& report, const std::string& path);
void write_fig1_csv(const Fig1Data& fig, const std::string& path);

/// summary.json: config echo, grid geometry, endpoint values, worst slack
/// per bound, mass defects, and closed-form agreement statistics.
void write_summary_json(const SpeedLimitReport& report, const std::string& path);

}  // namespace speedlimit
