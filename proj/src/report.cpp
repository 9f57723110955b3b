#include "speedlimit/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "speedlimit/bounds.hpp"
#include "speedlimit/metrics.hpp"

namespace speedlimit {

namespace {

// Report-node subsample of the finely integrated scale trajectory; report
// node k sits exactly on solver node k * oversample.
ErmakovTrajectory subsample(const ErmakovTrajectory& fine, int nodes, int oversample) {
    ErmakovTrajectory out;
    out.t.reserve(nodes);
    out.b.reserve(nodes);
    out.bdot.reserve(nodes);
    out.bddot.reserve(nodes);
    for (int k = 0; k < nodes; ++k) {
        const std::size_t i = static_cast<std::size_t>(k) * oversample;
        out.t.push_back(fine.t[i]);
        out.b.push_back(fine.b[i]);
        out.bdot.push_back(fine.bdot[i]);
        out.bddot.push_back(fine.bddot[i]);
    }
    return out;
}

// Grid half-widths that keep the transported state captured: the inverse
// scale map sends |Q| <= Eq, |P| <= Ep to |q| <= b Eq and
// |p| <= Ep / b + m Eq x0 |bdot| (one factor of the unit momentum hbar/x0
// per term), so the widest excursion over the whole fine trajectory sets
// the box.
void widened_extents(const ScenarioConfig& config, const ErmakovTrajectory& fine,
                     double& q_half, double& p_half) {
    const double x0 = config.units.x0();
    double max_b = 1.0;
    double p_factor = config.grid.p_extent;
    for (std::size_t i = 0; i < fine.size(); ++i) {
        max_b = std::max(max_b, fine.b[i]);
        p_factor = std::max(p_factor, config.grid.p_extent / fine.b[i] +
                                          config.grid.q_extent *
                                              std::abs(fine.bdot[i]) / config.units.omega0);
    }
    q_half = config.grid.q_extent * x0 * max_b;
    p_half = (config.units.hbar / x0) * p_factor;
}

// Centered Gaussian-family view of the state, when one exists: the n = 0
// eigenstate is the ground-width Gaussian, and explicit Gaussian specs
// qualify when centered. Eigenstates n >= 1 have no closed forms.
bool closed_form_spec(const ScenarioConfig& config, GaussianSpec& out) {
    if (const auto* eigen = std::get_if<EigenstateSpec>(&config.state)) {
        if (eigen->n != 0) return false;
        out = GaussianSpec::ground_state(config.units);
        return true;
    }
    const auto& g = std::get<GaussianSpec>(config.state);
    if (g.q0 != 0.0 || g.p0 != 0.0) return false;
    out = g;
    return true;
}

double plain_mass(const PhaseField& f) {
    return integrate(f) / f.grid->measure_prefactor();
}

struct RatioStats {
    double mean = 0.0, min = 0.0, max = 0.0;
    int count = 0;
};

RatioStats ratio_stats(const std::vector<double>& numer, const std::vector<double>& denom) {
    RatioStats s;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t k = 0; k < numer.size(); ++k) {
        if (std::abs(denom[k]) < 1e-300) continue;  // formula value 0: ratio undefined
        const double r = numer[k] / denom[k];
        s.min = std::min(s.min, r);
        s.max = std::max(s.max, r);
        sum += r;
        ++s.count;
    }
    if (s.count > 0) s.mean = sum / s.count;
    return s;
}

void format_value(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    line += buf;
}

// All file output goes through a temp-file-plus-rename so an exception or
// crash mid-write never leaves a partial file at the target path.
void write_atomically(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(target.parent_path(), ec);
        if (ec) {
            throw std::runtime_error("cannot create directory '" +
                                     target.parent_path().string() + "': " + ec.message());
        }
    }
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place at '" + path + "'");
    }
}

}  // namespace

SpeedLimitReport build_report(const ScenarioConfig& config) {
    config.validate();
    const UnitSystem& units = config.units;
    const FrequencyProfile profile = config.frequency_profile();
    const int nodes = config.time.nodes;
    // The solver wants at least 16 RK4 steps; raise the oversampling for
    // very short node lists so report nodes stay aligned with solver nodes.
    int oversample = config.time.ermakov_oversample;
    while ((nodes - 1) * oversample < 16) oversample *= 2;

    const ErmakovTrajectory fine =
        solve_ermakov(profile, config.t_end_absolute(), (nodes - 1) * oversample);

    SpeedLimitReport rep;
    rep.config = config;
    rep.trajectory = subsample(fine, nodes, oversample);
    widened_extents(config, fine, rep.q_half, rep.p_half);

    const int n_axis = config.grid.cells + 1;
    const GridPtr grid = make_grid(-rep.q_half, rep.q_half, n_axis, -rep.p_half, rep.p_half,
                                   n_axis, config.grid.measure, units);
    const double prefactor = grid->measure_prefactor();

    const HamiltonianSpec h =
        HamiltonianSpec::harmonic(units, [profile](double t) { return profile.omega(t); });

    const auto* eigen = std::get_if<EigenstateSpec>(&config.state);
    auto wigner_at = [&](double b, double bdot) {
        return eigen ? ho_eigenstate_wigner(eigen->n, units, b, bdot, grid)
                     : gaussian_wigner(std::get<GaussianSpec>(config.state), units, b, bdot, grid);
    };
    auto density_at = [&](const PhaseField& w, double b, double bdot) {
        return eigen ? classical_from_wigner(w, units)
                     : gaussian_classical_density(std::get<GaussianSpec>(config.state), units, b,
                                                  bdot, grid);
    };

    GaussianSpec closed;
    rep.has_closed_forms = closed_form_spec(config, closed);

    const PhaseField w0 = wigner_at(rep.trajectory.b[0], rep.trajectory.bdot[0]);
    const PhaseField rho0 = density_at(w0, rep.trajectory.b[0], rep.trajectory.bdot[0]);

    auto& r = rep;
    for (auto* column : {&r.t, &r.T_wigner, &r.T_classical, &r.B, &r.H2, &r.v_qsl, &r.v_ssl,
                         &r.v_csl, &r.v_csl_analytic, &r.v_mt, &r.tau_qsl, &r.tau_ssl, &r.tau_csl,
                         &r.energy_cap, &r.slack_qsl, &r.slack_ssl, &r.slack_csl,
                         &r.v_csl_exact}) {
        column->reserve(nodes);
    }

    // Running trapezoid integrals of the three speeds; dividing by the
    // elapsed time reproduces time_average() on each prefix term by term.
    double int_qsl = 0.0, int_ssl = 0.0, int_csl = 0.0;

    for (int k = 0; k < nodes; ++k) {
        const double t = rep.trajectory.t[k];
        const double b = rep.trajectory.b[k];
        const double bdot = rep.trajectory.bdot[k];
        const double bddot = rep.trajectory.bddot[k];

        const PhaseField w = k == 0 ? w0 : wigner_at(b, bdot);
        const PhaseField rho = k == 0 ? rho0 : density_at(w, b, bdot);

        rep.max_wigner_mass_defect =
            std::max(rep.max_wigner_mass_defect, std::abs(plain_mass(w) - 1.0));
        rep.max_density_mass_defect =
            std::max(rep.max_density_mass_defect, std::abs(plain_mass(rho) - 1.0));

        rep.t.push_back(t);
        rep.T_wigner.push_back(k == 0 ? 0.0 : wigner_trace_distance(w, w0));
        rep.T_classical.push_back(k == 0 ? 0.0 : classical_trace_distance(rho, rho0));
        rep.B.push_back(bhattacharyya(rho, rho0));
        const double hell = hellinger(rho, rho0);
        rep.H2.push_back(hell * hell);

        rep.v_qsl.push_back(v_qsl(h, t, w, config.toggles.moyal_order));
        rep.v_ssl.push_back(v_ssl(h, t, w));

        // One bracket evaluation serves both classical speeds.
        const PhaseField bracket = poisson_bracket(h, t, sqrt_density(rho));
        rep.v_csl.push_back(l1_norm(bracket) / prefactor);
        rep.v_mt.push_back(l2_norm(bracket) / std::sqrt(prefactor));

        const double bddot_ref =
            config.toggles.const_bddot ? units.omega0 * units.omega0 : bddot;
        rep.v_csl_analytic.push_back(v_csl_analytic(units, bddot_ref));

        rep.energy_cap.push_back(energy_cap(h, t, w, config.toggles.e0));

        if (rep.has_closed_forms) {
            rep.v_csl_exact.push_back(v_csl_gaussian_exact(units, closed, b, bdot, bddot));
            const double b_exact =
                bhattacharyya_analytic(b, bdot, units, closed.sigma_q, closed.sigma_p);
            rep.max_B_rel_dev =
                std::max(rep.max_B_rel_dev, std::abs(rep.B.back() - b_exact) / b_exact);
            rep.max_v_csl_abs_dev = std::max(rep.max_v_csl_abs_dev,
                                             std::abs(rep.v_csl.back() - rep.v_csl_exact.back()));
        }

        if (k > 0) {
            const double dt = t - rep.t[k - 1];
            int_qsl += 0.5 * dt * (rep.v_qsl[k] + rep.v_qsl[k - 1]);
            int_ssl += 0.5 * dt * (rep.v_ssl[k] + rep.v_ssl[k - 1]);
            int_csl += 0.5 * dt * (rep.v_csl[k] + rep.v_csl[k - 1]);
        }
        const double elapsed = t - rep.t[0];
        const double avg_qsl = k == 0 ? rep.v_qsl[0] : int_qsl / elapsed;
        const double avg_ssl = k == 0 ? rep.v_ssl[0] : int_ssl / elapsed;
        const double avg_csl = k == 0 ? rep.v_csl[0] : int_csl / elapsed;

        rep.tau_qsl.push_back(tau_bound(rep.T_wigner[k], avg_qsl));
        rep.tau_ssl.push_back(tau_bound(rep.T_wigner[k], avg_ssl));
        rep.tau_csl.push_back(tau_bound(rep.T_classical[k], avg_csl));
        rep.slack_qsl.push_back(elapsed - rep.tau_qsl[k]);
        rep.slack_ssl.push_back(elapsed - rep.tau_ssl[k]);
        rep.slack_csl.push_back(elapsed - rep.tau_csl[k]);
    }

    const double worst_defect =
        std::max(rep.max_wigner_mass_defect, rep.max_density_mass_defect);
    if (worst_defect > 1e-3) {
        throw std::runtime_error(
            "build_report: more than 0.1% of the state's mass lies outside the grid; "
            "increase grid.q_extent / grid.p_extent");
    }
    return rep;
}

Fig1Data build_fig1(const ScenarioConfig& config) {
    config.validate();
    GaussianSpec closed;
    if (!closed_form_spec(config, closed)) {
        throw std::invalid_argument(
            "fig1 requires a centered Gaussian-family state (eigenstate n = 0 or a gaussian "
            "with q0 = p0 = 0): the overlap series has no closed form otherwise");
    }
    const UnitSystem& units = config.units;
    const FrequencyProfile profile = config.frequency_profile();
    const int nodes = config.time.nodes;
    int oversample = config.time.ermakov_oversample;
    while ((nodes - 1) * oversample < 16) oversample *= 2;

    const ErmakovTrajectory fine =
        solve_ermakov(profile, config.t_end_absolute(), (nodes - 1) * oversample);
    const ErmakovTrajectory traj = subsample(fine, nodes, oversample);

    double q_half = 0.0, p_half = 0.0;
    widened_extents(config, fine, q_half, p_half);
    const int n_axis = config.grid.cells + 1;
    const GridPtr grid = make_grid(-q_half, q_half, n_axis, -p_half, p_half, n_axis,
                                   config.grid.measure, units);

    const HamiltonianSpec h =
        HamiltonianSpec::harmonic(units, [profile](double t) { return profile.omega(t); });

    Fig1Data fig;
    fig.config = config;
    std::vector<double> overlap(nodes);
    for (int k = 0; k < nodes; ++k) {
        fig.t.push_back(traj.t[k] * units.omega0);
        overlap[k] = bhattacharyya_analytic(traj.b[k], traj.bdot[k], units, closed.sigma_q,
                                            closed.sigma_p);

        const PhaseField rho =
            gaussian_classical_density(closed, units, traj.b[k], traj.bdot[k], grid);
        fig.v_mt.push_back(v_mt_comparator(h, traj.t[k], rho));

        fig.v_csl_ermakov_bddot.push_back(v_csl_analytic(units, traj.bddot[k]));
        fig.v_csl_const_bddot.push_back(v_csl_analytic(units, units.omega0 * units.omega0));
    }

    // Central differences on the uniform report times; second-order
    // one-sided stencils at the ends. The axis is already in 1/omega0
    // units, so the derivative column is in omega0 units to match.
    const double dt = nodes > 1 ? fig.t[1] - fig.t[0] : 1.0;
    for (int k = 0; k < nodes; ++k) {
        double d;
        if (nodes < 3) {
            d = 0.0;
        } else if (k == 0) {
            d = (-3.0 * overlap[0] + 4.0 * overlap[1] - overlap[2]) / (2.0 * dt);
        } else if (k == nodes - 1) {
            d = (3.0 * overlap[k] - 4.0 * overlap[k - 1] + overlap[k - 2]) / (2.0 * dt);
        } else {
            d = (overlap[k + 1] - overlap[k - 1]) / (2.0 * dt);
        }
        fig.abs_dB_dt.push_back(std::abs(d));
    }
    return fig;
}

void write_report_csv(const SpeedLimitReport& report, const std::string& path) {
    std::string out =
        "t,T_wigner,T_classical,B,H2,v_qsl,v_ssl,v_csl,v_csl_analytic,v_mt,"
        "tau_qsl,tau_ssl,tau_csl,energy_cap,slack_qsl,slack_ssl,slack_csl\n";
    for (std::size_t k = 0; k < report.nodes(); ++k) {
        const double row[] = {report.t[k],        report.T_wigner[k], report.T_classical[k],
                              report.B[k],        report.H2[k],       report.v_qsl[k],
                              report.v_ssl[k],    report.v_csl[k],    report.v_csl_analytic[k],
                              report.v_mt[k],     report.tau_qsl[k],  report.tau_ssl[k],
                              report.tau_csl[k],  report.energy_cap[k],
                              report.slack_qsl[k], report.slack_ssl[k], report.slack_csl[k]};
        bool first = true;
        for (double v : row) {
            if (!first) out += ',';
            format_value(out, v);
            first = false;
        }
        out += '\n';
    }
    write_atomically(path, out);
}

void write_fig1_csv(const Fig1Data& fig, const std::string& path) {
    std::string out = "t,abs_dB_dt,v_mt,v_csl_ermakov_bddot,v_csl_const_bddot\n";
    for (std::size_t k = 0; k < fig.t.size(); ++k) {
        const double row[] = {fig.t[k], fig.abs_dB_dt[k], fig.v_mt[k],
                              fig.v_csl_ermakov_bddot[k], fig.v_csl_const_bddot[k]};
        bool first = true;
        for (double v : row) {
            if (!first) out += ',';
            format_value(out, v);
            first = false;
        }
        out += '\n';
    }
    write_atomically(path, out);
}

void write_summary_json(const SpeedLimitReport& report, const std::string& path) {
    using nlohmann::json;
    const std::size_t last = report.nodes() - 1;

    auto column_min = [](const std::vector<double>& v) {
        double m = std::numeric_limits<double>::infinity();
        for (double x : v) m = std::min(m, x);
        return m;
    };

    json j;
    j["config"] = report.config.to_json();
    j["grid"] = {{"q_half", report.q_half},
                 {"p_half", report.p_half},
                 {"nodes_per_axis", report.config.grid.cells + 1}};
    j["endpoint"] = {{"t", report.t[last]},
                     {"T_wigner", report.T_wigner[last]},
                     {"T_classical", report.T_classical[last]},
                     {"B", report.B[last]},
                     {"tau_qsl", report.tau_qsl[last]},
                     {"tau_ssl", report.tau_ssl[last]},
                     {"tau_csl", report.tau_csl[last]},
                     {"energy_cap", report.energy_cap[last]}};
    j["worst_slack"] = {{"qsl", column_min(report.slack_qsl)},
                        {"ssl", column_min(report.slack_ssl)},
                        {"csl", column_min(report.slack_csl)}};
    j["mass_defects"] = {{"wigner", report.max_wigner_mass_defect},
                         {"density", report.max_density_mass_defect}};

    if (report.has_closed_forms) {
        // The closed-form / formula ratios use both curvature conventions
        // so constancy in t is visible regardless of toggles.const_bddot.
        std::vector<double> formula_const(report.nodes()), formula_ermakov(report.nodes());
        const double w0sq = report.config.units.omega0 * report.config.units.omega0;
        for (std::size_t k = 0; k < report.nodes(); ++k) {
            formula_const[k] = v_csl_analytic(report.config.units, w0sq);
            formula_ermakov[k] = v_csl_analytic(report.config.units, report.trajectory.bddot[k]);
        }
        auto stats_json = [](const RatioStats& s) -> json {
            if (s.count == 0) return nullptr;
            return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"nodes", s.count}};
        };
        j["closed_form_agreement"] = {
            {"bhattacharyya_max_rel_dev", report.max_B_rel_dev},
            {"v_csl_max_abs_dev", report.max_v_csl_abs_dev},
            {"v_csl_exact_over_analytic_const_bddot",
             stats_json(ratio_stats(report.v_csl_exact, formula_const))},
            {"v_csl_exact_over_analytic_ermakov_bddot",
             stats_json(ratio_stats(report.v_csl_exact, formula_ermakov))}};
    } else {
        j["closed_form_agreement"] = nullptr;
    }

    write_atomically(path, j.dump(2) + "\n");
}

}  // namespace speedlimit
