#include "speedlimit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "speedlimit/parallel.hpp"

namespace speedlimit {

namespace {

void check_omega0(double omega0) {
    if (!std::isfinite(omega0) || omega0 <= 0.0) {
        throw std::invalid_argument("FrequencyProfile: omega0 must be finite and positive");
    }
}

}  // namespace

FrequencyProfile FrequencyProfile::constant(double omega0) {
    check_omega0(omega0);
    return FrequencyProfile(Kind::Constant, omega0);
}

FrequencyProfile FrequencyProfile::sudden_quench(double omega0) {
    check_omega0(omega0);
    return FrequencyProfile(Kind::SuddenQuench, omega0);
}

FrequencyProfile FrequencyProfile::linear_ramp(double omega0, double omega_final,
                                               double ramp_time) {
    check_omega0(omega0);
    if (!std::isfinite(omega_final) || omega_final < 0.0) {
        throw std::invalid_argument("FrequencyProfile: omega_final must be finite and >= 0");
    }
    if (!std::isfinite(ramp_time) || ramp_time <= 0.0) {
        throw std::invalid_argument("FrequencyProfile: ramp_time must be finite and positive");
    }
    FrequencyProfile p(Kind::LinearRamp, omega0);
    p.omega_final_ = omega_final;
    p.ramp_time_ = ramp_time;
    return p;
}

FrequencyProfile FrequencyProfile::tabulated(double omega0,
                                             std::vector<std::pair<double, double>> table) {
    check_omega0(omega0);
    if (table.size() < 2) {
        throw std::invalid_argument("FrequencyProfile: table needs at least two samples");
    }
    for (std::size_t k = 0; k < table.size(); ++k) {
        const auto& [tk, wk] = table[k];
        if (!std::isfinite(tk) || !std::isfinite(wk) || wk < 0.0) {
            throw std::invalid_argument(
                "FrequencyProfile: table entries must be finite with omega >= 0");
        }
        if (k > 0 && tk <= table[k - 1].first) {
            throw std::invalid_argument("FrequencyProfile: table times must be strictly increasing");
        }
    }
    if (table.front().first > 0.0) {
        throw std::invalid_argument("FrequencyProfile: table must cover t = 0");
    }
    FrequencyProfile p(Kind::Tabulated, omega0);
    p.table_ = std::move(table);
    const double w0_table = p.omega(0.0);
    if (std::abs(w0_table - omega0) > 1e-12 * std::max(1.0, omega0)) {
        std::ostringstream msg;
        msg << "FrequencyProfile: table value at t=0 (" << w0_table
            << ") must equal omega0 (" << omega0 << ")";
        throw std::invalid_argument(msg.str());
    }
    return p;
}

double FrequencyProfile::omega(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return omega0_;
        case Kind::SuddenQuench:
            return t < 0.0 ? omega0_ : 0.0;
        case Kind::LinearRamp: {
            if (t <= 0.0) return omega0_;
            const double s = std::min(t, ramp_time_) / ramp_time_;
            return omega0_ + (omega_final_ - omega0_) * s;
        }
        case Kind::Tabulated: {
            if (t <= table_.front().first) return table_.front().second;
            if (t >= table_.back().first) return table_.back().second;
            auto it = std::upper_bound(table_.begin(), table_.end(), t,
                                       [](double x, const auto& row) { return x < row.first; });
            const auto& [t1, w1] = *it;
            const auto& [t0, w0] = *(it - 1);
            return w0 + (w1 - w0) * (t - t0) / (t1 - t0);
        }
    }
    return omega0_;
}

double ErmakovTrajectory::max_b() const {
    return *std::max_element(b.begin(), b.end());
}

ErmakovTrajectory solve_ermakov(const FrequencyProfile& profile, double t_end, int n_steps) {
    if (!std::isfinite(t_end) || t_end <= 0.0) {
        throw std::invalid_argument("solve_ermakov: t_end must be finite and positive");
    }
    if (n_steps < 16 || n_steps > 100'000'000) {
        throw std::invalid_argument("solve_ermakov: n_steps must lie in [16, 1e8]");
    }

    const double w0sq = profile.omega0() * profile.omega0();
    auto accel = [&](double t, double b) {
        const double w = profile.omega(t);
        return w0sq / (b * b * b) - w * w * b;
    };
    auto guard = [&](double b, double t) {
        if (!std::isfinite(b) || b <= 0.0) {
            std::ostringstream msg;
            msg << "solve_ermakov: scale factor became non-positive near t = " << t
                << "; the trap profile drives a collapse the fixed-step integrator cannot resolve";
            throw std::runtime_error(msg.str());
        }
    };

    ErmakovTrajectory traj;
    traj.t.resize(static_cast<std::size_t>(n_steps) + 1);
    traj.b.resize(traj.t.size());
    traj.bdot.resize(traj.t.size());
    traj.bddot.resize(traj.t.size());

    const double h = t_end / n_steps;
    double b = 1.0;
    double v = 0.0;
    for (int k = 0; k <= n_steps; ++k) {
        const double t = k * h;
        guard(b, t);
        traj.t[k] = t;
        traj.b[k] = b;
        traj.bdot[k] = v;
        traj.bddot[k] = accel(t, b);
        if (k == n_steps) break;

        const double k1b = v, k1v = accel(t, b);
        const double k2b = v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, b + 0.5 * h * k1b);
        const double k3b = v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, b + 0.5 * h * k2b);
        const double k4b = v + h * k3v, k4v = accel(t + h, b + h * k3b);
        b += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return traj;
}

PhaseField scaling_map(const StateSpec& state, const UnitSystem& units,
                       double b, double bdot, const GridPtr& grid) {
    if (std::holds_alternative<EigenstateSpec>(state)) {
        return ho_eigenstate_wigner(std::get<EigenstateSpec>(state).n, units, b, bdot, grid);
    }
    return gaussian_classical_density(std::get<GaussianSpec>(state), units, b, bdot, grid);
}

PhaseField propagate_characteristics(const StateSpec& state, const UnitSystem& units,
                                     const HamiltonianSpec& h, double t,
                                     const GridPtr& grid, int substeps) {
    if (!grid) throw std::invalid_argument("propagate_characteristics: null grid");
    if (substeps < 1 || substeps > 10'000'000) {
        throw std::invalid_argument("propagate_characteristics: substeps out of range");
    }
    if (!std::isfinite(t) || t < 0.0) {
        throw std::invalid_argument("propagate_characteristics: time must be finite and >= 0");
    }
    if (!h.is_separable()) {
        throw std::invalid_argument(
            "propagate_characteristics: Hamiltonian must be separable (no mixed q p terms)");
    }

    const PhaseGrid& g = *grid;
    const double q_span = g.q_max() - g.q_min();
    const double p_span = g.p_max() - g.p_min();
    const double q_lo = g.q_min() - 4.5 * q_span, q_hi = g.q_max() + 4.5 * q_span;
    const double p_lo = g.p_min() - 4.5 * p_span, p_hi = g.p_max() + 4.5 * p_span;

    auto initial_value = [&](double q, double p) {
        if (std::holds_alternative<EigenstateSpec>(state)) {
            return ho_eigenstate_wigner_value(std::get<EigenstateSpec>(state).n, units,
                                              1.0, 0.0, q, p);
        }
        return gaussian_density_value(std::get<GaussianSpec>(state), units, 1.0, 0.0, q, p);
    };

    const FieldRole role =
        std::holds_alternative<EigenstateSpec>(state) ? FieldRole::Wigner : FieldRole::Density;
    PhaseField out(grid, role);
    const double dt = -t / substeps;  // backwards to the initial time

    std::vector<std::string> failures(static_cast<std::size_t>(g.n_q()));
    parallel_for(static_cast<std::size_t>(g.n_q()), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (int j = 0; j < g.n_p(); ++j) {
                double q = g.q()[i];
                double p = g.p()[j];
                double now = t;
                // Kick/drift/kick with analytic forces; exact for free flow,
                // symplectic second order otherwise.
                for (int s = 0; s < substeps; ++s) {
                    p -= 0.5 * dt * h.partial_value(now, q, p, 1, 0);
                    q += dt * h.partial_value(now + 0.5 * dt, q, p, 0, 1);
                    now += dt;
                    p -= 0.5 * dt * h.partial_value(now, q, p, 1, 0);
                }
                if (q < q_lo || q > q_hi || p < p_lo || p > p_hi || !std::isfinite(q) ||
                    !std::isfinite(p)) {
                    std::ostringstream msg;
                    msg << "propagate_characteristics: trajectory from node (" << g.q()[i]
                        << ", " << g.p()[j] << ") escaped the 10x grid bounding box";
                    failures[i] = msg.str();
                    return;
                }
                out.values[g.index(static_cast<int>(i), j)] = initial_value(q, p);
            }
        }
    });
    for (const auto& f : failures) {
        if (!f.empty()) throw std::runtime_error(f);
    }
    return out;
}

double time_average(std::span<const double> values, std::span<const double> times) {
    if (values.size() != times.size()) {
        throw std::invalid_argument("time_average: values and times differ in length");
    }
    if (values.empty()) {
        throw std::invalid_argument("time_average: needs at least one sample");
    }
    if (values.size() == 1) return values[0];
    double integral = 0.0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        if (!(dt > 0.0)) {
            throw std::invalid_argument("time_average: times must be strictly increasing");
        }
        integral += 0.5 * dt * (values[k] + values[k - 1]);
    }
    return integral / (times.back() - times.front());
}

}  // namespace speedlimit
