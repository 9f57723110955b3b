#pragma once

#include <string>

#include "json.hpp"
#include "speedlimit/brackets.hpp"
#include "speedlimit/dynamics.hpp"
#include "speedlimit/grid.hpp"
#include "speedlimit/states.hpp"
#include "speedlimit/units.hpp"

namespace speedlimit {

/// Grid geometry in scale-invariant units: the q half-width is q_extent
/// times the oscillator length x0, the p half-width p_extent times
/// hbar/x0. `cells` counts intervals per axis, so the node count is
/// cells + 1 (odd for even `cells`, which keeps Simpson weights and puts
/// a node at the origin).
struct GridConfig {
    double q_extent = 6.0;
    double p_extent = 6.0;
    int cells = 512;
    Measure measure = Measure::Gamma;
};

/// Frequency profile selection plus its parameters (omega_final and
/// ramp_time only apply to linear_ramp, table only to tabulated).
struct ProfileConfig {
    FrequencyProfile::Kind kind = FrequencyProfile::Kind::SuddenQuench;
    double omega_final = 0.0;
    double ramp_time = 1.0;
    std::vector<std::pair<double, double>> table;

    FrequencyProfile build(double omega0) const;
};

/// Evolution window [0, t_end / omega0] sampled at `nodes` report nodes;
/// the scale equation is integrated on a grid `ermakov_oversample` times
/// finer so report nodes land exactly on solver nodes.
struct TimeConfig {
    double t_end = 3.0;
    int nodes = 257;
    int ermakov_oversample = 4;
};

struct ToggleConfig {
    MoyalOrder moyal_order = MoyalOrder::Hbar2;
    /// When true the closed-form speed column (v_csl_analytic) freezes the
    /// scale-factor curvature bddot at its t = 0 value omega0^2 instead of
    /// following the Ermakov trajectory.
    bool const_bddot = false;
    double e0 = 0.0;
};

struct OutputConfig {
    std::string csv = "report.csv";
    std::string summary = "summary.json";
};

/// Full description of one run. Lengths and momenta in the config file
/// are multiples of x0 and hbar/x0, times are multiples of 1/omega0, so
/// the same file describes the same physics in any unit system. Parsed
/// fields (state widths/centers, grid ranges, times) are converted to
/// absolute units on ingestion; to_json converts back.
struct ScenarioConfig {
    UnitSystem units{};
    GridConfig grid{};
    ProfileConfig profile{};
    StateSpec state = EigenstateSpec{0};
    TimeConfig time{};
    ToggleConfig toggles{};
    OutputConfig output{};

    /// Semantic validation beyond JSON well-formedness; throws
    /// std::invalid_argument with the offending config path in the message.
    /// Gaussian states must satisfy sigma_q * sigma_p = hbar / 2 (pure
    /// squeezed family) because the Wigner-side columns need a pure-state
    /// Wigner function.
    void validate() const;

    FrequencyProfile frequency_profile() const { return profile.build(units.omega0); }
    double t_end_absolute() const { return time.t_end / units.omega0; }

    static ScenarioConfig from_json(const nlohmann::json& j);
    static ScenarioConfig from_json_file(const std::string& path);
    nlohmann::json to_json() const;
};

}  // namespace speedlimit
