#include "speedlimit/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace speedlimit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config: " + path + ": " + what);
}

void check_keys(const json& j, const char* path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) fail(path, "unknown key '" + it.key() + "'");
    }
}

double get_number(const json& j, const char* path, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) fail(std::string(path) + "." + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& j, const char* path, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) fail(std::string(path) + "." + key, "expected an integer");
    return v.get<int>();
}

bool get_bool(const json& j, const char* path, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean()) fail(std::string(path) + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::string get_string(const json& j, const char* path, const char* key,
                       const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) fail(std::string(path) + "." + key, "expected a string");
    return v.get<std::string>();
}

const char* measure_name(Measure m) { return m == Measure::Gamma ? "gamma" : "plain"; }

Measure parse_measure(const std::string& s, const char* path) {
    if (s == "gamma") return Measure::Gamma;
    if (s == "plain") return Measure::Plain;
    fail(path, "measure must be \"gamma\" or \"plain\", got \"" + s + "\"");
}

const char* kind_name(FrequencyProfile::Kind k) {
    switch (k) {
        case FrequencyProfile::Kind::Constant: return "constant";
        case FrequencyProfile::Kind::SuddenQuench: return "sudden_quench";
        case FrequencyProfile::Kind::LinearRamp: return "linear_ramp";
        case FrequencyProfile::Kind::Tabulated: return "tabulated";
    }
    return "?";
}

FrequencyProfile::Kind parse_kind(const std::string& s, const char* path) {
    if (s == "constant") return FrequencyProfile::Kind::Constant;
    if (s == "sudden_quench") return FrequencyProfile::Kind::SuddenQuench;
    if (s == "linear_ramp") return FrequencyProfile::Kind::LinearRamp;
    if (s == "tabulated") return FrequencyProfile::Kind::Tabulated;
    fail(path, "unknown profile kind \"" + s + "\"");
}

}  // namespace

FrequencyProfile ProfileConfig::build(double omega0) const {
    switch (kind) {
        case FrequencyProfile::Kind::Constant:
            return FrequencyProfile::constant(omega0);
        case FrequencyProfile::Kind::SuddenQuench:
            return FrequencyProfile::sudden_quench(omega0);
        case FrequencyProfile::Kind::LinearRamp:
            return FrequencyProfile::linear_ramp(omega0, omega_final, ramp_time);
        case FrequencyProfile::Kind::Tabulated:
            return FrequencyProfile::tabulated(omega0, table);
    }
    throw std::logic_error("ProfileConfig::build: unreachable");
}

void ScenarioConfig::validate() const {
    units.validate();

    auto in_range = [](const char* path, double v, double lo, double hi) {
        if (!std::isfinite(v) || v < lo || v > hi) {
            std::ostringstream msg;
            msg << "value " << v << " outside [" << lo << ", " << hi << "]";
            fail(path, msg.str());
        }
    };
    in_range("grid.q_extent", grid.q_extent, 1e-3, 1e3);
    in_range("grid.p_extent", grid.p_extent, 1e-3, 1e3);
    if (grid.cells < 8 || grid.cells > 4095) {
        fail("grid.cells", "cell count must lie in [8, 4095]");
    }

    in_range("time.t_end", time.t_end, 1e-9, 1e6);
    if (time.nodes < 2 || time.nodes > 65536) fail("time.nodes", "node count must lie in [2, 65536]");
    if (time.ermakov_oversample < 1 || time.ermakov_oversample > 4096) {
        fail("time.ermakov_oversample", "oversample factor must lie in [1, 4096]");
    }

    if (!std::isfinite(toggles.e0)) fail("toggles.e0", "must be finite");
    if (output.csv.empty()) fail("output.csv", "path must not be empty");
    if (output.summary.empty()) fail("output.summary", "path must not be empty");

    if (profile.kind == FrequencyProfile::Kind::LinearRamp) {
        in_range("profile.omega_final", profile.omega_final, 0.0, 1e6);
        in_range("profile.ramp_time", profile.ramp_time, 1e-9, 1e6);
    }
    // Builds eagerly so table/parameter problems surface as config errors,
    // not mid-run.
    (void)frequency_profile();

    if (const auto* eigen = std::get_if<EigenstateSpec>(&state)) {
        if (eigen->n < 0 || eigen->n > 60) fail("state.n", "eigenstate index must lie in [0, 60]");
    } else {
        const auto& g = std::get<GaussianSpec>(state);
        g.validate();
        if (std::abs(g.sigma_q * g.sigma_p - 0.5 * units.hbar) > 1e-9 * units.hbar) {
            fail("state",
                 "gaussian widths must satisfy sigma_q * sigma_p = hbar / 2 (pure squeezed "
                 "state); other width products have no pure-state Wigner function");
        }
    }
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
    check_keys(j, "<root>", {"units", "grid", "profile", "state", "time", "toggles", "output"});
    ScenarioConfig c;

    if (j.contains("units")) {
        const json& u = j.at("units");
        check_keys(u, "units", {"hbar", "mass", "omega0"});
        c.units.hbar = get_number(u, "units", "hbar", 1.0);
        c.units.mass = get_number(u, "units", "mass", 1.0);
        c.units.omega0 = get_number(u, "units", "omega0", 1.0);
    }
    c.units.validate();
    const double x0 = c.units.x0();

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, "grid", {"q_extent", "p_extent", "cells", "measure"});
        c.grid.q_extent = get_number(g, "grid", "q_extent", c.grid.q_extent);
        c.grid.p_extent = get_number(g, "grid", "p_extent", c.grid.p_extent);
        c.grid.cells = get_int(g, "grid", "cells", c.grid.cells);
        c.grid.measure = parse_measure(get_string(g, "grid", "measure", "gamma"), "grid.measure");
    }

    if (j.contains("profile")) {
        const json& p = j.at("profile");
        check_keys(p, "profile", {"kind", "omega_final", "ramp_time", "table"});
        c.profile.kind = parse_kind(get_string(p, "profile", "kind", "sudden_quench"),
                                    "profile.kind");
        // omega in units of omega0, times in units of 1/omega0.
        c.profile.omega_final =
            get_number(p, "profile", "omega_final", 0.0) * c.units.omega0;
        c.profile.ramp_time = get_number(p, "profile", "ramp_time", 1.0) / c.units.omega0;
        if (p.contains("table")) {
            const json& table = p.at("table");
            if (!table.is_array()) fail("profile.table", "expected an array of [t, omega] pairs");
            for (std::size_t k = 0; k < table.size(); ++k) {
                const json& row = table[k];
                if (!row.is_array() || row.size() != 2 || !row[0].is_number() ||
                    !row[1].is_number()) {
                    std::ostringstream path;
                    path << "profile.table[" << k << "]";
                    fail(path.str(), "expected a [t, omega] number pair");
                }
                c.profile.table.emplace_back(row[0].get<double>() / c.units.omega0,
                                             row[1].get<double>() * c.units.omega0);
            }
        }
    }

    if (j.contains("state")) {
        const json& s = j.at("state");
        if (!s.is_object()) fail("state", "expected a JSON object");
        const std::string kind = get_string(s, "state", "kind", "eigenstate");
        if (kind == "eigenstate") {
            check_keys(s, "state", {"kind", "n"});
            c.state = EigenstateSpec{get_int(s, "state", "n", 0)};
        } else if (kind == "gaussian") {
            check_keys(s, "state", {"kind", "sigma_q", "sigma_p", "q0", "p0"});
            GaussianSpec g;
            const double default_width = 1.0 / std::sqrt(2.0);
            g.sigma_q = get_number(s, "state", "sigma_q", default_width) * x0;
            g.sigma_p = get_number(s, "state", "sigma_p", default_width) * c.units.hbar / x0;
            g.q0 = get_number(s, "state", "q0", 0.0) * x0;
            g.p0 = get_number(s, "state", "p0", 0.0) * c.units.hbar / x0;
            c.state = g;
        } else {
            fail("state.kind", "must be \"eigenstate\" or \"gaussian\", got \"" + kind + "\"");
        }
    }

    if (j.contains("time")) {
        const json& t = j.at("time");
        check_keys(t, "time", {"t_end", "nodes", "ermakov_oversample"});
        c.time.t_end = get_number(t, "time", "t_end", c.time.t_end);
        c.time.nodes = get_int(t, "time", "nodes", c.time.nodes);
        c.time.ermakov_oversample =
            get_int(t, "time", "ermakov_oversample", c.time.ermakov_oversample);
    }

    if (j.contains("toggles")) {
        const json& t = j.at("toggles");
        check_keys(t, "toggles", {"moyal_order", "const_bddot", "e0"});
        const int order = get_int(t, "toggles", "moyal_order", 2);
        if (order != 0 && order != 2) fail("toggles.moyal_order", "must be 0 or 2");
        c.toggles.moyal_order = order == 0 ? MoyalOrder::Hbar0 : MoyalOrder::Hbar2;
        c.toggles.const_bddot = get_bool(t, "toggles", "const_bddot", false);
        // e0 in units of hbar * omega0.
        c.toggles.e0 = get_number(t, "toggles", "e0", 0.0) * c.units.hbar * c.units.omega0;
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, "output", {"csv", "summary"});
        c.output.csv = get_string(o, "output", "csv", c.output.csv);
        c.output.summary = get_string(o, "output", "summary", c.output.summary);
    }

    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    // nlohmann's parser reports line/column positions in its exceptions.
    return from_json(nlohmann::json::parse(in));
}

nlohmann::json ScenarioConfig::to_json() const {
    const double x0 = units.x0();
    json j;
    j["units"] = {{"hbar", units.hbar}, {"mass", units.mass}, {"omega0", units.omega0}};
    j["grid"] = {{"q_extent", grid.q_extent},
                 {"p_extent", grid.p_extent},
                 {"cells", grid.cells},
                 {"measure", measure_name(grid.measure)}};

    json p;
    p["kind"] = kind_name(profile.kind);
    if (profile.kind == FrequencyProfile::Kind::LinearRamp) {
        p["omega_final"] = profile.omega_final / units.omega0;
        p["ramp_time"] = profile.ramp_time * units.omega0;
    }
    if (profile.kind == FrequencyProfile::Kind::Tabulated) {
        json rows = json::array();
        for (const auto& [t, w] : profile.table) {
            rows.push_back({t * units.omega0, w / units.omega0});
        }
        p["table"] = rows;
    }
    j["profile"] = p;

    if (const auto* eigen = std::get_if<EigenstateSpec>(&state)) {
        j["state"] = {{"kind", "eigenstate"}, {"n", eigen->n}};
    } else {
        const auto& g = std::get<GaussianSpec>(state);
        j["state"] = {{"kind", "gaussian"},
                      {"sigma_q", g.sigma_q / x0},
                      {"sigma_p", g.sigma_p * x0 / units.hbar},
                      {"q0", g.q0 / x0},
                      {"p0", g.p0 * x0 / units.hbar}};
    }

    j["time"] = {{"t_end", time.t_end},
                 {"nodes", time.nodes},
                 {"ermakov_oversample", time.ermakov_oversample}};
    j["toggles"] = {{"moyal_order", toggles.moyal_order == MoyalOrder::Hbar0 ? 0 : 2},
                    {"const_bddot", toggles.const_bddot},
                    {"e0", toggles.e0 / (units.hbar * units.omega0)}};
    j["output"] = {{"csv", output.csv}, {"summary", output.summary}};
    return j;
}

}  // namespace speedlimit
