// config.hpp — run configuration: JSON schema, strict parsing, round-trip
// serialization. Unknown keys are rejected so misspelled fields cannot be
// silently ignored.
//
// unit_scale converts normalized configs to rad/s: it multiplies every rate
// and frequency field (params, micro rates, frequency-valued sweep and
// spectrum bounds) and divides the micro time inputs.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "antipt/eit_semiclassical.hpp"
#include "antipt/effective_model.hpp"
#include "antipt/microscopic_exchange.hpp"

namespace antipt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepConfig {
    std::string variable{"delta0"};  // delta0 | delta_b | phi_1
    double from{0.0};
    double to{9.0};
    std::size_t points{61};
};

struct SpectrumConfig {
    double omega_min{-20.0};
    double omega_max{20.0};
    std::size_t points{801};
};

struct MicroConfig {
    MicroParams params;
    std::size_t n_atoms{10000};
    double dt{0.004};
    double t_total{4.0};
};

struct OutputConfig {
    std::string directory{"out"};
    bool csv{true};
    bool json{false};
};

struct RunConfig {
    double unit_scale{1.0};
    SystemParams params;
    std::optional<MicroConfig> micro;
    SweepConfig sweep;
    SpectrumConfig spectrum;
    ProbeConfig probes;
    std::optional<std::uint64_t> seed;
    OutputConfig outputs;

    // rates in rad/s after applying unit_scale
    SystemParams scaled_params() const {
        SystemParams p = params;
        p.delta0 *= unit_scale;
        p.gamma0 *= unit_scale;
        p.gamma_c *= unit_scale;
        p.control_rabi *= unit_scale;
        p.gamma13 *= unit_scale;
        p.omega_larmor *= unit_scale;
        p.broad_width *= unit_scale;
        return p;
    }

    MicroParams scaled_micro_params() const {
        if (!micro) throw ConfigError("config: micro block required for this command");
        MicroParams mp = micro->params;
        mp.r_exit *= unit_scale;
        mp.r_return *= unit_scale;
        mp.gamma_dark *= unit_scale;
        mp.pump_rate *= unit_scale;
        mp.delta0 *= unit_scale;
        mp.omega_larmor *= unit_scale;
        return mp;
    }

    void validate() const {
        if (!(unit_scale > 0.0)) throw ConfigError("config: unit_scale must be > 0");
        if (sweep.points < 2) throw ConfigError("config: sweep.points must be >= 2");
        if (!(sweep.to > sweep.from)) throw ConfigError("config: sweep.to must exceed sweep.from");
        if (spectrum.points < 2) throw ConfigError("config: spectrum.points must be >= 2");
        if (!(spectrum.omega_max > spectrum.omega_min)) {
            throw ConfigError("config: spectrum bounds must be ascending");
        }
        if (sweep.variable != "delta0" && sweep.variable != "delta_b" &&
            sweep.variable != "phi_1") {
            throw ConfigError("config: sweep.variable must be delta0, delta_b or phi_1");
        }
        if (!probes.channel_1_enabled && !probes.channel_2_enabled) {
            throw ConfigError("config: at least one probe channel must be enabled");
        }
        try {
            scaled_params().validate();
            if (micro) scaled_micro_params().validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        if (micro) {
            if (micro->n_atoms < 1) throw ConfigError("config: micro.n_atoms must be >= 1");
            if (!(micro->dt > 0.0) || !(micro->t_total > micro->dt)) {
                throw ConfigError("config: micro time stepping invalid");
            }
        }
    }

    std::vector<double> sweep_grid() const {
        std::vector<double> g(sweep.points);
        const double scale = (sweep.variable == "phi_1") ? 1.0 : unit_scale;
        for (std::size_t i = 0; i < sweep.points; ++i) {
            g[i] = scale * (sweep.from + (sweep.to - sweep.from) * static_cast<double>(i) /
                                             static_cast<double>(sweep.points - 1));
        }
        return g;
    }

    std::vector<double> spectrum_grid() const {
        std::vector<double> g(spectrum.points);
        for (std::size_t i = 0; i < spectrum.points; ++i) {
            g[i] = unit_scale *
                   (spectrum.omega_min + (spectrum.omega_max - spectrum.omega_min) *
                                             static_cast<double>(i) /
                                             static_cast<double>(spectrum.points - 1));
        }
        return g;
    }
};

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (allowed.find(key) == allowed.end()) {
            throw ConfigError("config: unknown key '" + key + "' in " + where);
        }
    }
}

inline double get_number(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(std::string("config: ") + key + " must be a number");
    return j[key].get<double>();
}

inline complexd get_complex(const nlohmann::json& j, const char* key, complexd fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j[key];
    require_keys(v, {"re", "im"}, key);
    return complexd(get_number(v, "re", fallback.real()), get_number(v, "im", fallback.imag()));
}

inline std::uint64_t get_uint(const nlohmann::json& j, const char* key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ConfigError(std::string("config: ") + key + " must be a non-negative integer");
}

} // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
    detail::require_keys(
        j, {"params", "micro", "sweep", "spectrum", "probes", "seed", "outputs"}, "root");
    RunConfig cfg;

    if (j.contains("params")) {
        const auto& p = j["params"];
        detail::require_keys(p,
                             {"unit_scale", "delta0", "gamma0", "gamma_c", "control_rabi",
                              "gamma13", "omega_larmor", "n_exc", "eta_read", "broad_amp",
                              "broad_width", "alpha_bg", "g_read"},
                             "params");
        cfg.unit_scale = detail::get_number(p, "unit_scale", cfg.unit_scale);
        cfg.params.delta0 = detail::get_number(p, "delta0", cfg.params.delta0);
        cfg.params.gamma0 = detail::get_number(p, "gamma0", cfg.params.gamma0);
        cfg.params.gamma_c = detail::get_number(p, "gamma_c", cfg.params.gamma_c);
        cfg.params.control_rabi = detail::get_number(p, "control_rabi", cfg.params.control_rabi);
        cfg.params.gamma13 = detail::get_number(p, "gamma13", cfg.params.gamma13);
        cfg.params.omega_larmor = detail::get_number(p, "omega_larmor", cfg.params.omega_larmor);
        cfg.params.n_exc = detail::get_number(p, "n_exc", cfg.params.n_exc);
        cfg.params.eta_read = detail::get_number(p, "eta_read", cfg.params.eta_read);
        cfg.params.broad_amp = detail::get_number(p, "broad_amp", cfg.params.broad_amp);
        cfg.params.broad_width = detail::get_number(p, "broad_width", cfg.params.broad_width);
        cfg.params.alpha_bg = detail::get_number(p, "alpha_bg", cfg.params.alpha_bg);
        cfg.params.g_read = detail::get_number(p, "g_read", cfg.params.g_read);
    }

    if (j.contains("micro") && !j["micro"].is_null()) {
        const auto& m = j["micro"];
        detail::require_keys(m,
                             {"r_exit", "r_return", "gamma_dark", "pump_rate", "delta0",
                              "omega_larmor", "n_atoms", "dt", "t_total"},
                             "micro");
        MicroConfig mc;
        mc.params.r_exit = detail::get_number(m, "r_exit", mc.params.r_exit);
        mc.params.r_return = detail::get_number(m, "r_return", mc.params.r_return);
        mc.params.gamma_dark = detail::get_number(m, "gamma_dark", mc.params.gamma_dark);
        mc.params.pump_rate = detail::get_number(m, "pump_rate", mc.params.pump_rate);
        mc.params.delta0 = detail::get_number(m, "delta0", mc.params.delta0);
        mc.params.omega_larmor = detail::get_number(m, "omega_larmor", mc.params.omega_larmor);
        mc.n_atoms = static_cast<std::size_t>(detail::get_uint(m, "n_atoms", mc.n_atoms));
        mc.dt = detail::get_number(m, "dt", mc.dt);
        mc.t_total = detail::get_number(m, "t_total", mc.t_total);
        cfg.micro = mc;
    }

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        detail::require_keys(s, {"variable", "from", "to", "points"}, "sweep");
        if (s.contains("variable")) {
            if (!s["variable"].is_string()) throw ConfigError("config: sweep.variable must be a string");
            cfg.sweep.variable = s["variable"].get<std::string>();
        }
        cfg.sweep.from = detail::get_number(s, "from", cfg.sweep.from);
        cfg.sweep.to = detail::get_number(s, "to", cfg.sweep.to);
        cfg.sweep.points = static_cast<std::size_t>(detail::get_uint(s, "points", cfg.sweep.points));
    }

    if (j.contains("spectrum")) {
        const auto& s = j["spectrum"];
        detail::require_keys(s, {"omega_min", "omega_max", "points"}, "spectrum");
        cfg.spectrum.omega_min = detail::get_number(s, "omega_min", cfg.spectrum.omega_min);
        cfg.spectrum.omega_max = detail::get_number(s, "omega_max", cfg.spectrum.omega_max);
        cfg.spectrum.points =
            static_cast<std::size_t>(detail::get_uint(s, "points", cfg.spectrum.points));
    }

    if (j.contains("probes")) {
        const auto& p = j["probes"];
        detail::require_keys(
            p, {"e_in_1", "e_in_2", "phi_1", "channel_1_enabled", "channel_2_enabled"},
            "probes");
        cfg.probes.e_in_1 = detail::get_complex(p, "e_in_1", cfg.probes.e_in_1);
        cfg.probes.e_in_2 = detail::get_complex(p, "e_in_2", cfg.probes.e_in_2);
        cfg.probes.phi_1 = detail::get_number(p, "phi_1", cfg.probes.phi_1);
        if (p.contains("channel_1_enabled")) {
            if (!p["channel_1_enabled"].is_boolean()) throw ConfigError("config: channel_1_enabled must be a boolean");
            cfg.probes.channel_1_enabled = p["channel_1_enabled"].get<bool>();
        }
        if (p.contains("channel_2_enabled")) {
            if (!p["channel_2_enabled"].is_boolean()) throw ConfigError("config: channel_2_enabled must be a boolean");
            cfg.probes.channel_2_enabled = p["channel_2_enabled"].get<bool>();
        }
    }

    if (j.contains("seed") && !j["seed"].is_null()) {
        cfg.seed = detail::get_uint(j, "seed", 0);
    }

    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        detail::require_keys(o, {"directory", "formats"}, "outputs");
        if (o.contains("directory")) {
            if (!o["directory"].is_string()) throw ConfigError("config: outputs.directory must be a string");
            cfg.outputs.directory = o["directory"].get<std::string>();
        }
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) throw ConfigError("config: outputs.formats must be an array");
            cfg.outputs.csv = false;
            cfg.outputs.json = false;
            for (const auto& f : o["formats"]) {
                if (!f.is_string()) throw ConfigError("config: outputs.formats entries must be strings");
                const std::string name = f.get<std::string>();
                if (name == "csv") cfg.outputs.csv = true;
                else if (name == "json") cfg.outputs.json = true;
                else throw ConfigError("config: unknown output format '" + name + "'");
            }
            if (!cfg.outputs.csv && !cfg.outputs.json) {
                throw ConfigError("config: outputs.formats must list csv and/or json");
            }
        }
    }

    cfg.validate();
    return cfg;
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["params"] = {{"unit_scale", cfg.unit_scale},
                   {"delta0", cfg.params.delta0},
                   {"gamma0", cfg.params.gamma0},
                   {"gamma_c", cfg.params.gamma_c},
                   {"control_rabi", cfg.params.control_rabi},
                   {"gamma13", cfg.params.gamma13},
                   {"omega_larmor", cfg.params.omega_larmor},
                   {"n_exc", cfg.params.n_exc},
                   {"eta_read", cfg.params.eta_read},
                   {"broad_amp", cfg.params.broad_amp},
                   {"broad_width", cfg.params.broad_width},
                   {"alpha_bg", cfg.params.alpha_bg},
                   {"g_read", cfg.params.g_read}};
    if (cfg.micro) {
        j["micro"] = {{"r_exit", cfg.micro->params.r_exit},
                      {"r_return", cfg.micro->params.r_return},
                      {"gamma_dark", cfg.micro->params.gamma_dark},
                      {"pump_rate", cfg.micro->params.pump_rate},
                      {"delta0", cfg.micro->params.delta0},
                      {"omega_larmor", cfg.micro->params.omega_larmor},
                      {"n_atoms", cfg.micro->n_atoms},
                      {"dt", cfg.micro->dt},
                      {"t_total", cfg.micro->t_total}};
    }
    j["sweep"] = {{"variable", cfg.sweep.variable},
                  {"from", cfg.sweep.from},
                  {"to", cfg.sweep.to},
                  {"points", cfg.sweep.points}};
    j["spectrum"] = {{"omega_min", cfg.spectrum.omega_min},
                     {"omega_max", cfg.spectrum.omega_max},
                     {"points", cfg.spectrum.points}};
    j["probes"] = {{"e_in_1", {{"re", cfg.probes.e_in_1.real()}, {"im", cfg.probes.e_in_1.imag()}}},
                   {"e_in_2", {{"re", cfg.probes.e_in_2.real()}, {"im", cfg.probes.e_in_2.imag()}}},
                   {"phi_1", cfg.probes.phi_1},
                   {"channel_1_enabled", cfg.probes.channel_1_enabled},
                   {"channel_2_enabled", cfg.probes.channel_2_enabled}};
    if (cfg.seed) j["seed"] = *cfg.seed;
    nlohmann::json formats = nlohmann::json::array();
    if (cfg.outputs.csv) formats.push_back("csv");
    if (cfg.outputs.json) formats.push_back("json");
    j["outputs"] = {{"directory", cfg.outputs.directory}, {"formats", formats}};
    return j;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: parse failure in '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

inline void save_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("config: cannot write '" + path + "'");
    out << config_to_json(cfg).dump(2) << "\n";
}

} // namespace antipt
