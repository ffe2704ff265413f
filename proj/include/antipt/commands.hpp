// commands.hpp — figure-level commands behind the CLI: each turns a RunConfig
// into CSV/JSON artifacts. All commands are deterministic given
// (config, seed); reruns produce byte-identical files.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "antipt/config.hpp"
#include "antipt/detail/format.hpp"
#include "antipt/effective_model.hpp"
#include "antipt/eit_semiclassical.hpp"
#include "antipt/gaussian_info.hpp"
#include "antipt/langevin_spectra.hpp"
#include "antipt/microscopic_exchange.hpp"

namespace antipt {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

namespace detail {

inline void write_csv(const Table& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        out << t.columns[c] << (c + 1 < t.columns.size() ? "," : "");
    }
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << format_g17(row[c]) << (c + 1 < row.size() ? "," : "");
        }
        out << "\n";
    }
}

inline void write_json(const Table& t, const std::filesystem::path& path) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj;
        for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = row[c];
        rows.push_back(obj);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << rows.dump(2) << "\n";
}

} // namespace detail

inline std::vector<std::string> emit_table(const Table& t, const RunConfig& cfg,
                                           const std::string& out_dir,
                                           const std::string& stem) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
    std::vector<std::string> written;
    if (cfg.outputs.csv) {
        const fs::path p = dir / (stem + ".csv");
        detail::write_csv(t, p);
        written.push_back(p.string());
    }
    if (cfg.outputs.json) {
        const fs::path p = dir / (stem + ".json");
        detail::write_json(t, p);
        written.push_back(p.string());
    }
    return written;
}

// eigen: supermode gap table over the delta0 sweep
inline std::vector<std::string> cmd_eigen(const RunConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    if (cfg.sweep.variable != "delta0") {
        throw ConfigError("cmd_eigen: sweep.variable must be delta0");
    }
    const auto rows = eigengap_sweep(cfg.scaled_params(), cfg.sweep_grid());
    Table t;
    t.columns = {"delta0", "re_gap", "im_gap"};
    for (const auto& r : rows) t.rows.push_back({r.delta0, r.re_gap, r.im_gap});
    return emit_table(t, cfg, out_dir, "eigen");
}

// spectra: per-delta0 noise spectra plus an index file
inline std::vector<std::string> cmd_spectra(const RunConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    if (cfg.sweep.variable != "delta0") {
        throw ConfigError("cmd_spectra: sweep.variable must be delta0");
    }
    const auto grid = cfg.spectrum_grid();
    const auto d0_values = cfg.sweep_grid();
    std::vector<std::string> written;
    Table index;
    index.columns = {"index", "delta0"};
    for (std::size_t i = 0; i < d0_values.size(); ++i) {
        SystemParams p = cfg.scaled_params();
        p.delta0 = d0_values[i];
        const auto spec = spectral_cm(p, grid);
        const auto traces = variance_traces(spec);
        Table t;
        t.columns = {"omega", "varx1_db", "varx2_db", "varxdiff_db", "varpsum_db"};
        for (const auto& r : traces) {
            t.rows.push_back({r.omega, r.varx1_db, r.varx2_db, r.varxdiff_db, r.varpsum_db});
        }
        char stem[32];
        std::snprintf(stem, sizeof(stem), "spectra_%03zu", i);
        auto files = emit_table(t, cfg, out_dir, stem);
        written.insert(written.end(), files.begin(), files.end());
        index.rows.push_back({static_cast<double>(i), d0_values[i]});
    }
    auto files = emit_table(index, cfg, out_dir, "spectra_index");
    written.insert(written.end(), files.begin(), files.end());
    return written;
}

// discord-sweep: discord, Duan value and EIT separation per delta0
inline std::vector<std::string> cmd_discord_sweep(const RunConfig& cfg,
                                                  const std::string& out_dir) {
    cfg.validate();
    if (cfg.sweep.variable != "delta0") {
        throw ConfigError("cmd_discord_sweep: sweep.variable must be delta0");
    }
    const auto d0_values = cfg.sweep_grid();
    const auto separations =
        separation_sweep(cfg.scaled_params(), d0_values, cfg.probes);
    Table t;
    t.columns = {"delta0", "discord", "duan", "separation"};
    for (std::size_t i = 0; i < d0_values.size(); ++i) {
        SystemParams p = cfg.scaled_params();
        p.delta0 = d0_values[i];
        const auto cm = cm_at_analysis_frequency(p);
        const auto res = gaussian_discord(cm);
        t.rows.push_back({d0_values[i], res.discord, res.duan_value, separations[i].separation});
    }
    return emit_table(t, cfg, out_dir, "discord_sweep");
}

// eit: gain traces over the delta_b sweep plus a peak summary
inline std::vector<std::string> cmd_eit(const RunConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    if (cfg.sweep.variable != "delta_b") {
        throw ConfigError("cmd_eit: sweep.variable must be delta_b");
    }
    const auto spec = eit_spectrum(cfg.scaled_params(), cfg.sweep_grid(), cfg.probes);
    Table t;
    t.columns = {"delta_b", "gain_1", "gain_2"};
    for (std::size_t i = 0; i < spec.delta_b_grid.size(); ++i) {
        t.rows.push_back({spec.delta_b_grid[i], spec.gain_1[i], spec.gain_2[i]});
    }
    auto written = emit_table(t, cfg, out_dir, "eit");
    Table summary;
    summary.columns = {"peak_1", "peak_2", "separation", "separation_defined"};
    summary.rows.push_back({spec.peak_1.value_or(0.0), spec.peak_2.value_or(0.0),
                            spec.separation.value_or(0.0), spec.separation ? 1.0 : 0.0});
    auto files = emit_table(summary, cfg, out_dir, "eit_summary");
    written.insert(written.end(), files.begin(), files.end());
    return written;
}

// phase: gains versus the channel-1 probe phase
inline std::vector<std::string> cmd_phase(const RunConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    if (cfg.sweep.variable != "phi_1") {
        throw ConfigError("cmd_phase: sweep.variable must be phi_1");
    }
    const auto rows = phase_sweep(cfg.scaled_params(), cfg.sweep_grid(), cfg.probes);
    Table t;
    t.columns = {"phi", "gain_1", "gain_2"};
    for (const auto& r : rows) t.rows.push_back({r.phi, r.gain_1, r.gain_2});
    return emit_table(t, cfg, out_dir, "phase");
}

// micro: effective coupling extraction plus the Monte Carlo / ODE comparison
inline std::vector<std::string> cmd_micro(const RunConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    if (!cfg.micro) throw ConfigError("cmd_micro: micro block required");
    if (!cfg.seed) throw ConfigError("cmd_micro: seed required for the stochastic oracle");
    const MicroParams mp = cfg.scaled_micro_params();
    const auto eff = extract_effective_coupling(mp);

    Table summary;
    summary.columns = {"gamma_c_eff", "gamma12_eff", "residual"};
    summary.rows.push_back({eff.gamma_c_eff, eff.gamma12_eff, eff.residual});
    auto written = emit_table(summary, cfg, out_dir, "micro_summary");

    const double dt = cfg.micro->dt / cfg.unit_scale;
    const double t_total = cfg.micro->t_total / cfg.unit_scale;
    const auto mc = monte_carlo_exchange(mp, *cfg.seed, cfg.micro->n_atoms, dt, t_total);
    const auto ode =
        compartment_ode_trajectories(mp, Eigen::Vector3cd(1.0, 0.0, 0.0), mc.times);

    Table t;
    t.columns = {"time",
                 "ode_beam1_re", "ode_beam1_im", "ode_beam2_re", "ode_beam2_im",
                 "ode_dark_re", "ode_dark_im",
                 "mc_beam1_re", "mc_beam1_im", "mc_beam2_re", "mc_beam2_im",
                 "mc_dark_re", "mc_dark_im",
                 "se_beam1", "se_beam2", "se_dark"};
    for (std::size_t i = 0; i < mc.times.size(); ++i) {
        t.rows.push_back({mc.times[i],
                          ode[i](0).real(), ode[i](0).imag(),
                          ode[i](1).real(), ode[i](1).imag(),
                          ode[i](2).real(), ode[i](2).imag(),
                          mc.mean[i][0].real(), mc.mean[i][0].imag(),
                          mc.mean[i][1].real(), mc.mean[i][1].imag(),
                          mc.mean[i][2].real(), mc.mean[i][2].imag(),
                          mc.se[i][0], mc.se[i][1], mc.se[i][2]});
    }
    auto files = emit_table(t, cfg, out_dir, "micro_traj");
    written.insert(written.end(), files.begin(), files.end());
    return written;
}

} // namespace antipt
