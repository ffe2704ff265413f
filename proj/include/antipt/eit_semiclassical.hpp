// eit_semiclassical.hpp — steady-state response of the two coupled EIT
// channels to weak probes: gain spectra, probe-phase sensitivity, and EIT
// peak separation across the exceptional point.
//
// Readout model: e_out = e_in (1 - alpha_bg) + i g_read sigma, the thin-medium
// form. alpha_bg and g_read are calibrated once against the two anchors
// (single-channel gain <= 0 everywhere; ~10% coupled on-resonance gain) and
// frozen in the SystemParams defaults.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "antipt/effective_model.hpp"

namespace antipt {

struct ProbeConfig {
    complexd e_in_1{1.0, 0.0};
    complexd e_in_2{1.0, 0.0};
    double phi_1{0.0};            // probe-control relative phase in channel 1
    bool channel_1_enabled{true};
    bool channel_2_enabled{true};

    void validate() const {
        if (!channel_1_enabled && !channel_2_enabled) {
            throw std::invalid_argument("ProbeConfig: at least one channel must be enabled");
        }
    }
    bool coupled() const { return channel_1_enabled && channel_2_enabled; }
};

// Ground-state coherences at two-photon detuning delta_b: the driven steady
// state of sigma' = -i(H - delta I) sigma + s, written with the
// response matrix M = [[g12 + i(delta - d0), -Gc], [-Gc, g12 + i(delta + d0)]]
// so the decoupled limit is the Lorentzian s_j / (g12 + i(delta -+ d0)).
// delta0 enters signed (channel 1 at +d0, channel 2 at -d0), which makes
// channel exchange with d0 -> -d0 an exact symmetry. Drive s_j = i kappa E_j,
// kappa = control_rabi / gamma13, E_j the probe input including its phase.
// Disabling a channel removes its drive and the coupling it mediates; the
// diagonal damping keeps the full gamma12 (coherence still leaves the beam).
inline std::pair<complexd, complexd> coherence_steady_state(const SystemParams& p,
                                                            double delta_b,
                                                            const ProbeConfig& probes) {
    p.validate();
    probes.validate();
    const double g12 = gamma12(p);
    const double d = p.delta0;
    const double kappa = p.control_rabi / p.gamma13;
    const complexd e1 = probes.channel_1_enabled
                            ? probes.e_in_1 * std::polar(1.0, probes.phi_1)
                            : complexd(0.0, 0.0);
    const complexd e2 = probes.channel_2_enabled ? probes.e_in_2 : complexd(0.0, 0.0);
    const complexd s1 = complexd(0.0, kappa) * e1;
    const complexd s2 = complexd(0.0, kappa) * e2;

    if (probes.coupled()) {
        Eigen::Matrix2cd m;
        m << complexd(g12, delta_b - d), complexd(-p.gamma_c, 0.0),
             complexd(-p.gamma_c, 0.0), complexd(g12, delta_b + d);
        if (std::abs(m.determinant()) == 0.0) {
            throw std::runtime_error("coherence_steady_state: singular system");
        }
        const Eigen::Vector2cd sigma = m.fullPivLu().solve(Eigen::Vector2cd(s1, s2));
        return {sigma(0), sigma(1)};
    }
    complexd sigma1(0.0, 0.0), sigma2(0.0, 0.0);
    if (probes.channel_1_enabled) {
        sigma1 = s1 / complexd(g12, delta_b - d);
    }
    if (probes.channel_2_enabled) {
        sigma2 = s2 / complexd(g12, delta_b + d);
    }
    return {sigma1, sigma2};
}

struct GainResult {
    double gain_1;
    double gain_2;
    bool channel_1_active;
    bool channel_2_active;
};

// gain_j = |e_out_j / E_j|^2 - 1. A disabled channel reports the bare
// background absorption -alpha_bg (2 - alpha_bg), flagged inactive.
inline GainResult probe_gain(const SystemParams& p, double delta_b, const ProbeConfig& probes) {
    probes.validate();
    if ((probes.channel_1_enabled && std::abs(probes.e_in_1) == 0.0) ||
        (probes.channel_2_enabled && std::abs(probes.e_in_2) == 0.0)) {
        throw std::invalid_argument("probe_gain: enabled channel requires |e_in| > 0");
    }
    const auto [sigma1, sigma2] = coherence_steady_state(p, delta_b, probes);
    const double bare = (1.0 - p.alpha_bg) * (1.0 - p.alpha_bg) - 1.0;
    auto channel_gain = [&](bool enabled, const complexd& e_in, double phi,
                            const complexd& sigma) {
        if (!enabled) return bare;
        const complexd e = e_in * std::polar(1.0, phi);
        const complexd e_out = e * (1.0 - p.alpha_bg) + complexd(0.0, p.g_read) * sigma;
        return std::norm(e_out / e) - 1.0;
    };
    GainResult out;
    out.gain_1 = channel_gain(probes.channel_1_enabled, probes.e_in_1, probes.phi_1, sigma1);
    out.gain_2 = channel_gain(probes.channel_2_enabled, probes.e_in_2, 0.0, sigma2);
    out.channel_1_active = probes.channel_1_enabled;
    out.channel_2_active = probes.channel_2_enabled;
    return out;
}

struct EitSpectrum {
    std::vector<double> delta_b_grid;
    std::vector<double> gain_1;
    std::vector<double> gain_2;
    std::optional<double> peak_1;      // empty when the trace is flat
    std::optional<double> peak_2;
    std::optional<double> separation;  // defined when both peaks are
};

namespace detail {

// quadratic interpolation through the three points around the argmax;
// ties broken toward smaller |delta_b|
inline std::optional<double> refined_peak(const std::vector<double>& x,
                                          const std::vector<double>& y) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const bool better = y[i] > y[best] + 1e-15;
        const bool tie = std::abs(y[i] - y[best]) <= 1e-15;
        if (better || (tie && std::abs(x[i]) < std::abs(x[best]))) best = i;
    }
    const double span = *std::max_element(y.begin(), y.end()) -
                        *std::min_element(y.begin(), y.end());
    if (span < 1e-12) return std::nullopt;
    if (best == 0 || best + 1 == y.size()) return x[best];
    const double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::abs(denom) < 1e-300) return x[best];
    const double shift = 0.5 * (y0 - y2) / denom;
    const double h = x[best + 1] - x[best];
    return x[best] + shift * h;
}

} // namespace detail

inline EitSpectrum eit_spectrum(const SystemParams& p, const std::vector<double>& grid,
                                const ProbeConfig& probes) {
    if (grid.size() < 3) throw std::invalid_argument("eit_spectrum: grid needs >= 3 points");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("eit_spectrum: grid must be ascending");
        }
    }
    EitSpectrum out;
    out.delta_b_grid = grid;
    out.gain_1.reserve(grid.size());
    out.gain_2.reserve(grid.size());
    for (double db : grid) {
        const auto g = probe_gain(p, db, probes);
        out.gain_1.push_back(g.gain_1);
        out.gain_2.push_back(g.gain_2);
    }
    out.peak_1 = detail::refined_peak(grid, out.gain_1);
    out.peak_2 = detail::refined_peak(grid, out.gain_2);
    if (out.peak_1 && out.peak_2) {
        out.separation = std::abs(*out.peak_1 - *out.peak_2);
    }
    return out;
}

struct PhaseRow {
    double phi;
    double gain_1;
    double gain_2;
};

inline std::vector<PhaseRow> phase_sweep(const SystemParams& p,
                                         const std::vector<double>& phi_grid,
                                         const ProbeConfig& probes) {
    if (phi_grid.size() < 2 ||
        !(phi_grid.back() - phi_grid.front() >= 2.0 * 3.14159265358979323846 - 1e-9)) {
        throw std::invalid_argument("phase_sweep: phi grid must span >= 2*pi");
    }
    std::vector<PhaseRow> rows;
    rows.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        ProbeConfig pc = probes;
        pc.phi_1 = phi;
        const auto g = probe_gain(p, 0.0, pc);
        rows.push_back({phi, g.gain_1, g.gain_2});
    }
    return rows;
}

struct SeparationRow {
    double delta0;
    double separation;
};

// EIT-peak separation versus delta0, the directly observable analogue of the
// supermode splitting; bends (less sharply) at the exceptional point.
inline std::vector<SeparationRow> separation_sweep(const SystemParams& base,
                                                   const std::vector<double>& delta0_grid,
                                                   const ProbeConfig& probes,
                                                   std::size_t delta_b_points = 801) {
    if (delta0_grid.empty()) throw std::invalid_argument("separation_sweep: empty grid");
    for (std::size_t i = 1; i < delta0_grid.size(); ++i) {
        if (!(delta0_grid[i] > delta0_grid[i - 1])) {
            throw std::invalid_argument("separation_sweep: grid must be ascending");
        }
    }
    const double d_max = std::max(std::abs(delta0_grid.front()), std::abs(delta0_grid.back()));
    const double span = 1.5 * (d_max + base.gamma_c) + gamma12(base);
    std::vector<double> db_grid(delta_b_points);
    for (std::size_t i = 0; i < delta_b_points; ++i) {
        db_grid[i] = -span + 2.0 * span * static_cast<double>(i) /
                                 static_cast<double>(delta_b_points - 1);
    }
    std::vector<SeparationRow> rows;
    rows.reserve(delta0_grid.size());
    for (double d0 : delta0_grid) {
        SystemParams p = base;
        p.delta0 = d0;
        const auto spec = eit_spectrum(p, db_grid, probes);
        rows.push_back({d0, spec.separation.value_or(0.0)});
    }
    return rows;
}

} // namespace antipt
