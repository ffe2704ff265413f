// microscopic_exchange.hpp — three-compartment model of the ground-state
// coherence (beam 1, beam 2, dark region) with atomic exchange. Validates the
// effective coupling rate of the two-mode model and the origin of the narrow
// spectral feature.
//
// Coherence sector basis: (c1, c2*, c_dark), channel 2 conjugated to match
// the phase-conjugate pairing of langevin_spectra.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "antipt/detail/rng.hpp"
#include "antipt/effective_model.hpp"

namespace antipt {

struct MicroParams {
    double r_exit{1.0};      // beam -> dark exit rate
    double r_return{20.0};   // dark -> beam return rate, split 50/50
    double gamma_dark{2.0};  // coherence decay in the dark region
    double pump_rate{0.5};   // optical pumping inside each beam
    double delta0{0.3};
    double omega_larmor{1000.0};

    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(r_exit) || !finite(r_return) || !finite(gamma_dark) ||
            !finite(pump_rate) || !finite(delta0) || !finite(omega_larmor)) {
            throw std::invalid_argument("MicroParams: non-finite field");
        }
        if (r_exit < 0.0 || r_return < 0.0 || gamma_dark < 0.0 || pump_rate < 0.0) {
            throw std::invalid_argument("MicroParams: rates must be >= 0");
        }
        if (r_exit > 0.0 && r_return <= 0.0) {
            throw std::invalid_argument("MicroParams: r_return must be > 0 when r_exit > 0");
        }
    }
};

struct CompartmentState {
    std::array<complexd, 3> coherence{};          // beam1, beam2 (conjugated), dark
    std::array<double, 3> population_imbalance{};  // bounded in [-1, 1]

    void validate() const {
        for (const auto& c : coherence) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw std::invalid_argument("CompartmentState: non-finite coherence");
            }
        }
        for (double n : population_imbalance) {
            if (!std::isfinite(n) || n < -1.0 || n > 1.0) {
                throw std::invalid_argument("CompartmentState: population out of [-1, 1]");
            }
        }
    }
};

// Coherence-sector generator on (c1, c2*, c_dark): local decay and precession
// on the diagonal, exit flux into the dark pool, return flux split equally.
// Exchange columns sum to zero (atom number conserved by transport).
inline Eigen::Matrix3cd build_compartment_generator(const MicroParams& mp) {
    mp.validate();
    Eigen::Matrix3cd g = Eigen::Matrix3cd::Zero();
    g(0, 0) = complexd(-mp.pump_rate - mp.r_exit, -mp.delta0);
    g(1, 1) = complexd(-mp.pump_rate - mp.r_exit, mp.delta0);
    g(2, 2) = complexd(-mp.gamma_dark - mp.r_return, 0.0);
    g(2, 0) = complexd(mp.r_exit, 0.0);
    g(2, 1) = complexd(mp.r_exit, 0.0);
    g(0, 2) = complexd(0.5 * mp.r_return, 0.0);
    g(1, 2) = complexd(0.5 * mp.r_return, 0.0);
    return g;
}

struct EffectiveCoupling {
    double gamma_c_eff;
    double gamma12_eff;
    double residual;  // relative mismatch of full vs reduced frequency response
};

namespace detail {

inline Eigen::Matrix2cd micro_effective_drift(double gamma12_eff, double gamma_c_eff,
                                              double delta0) {
    Eigen::Matrix2cd m;
    m << complexd(-gamma12_eff, -delta0), complexd(gamma_c_eff, 0.0),
         complexd(gamma_c_eff, 0.0), complexd(-gamma12_eff, delta0);
    return m;
}

// beam-block response of a generator: [(i w I - G)^-1]_{beams} on a frequency grid
template <typename Matrix>
inline std::vector<Eigen::Matrix2cd> beam_response(const Matrix& g,
                                                   const std::vector<double>& omegas) {
    const int n = static_cast<int>(g.rows());
    std::vector<Eigen::Matrix2cd> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        Eigen::MatrixXcd a = -Eigen::MatrixXcd(g);
        for (int i = 0; i < n; ++i) a(i, i) += complexd(0.0, -w);
        const Eigen::MatrixXcd inv = a.inverse();
        Eigen::Matrix2cd block;
        block << inv(0, 0), inv(0, 1), inv(1, 0), inv(1, 1);
        out.push_back(block);
    }
    return out;
}

} // namespace detail

// Adiabatic elimination of the dark compartment: its steady state given the
// beam coherences yields an effective two-mode generator of the coupled
// spin-wave form with Gc_eff = r_exit r_return / (2 (gamma_dark + r_return)). The residual
// reports how well the full beam-block frequency response matches the
// reduced one.
inline EffectiveCoupling extract_effective_coupling(const MicroParams& mp) {
    mp.validate();
    const double denom = mp.gamma_dark + mp.r_return;
    if (denom <= 0.0) {
        throw std::invalid_argument(
            "extract_effective_coupling: dark decay + return rate must be > 0");
    }
    EffectiveCoupling out;
    out.gamma_c_eff = 0.5 * mp.r_exit * mp.r_return / denom;
    out.gamma12_eff = mp.pump_rate + mp.r_exit - out.gamma_c_eff;

    const Eigen::Matrix3cd g_full = build_compartment_generator(mp);
    const Eigen::Matrix2cd m_eff =
        detail::micro_effective_drift(out.gamma12_eff, out.gamma_c_eff, mp.delta0);
    const double w_max = 3.0 * std::max(1e-12, mp.pump_rate + mp.r_exit + std::abs(mp.delta0));
    std::vector<double> omegas;
    for (int i = 0; i <= 120; ++i) {
        omegas.push_back(-w_max + 2.0 * w_max * static_cast<double>(i) / 120.0);
    }
    const auto full = detail::beam_response(g_full, omegas);
    const auto red = detail::beam_response(m_eff, omegas);
    double err2 = 0.0;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        err2 += (full[i] - red[i]).squaredNorm();
        norm2 += full[i].squaredNorm();
    }
    out.residual = std::sqrt(err2 / std::max(norm2, 1e-300));
    return out;
}

// Matrix-exponential trajectories of the compartment ODE from an initial
// coherence vector.
inline std::vector<Eigen::Vector3cd> compartment_ode_trajectories(
    const MicroParams& mp, const Eigen::Vector3cd& c0, const std::vector<double>& times) {
    const Eigen::Matrix3cd g = build_compartment_generator(mp);
    std::vector<Eigen::Vector3cd> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!(t >= 0.0)) throw std::invalid_argument("compartment_ode_trajectories: t < 0");
        out.push_back((g * t).exp() * c0);
    }
    return out;
}

struct ExchangeTrajectories {
    std::vector<double> times;
    // per time, per compartment: ensemble mean coherence and its standard error
    std::vector<std::array<complexd, 3>> mean;
    std::vector<std::array<double, 3>> se;
};

// Telegraph-process oracle: atoms hop between compartments carrying a complex
// coherence amplitude that evolves with the local generator; transfer moves
// the amplitude without rescaling. All atoms start in beam 1 with unit
// amplitude, matching c0 = (1, 0, 0). Deterministic per seed; reduction over
// fixed chunk boundaries in chunk order.
inline ExchangeTrajectories monte_carlo_exchange(const MicroParams& mp, std::uint64_t seed,
                                                 std::size_t n_atoms, double dt,
                                                 double t_total, std::size_t workers = 0) {
    mp.validate();
    if (n_atoms < 1) throw std::invalid_argument("monte_carlo_exchange: n_atoms must be >= 1");
    const double max_rate =
        std::max({mp.r_exit, mp.r_return, mp.gamma_dark, mp.pump_rate, std::abs(mp.delta0)});
    if (!(dt > 0.0) || dt * max_rate >= 0.1) {
        throw std::invalid_argument("monte_carlo_exchange: dt too large for stability");
    }
    const std::size_t n_steps = static_cast<std::size_t>(std::floor(t_total / dt));
    if (n_steps < 1) throw std::invalid_argument("monte_carlo_exchange: t_total too short");

    // per-step amplitude factors and hop probabilities
    const complexd local[3] = {complexd(-mp.pump_rate, -mp.delta0),
                               complexd(-mp.pump_rate, mp.delta0),
                               complexd(-mp.gamma_dark, 0.0)};
    const complexd step_factor[3] = {std::exp(local[0] * dt), std::exp(local[1] * dt),
                                     std::exp(local[2] * dt)};
    const double p_exit = 1.0 - std::exp(-mp.r_exit * dt);
    const double p_return = 1.0 - std::exp(-mp.r_return * dt);

    const std::size_t n_chunks = std::min<std::size_t>(64, n_atoms);
    struct Acc {
        std::vector<complexd> sum;     // (n_steps+1) x 3
        std::vector<double> sumsq_re;  // scatter of the real and imaginary parts
        std::vector<double> sumsq_im;
        std::size_t count{0};
        explicit Acc(std::size_t bins)
            : sum(bins, complexd(0.0, 0.0)), sumsq_re(bins, 0.0), sumsq_im(bins, 0.0) {}
        void merge(const Acc& o) {
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] += o.sum[i];
                sumsq_re[i] += o.sumsq_re[i];
                sumsq_im[i] += o.sumsq_im[i];
            }
            count += o.count;
        }
    };

    auto run_chunk = [&](std::size_t chunk) {
        Acc acc((n_steps + 1) * 3);
        const std::size_t lo = chunk * n_atoms / n_chunks;
        const std::size_t hi = (chunk + 1) * n_atoms / n_chunks;
        for (std::size_t atom = lo; atom < hi; ++atom) {
            detail::GaussianRng rng(detail::stream_seed(seed, atom));
            int where = 0;  // beam 1
            complexd z(1.0, 0.0);
            for (std::size_t n = 0; n <= n_steps; ++n) {
                const std::size_t base = n * 3;
                acc.sum[base + static_cast<std::size_t>(where)] += z;
                acc.sumsq_re[base + static_cast<std::size_t>(where)] += z.real() * z.real();
                acc.sumsq_im[base + static_cast<std::size_t>(where)] += z.imag() * z.imag();
                if (n == n_steps) break;
                z *= step_factor[where];
                const double u = rng.uniform();
                if (where == 2) {
                    if (u < p_return) {
                        where = (rng.uniform() < 0.5) ? 0 : 1;
                    }
                } else if (u < p_exit) {
                    where = 2;
                }
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                    throw std::runtime_error("monte_carlo_exchange: non-finite amplitude at atom " +
                                             std::to_string(atom));
                }
            }
            acc.count += 1;
        }
        return acc;
    };

    if (workers == 0) {
        workers = std::max<std::size_t>(
            1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
    }
    Acc total((n_steps + 1) * 3);
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) total.merge(run_chunk(c));
    } else {
        std::vector<std::future<Acc>> inflight(n_chunks);
        std::size_t launched = 0;
        std::size_t merged = 0;
        while (merged < n_chunks) {
            while (launched < n_chunks && launched - merged < workers) {
                inflight[launched] = std::async(std::launch::async, run_chunk, launched);
                ++launched;
            }
            total.merge(inflight[merged].get());
            inflight[merged] = {};
            ++merged;
        }
    }

    ExchangeTrajectories out;
    out.times.resize(n_steps + 1);
    out.mean.resize(n_steps + 1);
    out.se.resize(n_steps + 1);
    const double inv_n = 1.0 / static_cast<double>(total.count);
    for (std::size_t n = 0; n <= n_steps; ++n) {
        out.times[n] = static_cast<double>(n) * dt;
        for (int c = 0; c < 3; ++c) {
            const std::size_t idx = n * 3 + static_cast<std::size_t>(c);
            const complexd mu = total.sum[idx] * inv_n;
            const double var_re =
                std::max(total.sumsq_re[idx] * inv_n - mu.real() * mu.real(), 0.0);
            const double var_im =
                std::max(total.sumsq_im[idx] * inv_n - mu.imag() * mu.imag(), 0.0);
            out.mean[n][static_cast<std::size_t>(c)] = mu;
            out.se[n][static_cast<std::size_t>(c)] = std::sqrt((var_re + var_im) * inv_n);
        }
    }
    return out;
}

} // namespace antipt
