// langevin_spectra.hpp — two-mode quantum Langevin dynamics in the conjugate
// basis v = (b1, b2^dag), rotating frame at the Larmor frequency: drift and
// noise model, shot-noise-normalized homodyne spectra, per-frequency
// covariance matrices, and the Euler-Maruyama time-domain oracle.
//
// Spectral conventions: omega is the detuning from Omega_L, two-sided
// densities, vacuum floor = 1 (0 dB). The atomic contribution above the
// floor is the d_in-driven (normally ordered) part, folded over +-omega as
// any real homodyne record folds it; d_out carries the vacuum commutator and
// is tied to d_in by d_out - d_in = 2*Gamma_damp.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "antipt/detail/fft.hpp"
#include "antipt/detail/rng.hpp"
#include "antipt/effective_model.hpp"
#include "antipt/gaussian_info.hpp"

namespace antipt {

struct DriftMatrix {
    Eigen::Matrix2cd m;
};

// m = [[-i d0 - g12, Gc], [Gc, +i d0 - g12]]; eigenvalue real parts are
// -(g12 -+ sqrt(Gc^2 - d0^2)) in the unbroken regime, all strictly negative.
inline DriftMatrix drift_matrix(const SystemParams& p) {
    const double g12 = gamma12(p);
    Eigen::Matrix2cd m;
    m << complexd(-g12, -p.delta0), complexd(p.gamma_c, 0.0),
         complexd(p.gamma_c, 0.0), complexd(-g12, p.delta0);
    return {m};
}

struct NoiseModel {
    Eigen::Matrix2d d_out;  // <F F^dag> density
    Eigen::Matrix2d d_in;   // <F^dag F> density

    // Raw constructor; the boundary gamma12 = gamma_c is representable here
    // even though SystemParams excludes it.
    static NoiseModel from_rates(double g12, double gamma_c, double n_exc) {
        Eigen::Matrix2d damp;
        damp << g12, -gamma_c, -gamma_c, g12;
        NoiseModel nm;
        nm.d_out = 2.0 * (1.0 + n_exc) * damp;
        nm.d_in = 2.0 * n_exc * damp;
        nm.check();
        return nm;
    }

    void check() const {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es_out(d_out);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es_in(d_in);
        const double scale = std::max(1.0, std::abs(d_out(0, 0)));
        if (es_out.eigenvalues().minCoeff() < -1e-12 * scale ||
            es_in.eigenvalues().minCoeff() < -1e-12 * scale) {
            throw std::runtime_error("NoiseModel: correlation matrix not PSD");
        }
    }
};

inline NoiseModel noise_model(const SystemParams& p) {
    return NoiseModel::from_rates(gamma12(p), p.gamma_c, p.n_exc);
}

// chi(omega) = (-i w I - m)^(-1)
inline Eigen::Matrix2cd susceptibility(const DriftMatrix& drift, double omega) {
    Eigen::Matrix2cd a = -drift.m;
    a(0, 0) += complexd(0.0, -omega);
    a(1, 1) += complexd(0.0, -omega);
    return a.inverse();
}

struct SpectralModeMatrices {
    Eigen::Matrix2cd s_vvdag;  // chi d_out chi^dag
    Eigen::Matrix2cd s_vdagv;  // chi^* d_in chi^T
};

inline SpectralModeMatrices spectral_mode_matrices(const SystemParams& p, double omega) {
    const auto drift = drift_matrix(p);
    const auto nm = noise_model(p);
    const Eigen::Matrix2cd chi = susceptibility(drift, omega);
    SpectralModeMatrices out;
    out.s_vvdag = chi * nm.d_out.cast<complexd>() * chi.adjoint();
    out.s_vdagv = chi.conjugate() * nm.d_in.cast<complexd>() * chi.transpose();
    return out;
}

inline double pedestal_density(const SystemParams& p, double omega) {
    if (p.broad_amp == 0.0) return 0.0;
    const double w2 = p.broad_width * p.broad_width;
    return p.broad_amp * w2 / (omega * omega + w2);
}

struct NoiseSpectrum {
    std::vector<double> omega_grid;             // detuning from Omega_L
    std::vector<CovarianceMatrix4> cm_per_omega;
    std::vector<Eigen::Matrix4d> se_per_omega;  // filled by the time-domain estimate
};

namespace detail {

// Quadrature CM at one analysis frequency. W = chi d_in chi^dag; the map to
// (X1,P1,X2,P2) with b2 = v2^dag gives equal diagonals eta*tr(W) and the
// phase-conjugate cross pattern CM13 = -CM24, CM14 = CM23.
inline Eigen::Matrix4d quadrature_cm(const SystemParams& p, const DriftMatrix& drift,
                                     const Eigen::Matrix2d& d_in, double omega) {
    const Eigen::Matrix2cd chi = susceptibility(drift, omega);
    const Eigen::Matrix2cd w = chi * d_in.cast<complexd>() * chi.adjoint();
    const double diag = p.eta_read * (w(0, 0).real() + w(1, 1).real());
    const double re_c = 2.0 * p.eta_read * w(0, 1).real();
    const double im_c = 2.0 * p.eta_read * w(0, 1).imag();
    const double ped = pedestal_density(p, omega);

    Eigen::Matrix4d cm = Eigen::Matrix4d::Identity() * (1.0 + ped);
    cm(0, 0) += diag;
    cm(1, 1) += diag;
    cm(2, 2) += diag;
    cm(3, 3) += diag;
    cm(0, 2) = cm(2, 0) = re_c;
    cm(1, 3) = cm(3, 1) = -re_c;
    cm(0, 3) = cm(3, 0) = im_c;
    cm(1, 2) = cm(2, 1) = im_c;
    return cm;
}

} // namespace detail

inline NoiseSpectrum spectral_cm(const SystemParams& p, const std::vector<double>& omega_grid) {
    p.validate();
    if (omega_grid.empty()) throw std::invalid_argument("spectral_cm: empty grid");
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (!std::isfinite(omega_grid[i])) {
            throw std::invalid_argument("spectral_cm: non-finite grid value");
        }
        if (i > 0 && !(omega_grid[i] > omega_grid[i - 1])) {
            throw std::invalid_argument("spectral_cm: grid must be ascending");
        }
    }
    const auto drift = drift_matrix(p);
    const auto nm = noise_model(p);

    NoiseSpectrum out;
    out.omega_grid = omega_grid;
    out.cm_per_omega.reserve(omega_grid.size());
    for (double w : omega_grid) {
        const Eigen::Matrix4d cm = detail::quadrature_cm(p, drift, nm.d_in, w);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(cm - Eigen::Matrix4d::Identity());
        if (es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, cm.norm())) {
            throw std::runtime_error("spectral_cm: atomic contribution lost positivity");
        }
        out.cm_per_omega.emplace_back(cm);
    }
    return out;
}

// CM at the analysis frequency: omega = 0 in the rotating frame, i.e. at the
// Larmor frequency in the lab.
inline CovarianceMatrix4 cm_at_analysis_frequency(const SystemParams& p) {
    p.validate();
    const auto drift = drift_matrix(p);
    const auto nm = noise_model(p);
    return CovarianceMatrix4(detail::quadrature_cm(p, drift, nm.d_in, 0.0));
}

struct VarianceRow {
    double omega;
    double varx1_db;
    double varx2_db;
    double varxdiff_db;  // Var(X1-X2)/2, 0 dB for vacuum
    double varpsum_db;   // Var(P1+P2)/2
};

inline std::vector<VarianceRow> variance_traces(const NoiseSpectrum& spec) {
    if (spec.omega_grid.size() != spec.cm_per_omega.size()) {
        throw std::invalid_argument("variance_traces: inconsistent spectrum");
    }
    auto db = [](double v) { return 10.0 * std::log10(v); };
    std::vector<VarianceRow> rows;
    rows.reserve(spec.omega_grid.size());
    for (std::size_t i = 0; i < spec.omega_grid.size(); ++i) {
        const auto& m = spec.cm_per_omega[i].m;
        const double varx1 = m(0, 0);
        const double varx2 = m(2, 2);
        const double xdiff = 0.5 * (m(0, 0) + m(2, 2) - 2.0 * m(0, 2));
        const double psum = 0.5 * (m(1, 1) + m(3, 3) + 2.0 * m(1, 3));
        if (std::abs(xdiff - psum) > 1e-10 * std::max(1.0, std::abs(xdiff))) {
            throw std::runtime_error("variance_traces: Var(X1-X2) != Var(P1+P2)");
        }
        rows.push_back({spec.omega_grid[i], db(varx1), db(varx2), db(xdiff), db(psum)});
    }
    return rows;
}

namespace detail {

// Stationary Lyapunov solve: m P + P m^dag + D = 0.
inline Eigen::Matrix2cd stationary_covariance(const Eigen::Matrix2cd& m,
                                              const Eigen::Matrix2d& d) {
    Eigen::Matrix4cd k = Eigen::Matrix4cd::Zero();
    // column-major vec: vec(m P) = (I (x) m) vec P, vec(P m^dag) = (conj m (x) I) vec P
    for (int col = 0; col < 2; ++col) {
        for (int row = 0; row < 2; ++row) {
            const int idx = row + 2 * col;
            for (int s = 0; s < 2; ++s) {
                k(idx, s + 2 * col) += m(row, s);
                k(idx, row + 2 * s) += std::conj(m(col, s));
            }
        }
    }
    Eigen::Vector4cd rhs;
    rhs << -d(0, 0), -d(1, 0), -d(0, 1), -d(1, 1);
    const Eigen::Vector4cd v = k.fullPivLu().solve(rhs);
    Eigen::Matrix2cd p;
    p << v(0), v(2), v(1), v(3);
    return 0.5 * (p + p.adjoint());
}

inline Eigen::Matrix2cd hermitian_sqrt(const Eigen::Matrix2cd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(a);
    Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

inline Eigen::Matrix2d symmetric_sqrt(const Eigen::Matrix2d& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a);
    Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

inline constexpr std::array<std::pair<int, int>, 10> kUpperPairs{
    {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};

struct PeriodogramAccumulator {
    // unique entries of the symmetric 4x4 per frequency bin
    std::vector<double> sum;
    std::vector<double> sumsq;
    std::size_t count{0};

    explicit PeriodogramAccumulator(std::size_t bins)
        : sum(bins * kUpperPairs.size(), 0.0), sumsq(bins * kUpperPairs.size(), 0.0) {}

    void merge(const PeriodogramAccumulator& other) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += other.sum[i];
            sumsq[i] += other.sumsq[i];
        }
        count += other.count;
    }
};

} // namespace detail

struct SimulateOptions {
    std::size_t workers{0};  // 0 = hardware concurrency; result is worker-count independent
};

// Euler-Maruyama integration of dv = m v dt + L dW with L the symmetric
// factor of d_in, stationary start, Hann-windowed periodograms of the
// synthesized homodyne records averaged over trajectories. Deterministic for
// fixed seed: per-trajectory streams keyed by (seed, trajectory index),
// reduction over fixed chunk boundaries in chunk order.
inline NoiseSpectrum simulate_time_domain(const SystemParams& p, std::uint64_t seed,
                                          std::size_t n_traj, double dt, double t_total,
                                          const SimulateOptions& opts = {}) {
    p.validate();
    const double g12 = gamma12(p);
    if (!(dt > 0.0) || dt >= 0.1 / g12) {
        throw std::invalid_argument("simulate_time_domain: dt must satisfy dt < 0.1/gamma12");
    }
    if (n_traj < 1) throw std::invalid_argument("simulate_time_domain: n_traj must be >= 1");
    const double steps_d = t_total / dt;
    if (!(steps_d >= 256.0)) {
        throw std::invalid_argument("simulate_time_domain: t_total must cover >= 256 steps");
    }
    std::size_t n_fft = 256;
    while (n_fft * 2 <= static_cast<std::size_t>(steps_d)) n_fft *= 2;

    const auto drift = drift_matrix(p);
    const auto nm = noise_model(p);
    const Eigen::Matrix2cd l_noise = detail::symmetric_sqrt(nm.d_in).cast<complexd>();
    const Eigen::Matrix2cd p_stat = detail::stationary_covariance(drift.m, nm.d_in);
    const Eigen::Matrix2cd e_stat = detail::hermitian_sqrt(p_stat);

    const double sqrt_eta = std::sqrt(p.eta_read);
    const double shot_sigma = std::sqrt(1.0 / dt);
    const bool pedestal = p.broad_amp > 0.0;
    const double ped_theta = p.broad_width;
    const double ped_sigma = p.broad_width * std::sqrt(p.broad_amp);
    const double ped_stat_sd = std::sqrt(0.5 * p.broad_amp * p.broad_width);

    std::vector<double> window(n_fft);
    double wsum2 = 0.0;
    for (std::size_t n = 0; n < n_fft; ++n) {
        window[n] = 0.5 * (1.0 - std::cos(6.283185307179586 * static_cast<double>(n) /
                                          static_cast<double>(n_fft)));
        wsum2 += window[n] * window[n];
    }
    const double scale = dt / wsum2;

    const std::size_t n_chunks = std::min<std::size_t>(64, n_traj);
    auto run_chunk = [&](std::size_t chunk) {
        detail::PeriodogramAccumulator acc(n_fft);
        const std::size_t lo = chunk * n_traj / n_chunks;
        const std::size_t hi = (chunk + 1) * n_traj / n_chunks;
        std::vector<std::vector<std::complex<double>>> rec(
            4, std::vector<std::complex<double>>(n_fft));
        for (std::size_t traj = lo; traj < hi; ++traj) {
            detail::GaussianRng rng(detail::stream_seed(seed, traj));
            // stationary start: <v v^dag> = P, <v v^T> = 0
            const double inv_sqrt2 = 0.7071067811865475244;
            Eigen::Vector2cd zeta(
                complexd(rng.gaussian(), rng.gaussian()) * inv_sqrt2,
                complexd(rng.gaussian(), rng.gaussian()) * inv_sqrt2);
            Eigen::Vector2cd v = e_stat * zeta;
            double ped_state[4] = {0.0, 0.0, 0.0, 0.0};
            if (pedestal) {
                for (auto& x : ped_state) x = ped_stat_sd * rng.gaussian();
            }
            const double noise_amp = std::sqrt(0.5 * dt);
            const double ped_amp = ped_sigma * std::sqrt(dt);
            for (std::size_t n = 0; n < n_fft; ++n) {
                const double q[4] = {sqrt_eta * 2.0 * v(0).real(), sqrt_eta * 2.0 * v(0).imag(),
                                     sqrt_eta * 2.0 * v(1).real(), -sqrt_eta * 2.0 * v(1).imag()};
                for (int r = 0; r < 4; ++r) {
                    double sample = q[r] + shot_sigma * rng.gaussian();
                    if (pedestal) sample += ped_state[r];
                    rec[r][n] = window[n] * sample;
                }
                const Eigen::Vector2cd dxi(complexd(rng.gaussian(), rng.gaussian()),
                                           complexd(rng.gaussian(), rng.gaussian()));
                v += drift.m * v * dt + l_noise * (noise_amp * dxi);
                if (!std::isfinite(v(0).real()) || !std::isfinite(v(0).imag()) ||
                    !std::isfinite(v(1).real()) || !std::isfinite(v(1).imag())) {
                    throw std::runtime_error(
                        "simulate_time_domain: non-finite sample at trajectory " +
                        std::to_string(traj) + ", step " + std::to_string(n));
                }
                if (pedestal) {
                    for (auto& x : ped_state) {
                        x += -ped_theta * x * dt + ped_amp * rng.gaussian();
                    }
                }
            }
            for (int r = 0; r < 4; ++r) detail::fft_inplace(rec[r]);
            for (std::size_t k = 0; k < n_fft; ++k) {
                for (std::size_t e = 0; e < detail::kUpperPairs.size(); ++e) {
                    const auto [a, b] = detail::kUpperPairs[e];
                    const double val = scale * (rec[a][k] * std::conj(rec[b][k])).real();
                    acc.sum[k * 10 + e] += val;
                    acc.sumsq[k * 10 + e] += val * val;
                }
            }
            acc.count += 1;
        }
        return acc;
    };

    std::size_t workers = opts.workers;
    if (workers == 0) {
        workers = std::max<std::size_t>(
            1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
    }
    detail::PeriodogramAccumulator total(n_fft);
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) total.merge(run_chunk(c));
    } else {
        // bounded in-flight futures, merged strictly in chunk order
        std::vector<std::future<detail::PeriodogramAccumulator>> inflight;
        std::size_t launched = 0;
        std::size_t merged = 0;
        inflight.resize(n_chunks);
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

    // FFT bins mapped to signed detunings, ascending
    const double dw = 6.283185307179586 / (static_cast<double>(n_fft) * dt);
    NoiseSpectrum out;
    out.omega_grid.resize(n_fft);
    out.cm_per_omega.resize(n_fft);
    out.se_per_omega.resize(n_fft);
    const double inv_n = 1.0 / static_cast<double>(total.count);
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(n_fft / 2);
    for (std::size_t k = 0; k < n_fft; ++k) {
        const std::ptrdiff_t signed_idx =
            (static_cast<std::ptrdiff_t>(k) <= half)
                ? static_cast<std::ptrdiff_t>(k)
                : static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(n_fft);
        const std::size_t pos = static_cast<std::size_t>(signed_idx + half - 1);
        out.omega_grid[pos] = static_cast<double>(signed_idx) * dw;
        Eigen::Matrix4d mean = Eigen::Matrix4d::Zero();
        Eigen::Matrix4d se = Eigen::Matrix4d::Zero();
        for (std::size_t e = 0; e < detail::kUpperPairs.size(); ++e) {
            const auto [a, b] = detail::kUpperPairs[e];
            const double mu = total.sum[k * 10 + e] * inv_n;
            const double var = std::max(total.sumsq[k * 10 + e] * inv_n - mu * mu, 0.0);
            mean(a, b) = mean(b, a) = mu;
            se(a, b) = se(b, a) = std::sqrt(var * inv_n);
        }
        CovarianceMatrix4 cm;
        cm.m = mean;
        out.cm_per_omega[pos] = cm;
        out.se_per_omega[pos] = se;
    }
    return out;
}

} // namespace antipt
