// gaussian_info.hpp — two-mode Gaussian-state toolkit: quadratures from Stokes
// operators, covariance-matrix algebra, symplectic spectra, Gaussian discord
// (closed form and measurement-minimization oracle), Duan criterion.
//
// Ordering (X1, P1, X2, P2); shot-noise units, vacuum variance = 1.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace antipt {

inline constexpr double kSymplecticTol = 1e-9;

// Standard two-mode symplectic form for the (X1,P1,X2,P2) ordering
inline Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    return omega;
}

struct CovarianceMatrix4 {
    Eigen::Matrix4d m{Eigen::Matrix4d::Identity()};

    CovarianceMatrix4() = default;

    explicit CovarianceMatrix4(const Eigen::Matrix4d& entries) {
        if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("CovarianceMatrix4: matrix not symmetric");
        }
        m = 0.5 * (entries + entries.transpose());
    }

    Eigen::Matrix2d block_a() const { return m.block<2, 2>(0, 0); }
    Eigen::Matrix2d block_b() const { return m.block<2, 2>(2, 2); }
    Eigen::Matrix2d block_c() const { return m.block<2, 2>(0, 2); }
};

namespace detail {

struct SymplecticInvariants {
    long double i1, i2, i3, i4;
};

inline SymplecticInvariants symplectic_invariants(const Eigen::Matrix4d& m) {
    using LMat = Eigen::Matrix<long double, 4, 4>;
    const LMat ml = m.cast<long double>();
    auto det2 = [&](int r, int c) {
        return ml(r, c) * ml(r + 1, c + 1) - ml(r, c + 1) * ml(r + 1, c);
    };
    return {det2(0, 0), det2(2, 2), ml(0, 2) * ml(1, 3) - ml(0, 3) * ml(1, 2),
            ml.determinant()};
}

} // namespace detail

// Symplectic eigenvalues via the local invariants, 2 nu_pm^2 = Delta -+
// sqrt(Delta^2 - 4 det CM). nu_minus uses the product form to avoid the
// subtractive cancellation at near-pure states. Cross-checked against
// |eig(i*Omega*CM)| by the callers' tests.
inline std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix4& cm) {
    const auto inv = detail::symplectic_invariants(cm.m);
    const long double delta = inv.i1 + inv.i2 + 2.0L * inv.i3;
    long double disc = delta * delta - 4.0L * inv.i4;
    if (disc < -static_cast<long double>(kSymplecticTol)) {
        throw std::runtime_error("symplectic_eigenvalues: negative discriminant");
    }
    disc = std::max(disc, 0.0L);
    const long double root = std::sqrt(disc);
    const long double nu_plus_sq = 0.5L * (delta + root);
    if (nu_plus_sq < 0.0L) {
        throw std::runtime_error("symplectic_eigenvalues: negative nu^2");
    }
    const long double nu_minus_sq =
        (nu_plus_sq > 0.0L) ? std::max(inv.i4, 0.0L) / nu_plus_sq : 0.0L;
    return {static_cast<double>(std::sqrt(nu_plus_sq)),
            static_cast<double>(std::sqrt(nu_minus_sq))};
}

inline bool is_physical(const CovarianceMatrix4& cm, double tol = kSymplecticTol) {
    const auto [np, nm] = symplectic_eigenvalues(cm);
    // the discriminant loses ~|CM|^4 eps under the square root, so the
    // acceptance band widens with the matrix scale
    const double scale = std::max(1.0, cm.m.squaredNorm() / 4.0);
    const double eff = std::max(tol, 64.0 * scale * scale * 1e-16);
    return nm >= 1.0 - eff && np >= 1.0 - eff;
}

inline void require_physical(const CovarianceMatrix4& cm, const char* where) {
    if (!is_physical(cm)) {
        throw std::invalid_argument(std::string(where) + ": covariance matrix not physical");
    }
}

// X = Sx/sqrt(|Sz|), P = Sy/sqrt(|Sz|)
inline std::pair<double, double> quadratures_from_stokes(double sx, double sy, double sz) {
    if (sz == 0.0) {
        throw std::domain_error("quadratures_from_stokes: Sz = 0, quadratures undefined");
    }
    const double norm = std::sqrt(std::abs(sz));
    return {sx / norm, sy / norm};
}

struct StandardForm {
    double a;
    double b;
    double c_plus;
    double c_minus;
};

// Local symplectic invariants (a, b, c+, c-): a^2 = det A, b^2 = det B,
// c+ c- = det C with |c+| >= |c-|, det CM preserved.
inline StandardForm standard_form(const CovarianceMatrix4& cm) {
    require_physical(cm, "standard_form");
    const auto inv = detail::symplectic_invariants(cm.m);
    const long double a = std::sqrt(std::max(inv.i1, 0.0L));
    const long double b = std::sqrt(std::max(inv.i2, 0.0L));
    const long double ab = a * b;
    if (ab <= 0.0L) throw std::runtime_error("standard_form: degenerate marginals");
    // c+^2, c-^2 solve t^2 - s t + i3^2 = 0 with s fixed by det CM
    const long double s = (ab * ab + inv.i3 * inv.i3 - inv.i4) / ab;
    long double disc = s * s - 4.0L * inv.i3 * inv.i3;
    disc = std::max(disc, 0.0L);
    const long double t_plus = 0.5L * (s + std::sqrt(disc));
    const long double t_minus = (t_plus > 0.0L) ? (inv.i3 * inv.i3) / t_plus : 0.0L;
    const long double c_plus = std::sqrt(std::max(t_plus, 0.0L));
    const long double c_minus_mag = std::sqrt(std::max(t_minus, 0.0L));
    const long double c_minus = (inv.i3 < 0.0L) ? -c_minus_mag : c_minus_mag;
    return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c_plus),
            static_cast<double>(c_minus)};
}

inline CovarianceMatrix4 from_standard_form(const StandardForm& sf) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = m(1, 1) = sf.a;
    m(2, 2) = m(3, 3) = sf.b;
    m(0, 2) = m(2, 0) = sf.c_plus;
    m(1, 3) = m(3, 1) = sf.c_minus;
    return CovarianceMatrix4(m);
}

// f(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), f(1) = 0
inline double entropy_f(double x) {
    if (x < 1.0 - kSymplecticTol) {
        throw std::domain_error("entropy_f: argument below 1");
    }
    x = std::max(x, 1.0);
    const double p = 0.5 * (x + 1.0);
    const double q = 0.5 * (x - 1.0);
    const double hi = p * std::log2(p);
    const double lo = (q > 0.0) ? q * std::log2(q) : 0.0;
    return hi - lo;
}

enum class MeasuredMode { Channel1, Channel2 };

struct DiscordResult {
    double discord;     // bits
    double nu_plus;
    double nu_minus;
    double i1, i2, i3, i4;
    double duan_value;
};

// duan = [Var(X1-X2) + Var(P1+P2)] / 4; < 1 certifies entanglement
inline double duan_criterion(const CovarianceMatrix4& cm) {
    require_physical(cm, "duan_criterion");
    const auto& m = cm.m;
    const double var_xdiff = m(0, 0) + m(2, 2) - 2.0 * m(0, 2);
    const double var_psum = m(1, 1) + m(3, 3) + 2.0 * m(1, 3);
    return 0.25 * (var_xdiff + var_psum);
}

namespace detail {

// E_min of the conditional state after the optimal Gaussian measurement.
// ia: invariant of the conditioned (unmeasured) mode, ib: of the measured one.
inline double discord_e_min(long double ia, long double ib, long double i3, long double i4) {
    const long double c2 = i3 * i3;
    if (std::abs(ib - 1.0L) < 1e-12L) {
        // pure-vacuum measured marginal forces a product state
        return static_cast<double>(ia);
    }
    const long double lhs = (i4 - ia * ib) * (i4 - ia * ib);
    const long double rhs = (1.0L + ib) * c2 * (ia + i4);
    if (lhs <= rhs) {
        const long double inner = c2 + (ib - 1.0L) * (i4 - ia);
        const long double root = std::sqrt(std::max(inner, 0.0L));
        const long double num =
            2.0L * c2 + (ib - 1.0L) * (i4 - ia) + 2.0L * std::abs(i3) * root;
        return static_cast<double>(num / ((ib - 1.0L) * (ib - 1.0L)));
    }
    const long double k = ia * ib - c2;
    const long double term = k + i4;
    // (k + i4)^2 - 4 (k + c^2) i4 rearranged to avoid cancellation at c ~ 0
    long double disc = (k - i4) * (k - i4) - 4.0L * c2 * i4;
    disc = std::max(disc, 0.0L);
    return static_cast<double>((term - std::sqrt(disc)) / (2.0L * ib));
}

} // namespace detail

// Gaussian discord, closed form. The Gaussian measurement acts on `side`
// (default channel 1); the other mode is conditioned.
inline DiscordResult gaussian_discord(const CovarianceMatrix4& cm,
                                      MeasuredMode side = MeasuredMode::Channel1) {
    require_physical(cm, "gaussian_discord");
    const auto inv = detail::symplectic_invariants(cm.m);
    const double i1 = static_cast<double>(inv.i1);
    const double i2 = static_cast<double>(inv.i2);
    const double i3 = static_cast<double>(inv.i3);
    const double i4 = static_cast<double>(inv.i4);
    const auto [nu_plus, nu_minus] = symplectic_eigenvalues(cm);

    const long double i_meas_l = (side == MeasuredMode::Channel1) ? inv.i1 : inv.i2;
    const long double i_cond_l = (side == MeasuredMode::Channel1) ? inv.i2 : inv.i1;
    const double i_meas = static_cast<double>(i_meas_l);
    const double e_min = detail::discord_e_min(i_cond_l, i_meas_l, inv.i3, inv.i4);

    const double nu_p = std::max(nu_plus, 1.0);
    const double nu_m = std::max(nu_minus, 1.0);
    double d = entropy_f(std::sqrt(std::max(i_meas, 1.0))) - entropy_f(nu_p) -
               entropy_f(nu_m) + entropy_f(std::sqrt(std::max(e_min, 1.0)));
    if (d < 0.0 && d > -1e-12) d = 0.0;

    DiscordResult out;
    out.discord = d;
    out.nu_plus = nu_p;
    out.nu_minus = nu_m;
    out.i1 = i1;
    out.i2 = i2;
    out.i3 = i3;
    out.i4 = i4;
    out.duan_value = duan_criterion(cm);
    return out;
}

// Brute-force minimization over single-mode Gaussian measurements: the
// squeezed-heterodyne family with seed CM R(th) diag(s, 1/s) R(th)^T on a
// log grid s in [1e-3, 1e3], theta in [0, pi), plus the exact homodyne limit
// and a pattern-search refinement around the best point. Independent of the
// closed form above.
inline double discord_numeric_oracle(const CovarianceMatrix4& cm, int grid_size = 256,
                                     MeasuredMode side = MeasuredMode::Channel1) {
    if (grid_size < 32) {
        throw std::invalid_argument("discord_numeric_oracle: grid_size must be >= 32");
    }
    require_physical(cm, "discord_numeric_oracle");
    constexpr double kPi = 3.14159265358979323846;

    const bool measure_first = (side == MeasuredMode::Channel1);
    const Eigen::Matrix2d sig_cond = measure_first ? cm.block_b() : cm.block_a();
    const Eigen::Matrix2d sig_meas = measure_first ? cm.block_a() : cm.block_b();
    // cross block oriented conditioned -> measured
    const Eigen::Matrix2d cross =
        measure_first ? Eigen::Matrix2d(cm.block_c().transpose()) : cm.block_c();

    const auto [nu_plus, nu_minus] = symplectic_eigenvalues(cm);
    const double i_meas = sig_meas.determinant();

    auto conditional_entropy = [&](double log_s, double theta) {
        const double s = std::exp(log_s);
        const double ct = std::cos(theta);
        const double st = std::sin(theta);
        Eigen::Matrix2d rot;
        rot << ct, -st, st, ct;
        Eigen::Matrix2d seed;
        seed << s, 0.0, 0.0, 1.0 / s;
        const Eigen::Matrix2d meas = rot * seed * rot.transpose();
        const Eigen::Matrix2d total = sig_meas + meas;
        const Eigen::Matrix2d eps =
            sig_cond - cross * total.inverse() * cross.transpose();
        const double det_eps = std::max(eps.determinant(), 1.0);
        return entropy_f(std::sqrt(det_eps));
    };

    // projective quadrature measurement of X_theta, the s -> infinity limit
    auto homodyne_entropy = [&](double theta) {
        const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
        const double denom = dir.dot(sig_meas * dir);
        const Eigen::Vector2d cv = cross * dir;
        const Eigen::Matrix2d eps = sig_cond - (cv * cv.transpose()) / denom;
        const double det_eps = std::max(eps.determinant(), 1.0);
        return entropy_f(std::sqrt(det_eps));
    };

    const double log_s_min = std::log(1e-3);
    const double log_s_max = std::log(1e3);
    double best = std::numeric_limits<double>::infinity();
    double best_ls = 0.0;
    double best_th = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        const double ls = log_s_min + (log_s_max - log_s_min) *
                                          static_cast<double>(i) /
                                          static_cast<double>(grid_size - 1);
        for (int j = 0; j < grid_size; ++j) {
            const double th = kPi * static_cast<double>(j) / static_cast<double>(grid_size);
            const double v = conditional_entropy(ls, th);
            if (v < best) {
                best = v;
                best_ls = ls;
                best_th = th;
            }
        }
    }
    // pattern search in (log s, theta). |log s| stays within +-12 where the
    // Schur complement is well conditioned; the quadrature-projection limits
    // are handled exactly by the homodyne branch below.
    double step_ls = (log_s_max - log_s_min) / static_cast<double>(grid_size - 1);
    double step_th = kPi / static_cast<double>(grid_size);
    for (int round = 0; round < 200; ++round) {
        bool improved = false;
        for (const auto& [dls, dth] : std::array<std::pair<double, double>, 8>{
                 {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}}) {
            const double ls = std::clamp(best_ls + dls * step_ls, -12.0, 12.0);
            const double th = best_th + dth * step_th;
            const double v = conditional_entropy(ls, th);
            if (v < best - 1e-15) {
                best = v;
                best_ls = ls;
                best_th = th;
                improved = true;
            }
        }
        if (improved) {
            step_ls = std::min(step_ls * 2.0, 2.0);
            step_th = std::min(step_th * 2.0, 0.2);
        } else {
            step_ls *= 0.5;
            step_th *= 0.5;
            if (step_ls < 1e-10 && step_th < 1e-10) break;
        }
    }

    // homodyne branch: coarse theta grid plus shrinking local search
    double hbest = std::numeric_limits<double>::infinity();
    double hbest_th = 0.0;
    for (int j = 0; j < grid_size; ++j) {
        const double th = kPi * static_cast<double>(j) / static_cast<double>(grid_size);
        const double v = homodyne_entropy(th);
        if (v < hbest) {
            hbest = v;
            hbest_th = th;
        }
    }
    double hstep = kPi / static_cast<double>(grid_size);
    for (int round = 0; round < 80; ++round) {
        bool improved = false;
        for (double dth : {hstep, -hstep}) {
            const double v = homodyne_entropy(hbest_th + dth);
            if (v < hbest - 1e-15) {
                hbest = v;
                hbest_th = hbest_th + dth;
                improved = true;
            }
        }
        if (!improved) {
            hstep *= 0.5;
            if (hstep < 1e-12) break;
        }
    }
    best = std::min(best, hbest);

    double d = entropy_f(std::sqrt(std::max(i_meas, 1.0))) -
               entropy_f(std::max(nu_plus, 1.0)) - entropy_f(std::max(nu_minus, 1.0)) +
               best;
    if (d < 0.0 && d > -1e-10) d = 0.0;
    return d;
}

} // namespace antipt
