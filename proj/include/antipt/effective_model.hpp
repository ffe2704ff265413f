// effective_model.hpp — model parameters, the 2x2 non-Hermitian Hamiltonian,
// its supermodes and regime classification.
//
// Conventions: all rates and frequencies in rad/s (configs may work in
// normalized units, gamma0 = 1). delta0 is stored signed; the Hamiltonian
// consumes |delta0|.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace antipt {

using complexd = std::complex<double>;

struct SystemParams {
    double delta0{0.0};        // half the spin-wave frequency difference (signed)
    double gamma0{1.0};        // intrinsic ground-state coherence decay
    double gamma_c{3.0};       // inter-channel dissipative coupling rate
    double control_rabi{10.0}; // control Rabi frequency (same in both channels)
    double gamma13{100.0};     // optical coherence decay
    double omega_larmor{1000.0}; // Larmor frequency; spectral analysis center
    double n_exc{1.0};         // excess-noise occupancy of the atomic reservoirs
    double eta_read{0.5};      // readout gain, spin spectral density -> optical
    double broad_amp{0.0};     // broad single-pass pedestal amplitude
    double broad_width{1.0};   // pedestal Lorentzian width

    // probe readout calibration (steady-state transmission model); frozen
    // against the two gain anchors, see eit_semiclassical.hpp
    double alpha_bg{0.98};
    double g_read{32.064265445104546};

    double pump_rate() const { return control_rabi * control_rabi / gamma13; }

    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(delta0) || !finite(gamma0) || !finite(gamma_c) ||
            !finite(control_rabi) || !finite(gamma13) || !finite(omega_larmor) ||
            !finite(n_exc) || !finite(eta_read) || !finite(broad_amp) ||
            !finite(broad_width)) {
            throw std::invalid_argument("SystemParams: non-finite field");
        }
        if (gamma0 <= 0.0) throw std::invalid_argument("SystemParams: gamma0 must be > 0");
        if (gamma13 <= 0.0) throw std::invalid_argument("SystemParams: gamma13 must be > 0");
        if (gamma_c < 0.0) throw std::invalid_argument("SystemParams: gamma_c must be >= 0");
        if (n_exc < 0.0) throw std::invalid_argument("SystemParams: n_exc must be >= 0");
        if (eta_read < 0.0) throw std::invalid_argument("SystemParams: eta_read must be >= 0");
        if (broad_amp < 0.0) throw std::invalid_argument("SystemParams: broad_amp must be >= 0");
        if (broad_width <= 0.0) throw std::invalid_argument("SystemParams: broad_width must be > 0");
        // gamma12 - gamma_c = gamma0 + 2*Gamma_P > 0 guarantees stability
        if (gamma0 + 2.0 * pump_rate() <= 0.0) {
            throw std::invalid_argument("SystemParams: gamma12 must exceed gamma_c");
        }
    }
};

enum class Regime { Unbroken, ExceptionalPoint, Broken };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Unbroken: return "unbroken";
        case Regime::ExceptionalPoint: return "exceptional_point";
        case Regime::Broken: return "broken";
    }
    return "unknown";
}

struct SupermodePair {
    complexd omega_plus;   // real part: EIT center; imaginary part: -linewidth
    complexd omega_minus;
    Regime regime{Regime::Unbroken};
};

// gamma12 = gamma0 + Gamma_c + 2*Gamma_P, Gamma_P = |Omega_1|^2 / gamma13
inline double gamma12(const SystemParams& p) {
    p.validate();
    return p.gamma0 + p.gamma_c + 2.0 * p.pump_rate();
}

// H = [[|D0| - i g12, i Gc], [i Gc, -|D0| - i g12]]
inline Eigen::Matrix2cd build_hamiltonian(const SystemParams& p) {
    const double g12 = gamma12(p);
    const double d = std::abs(p.delta0);
    Eigen::Matrix2cd h;
    h << complexd(d, -g12), complexd(0.0, p.gamma_c),
         complexd(0.0, p.gamma_c), complexd(-d, -g12);
    return h;
}

// omega_pm = -i*gamma12 +- sqrt(delta0^2 - gamma_c^2), principal branch:
// omega_plus carries the larger real part (broken) or the smaller linewidth
// (unbroken).
inline SupermodePair supermodes(const SystemParams& p, double tol = 1e-6) {
    if (!(tol > 0.0)) throw std::invalid_argument("supermodes: tol must be > 0");
    const double g12 = gamma12(p);
    const double d = std::abs(p.delta0);
    const double c = p.gamma_c;
    const complexd split = std::sqrt(complexd(d * d - c * c, 0.0));

    SupermodePair out;
    out.omega_plus = complexd(0.0, -g12) + split;
    out.omega_minus = complexd(0.0, -g12) - split;
    // Gc = D0 = 0 degenerates to a double mode at -i*gamma12, classified EP
    if (std::abs(d - c) <= tol * c) {
        out.regime = Regime::ExceptionalPoint;
    } else if (d < c) {
        out.regime = Regime::Unbroken;
    } else {
        out.regime = Regime::Broken;
    }
    return out;
}

struct EigengapRow {
    double delta0;
    double re_gap;  // |Re w+ - Re w-|
    double im_gap;  // |Im w+ - Im w-|
};

inline std::vector<EigengapRow> eigengap_sweep(const SystemParams& base,
                                               const std::vector<double>& delta0_grid) {
    base.validate();
    if (delta0_grid.empty()) {
        throw std::invalid_argument("eigengap_sweep: empty grid");
    }
    for (std::size_t i = 1; i < delta0_grid.size(); ++i) {
        if (!(delta0_grid[i] > delta0_grid[i - 1])) {
            throw std::invalid_argument("eigengap_sweep: grid must be ascending");
        }
    }
    std::vector<EigengapRow> rows;
    rows.reserve(delta0_grid.size());
    for (double d0 : delta0_grid) {
        SystemParams p = base;
        p.delta0 = d0;
        const auto sm = supermodes(p);
        rows.push_back({d0,
                        std::abs(sm.omega_plus.real() - sm.omega_minus.real()),
                        std::abs(sm.omega_plus.imag() - sm.omega_minus.imag())});
    }
    return rows;
}

} // namespace antipt
