#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "antipt/eit_semiclassical.hpp"
#include "support/test_utils.hpp"

using namespace antipt;
using Catch::Approx;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProbeConfig both_on() { return ProbeConfig{}; }

ProbeConfig only_channel(int ch) {
    ProbeConfig pc;
    pc.channel_1_enabled = (ch == 1);
    pc.channel_2_enabled = (ch == 2);
    return pc;
}

} // namespace

TEST_CASE("coherence steady state") {
    SystemParams p;  // defaults: gamma0=1, Gc=3, Gamma_P=1, gamma12=6
    SECTION("decoupled Lorentzian closed form") {
        SystemParams q = p;
        q.gamma_c = 0.0;
        q.delta0 = 1.0;
        const double g12 = gamma12(q);
        const double kappa = q.control_rabi / q.gamma13;
        for (double db : {-2.0, 0.0, 0.7, 3.0}) {
            const auto [s1, s2] = coherence_steady_state(q, db, both_on());
            const complexd drive(0.0, kappa);
            CHECK(std::abs(s1 - drive / complexd(g12, db - 1.0)) < 1e-14);
            CHECK(std::abs(s2 - drive / complexd(g12, db + 1.0)) < 1e-14);
        }
    }
    SECTION("no drive, no coherence") {
        ProbeConfig pc;
        pc.e_in_1 = 0.0;
        pc.e_in_2 = 0.0;
        const auto [s1, s2] = coherence_steady_state(p, 0.3, pc);
        CHECK(std::abs(s1) == 0.0);
        CHECK(std::abs(s2) == 0.0);
    }
    SECTION("coupling mutually stimulates the coherences") {
        SystemParams q = p;
        q.delta0 = 0.0;
        const auto [c1, c2] = coherence_steady_state(q, 0.0, both_on());
        const auto [u1, u2] = coherence_steady_state(q, 0.0, only_channel(1));
        CHECK(std::abs(c1) > std::abs(u1));
        CHECK(std::abs(c2) > 0.0);
        CHECK(std::abs(u2) == 0.0);
    }
    SECTION("disabled channel keeps the full damping in the active one") {
        SystemParams q = p;
        q.delta0 = 0.5;
        const double g12 = gamma12(q);
        const double kappa = q.control_rabi / q.gamma13;
        const auto [s1, s2] = coherence_steady_state(q, 0.5, only_channel(1));
        CHECK(std::abs(s1 - complexd(0.0, kappa) / complexd(g12, 0.0)) < 1e-14);
        CHECK(std::abs(s2) == 0.0);
    }
}

TEST_CASE("probe gain anchors with the frozen calibration") {
    SystemParams p;
    p.delta0 = 0.0;
    SECTION("coupled on-resonance gain is ten percent") {
        const auto g = probe_gain(p, 0.0, both_on());
        CHECK(g.gain_1 == Approx(0.10).margin(1e-12));
        CHECK(g.gain_2 == Approx(0.10).margin(1e-12));
    }
    SECTION("uncoupled transmission never exceeds unity") {
        for (double db : testing::linspace(-30.0, 30.0, 601)) {
            const auto g = probe_gain(p, db, only_channel(1));
            CHECK(g.gain_1 <= 1e-12);
        }
    }
    SECTION("disabled channel reports bare absorption, flagged") {
        const auto g = probe_gain(p, 0.0, only_channel(1));
        CHECK_FALSE(g.channel_2_active);
        CHECK(g.gain_2 == Approx(-p.alpha_bg * (2.0 - p.alpha_bg)).epsilon(1e-14));
    }
    SECTION("enabled channel requires nonzero input") {
        ProbeConfig pc;
        pc.e_in_1 = 0.0;
        CHECK_THROWS_AS(probe_gain(p, 0.0, pc), std::invalid_argument);
    }
}

TEST_CASE("eit_spectrum peaks and separation") {
    SystemParams p;
    SECTION("uncoupled peaks sit at +-delta0") {
        SystemParams q = p;
        q.delta0 = 1.0;
        const auto grid = testing::linspace(-8.0, 8.0, 641);
        const auto s1 = eit_spectrum(q, grid, only_channel(1));
        const auto s2 = eit_spectrum(q, grid, only_channel(2));
        REQUIRE(s1.peak_1.has_value());
        REQUIRE(s2.peak_2.has_value());
        CHECK(*s1.peak_1 == Approx(1.0).margin(1e-3));
        CHECK(*s2.peak_2 == Approx(-1.0).margin(1e-3));
    }
    SECTION("uncoupled separation equals 2 delta0 when coupling is absent") {
        SystemParams q = p;
        q.gamma_c = 0.0;
        q.delta0 = 1.0;
        const auto grid = testing::linspace(-8.0, 8.0, 641);
        const auto spec = eit_spectrum(q, grid, both_on());
        REQUIRE(spec.separation.has_value());
        CHECK(*spec.separation == Approx(2.0).margin(2e-3));
    }
    SECTION("coupled peaks coincide below the EP while uncoupled sit apart") {
        SystemParams q = p;
        q.delta0 = 1.0;  // < Gc = 3
        const auto grid = testing::linspace(-10.0, 10.0, 1001);
        const auto coupled = eit_spectrum(q, grid, both_on());
        REQUIRE(coupled.separation.has_value());
        CHECK(*coupled.separation < 0.4 * (2.0 * q.delta0));
        const auto u1 = eit_spectrum(q, grid, only_channel(1));
        const auto u2 = eit_spectrum(q, grid, only_channel(2));
        REQUIRE(u1.peak_1.has_value());
        REQUIRE(u2.peak_2.has_value());
        CHECK(*u1.peak_1 == Approx(1.0).margin(0.01));
        CHECK(*u2.peak_2 == Approx(-1.0).margin(0.01));
    }
    SECTION("strong coupling pulls the peaks together") {
        SystemParams q = p;
        q.gamma_c = 6.0;
        q.delta0 = 0.5;
        const auto grid = testing::linspace(-10.0, 10.0, 1001);
        const auto spec = eit_spectrum(q, grid, both_on());
        REQUIRE(spec.separation.has_value());
        CHECK(*spec.separation < 0.1);
    }
    SECTION("far beyond the EP the separation approaches the supermode gap") {
        SystemParams q = p;
        q.delta0 = 30.0;  // 10 Gc
        const auto grid = testing::linspace(-45.0, 45.0, 3001);
        const auto spec = eit_spectrum(q, grid, both_on());
        REQUIRE(spec.separation.has_value());
        const double target = 2.0 * std::sqrt(q.delta0 * q.delta0 - q.gamma_c * q.gamma_c);
        CHECK(*spec.separation == Approx(target).epsilon(0.02));
    }
    SECTION("flat disabled trace leaves the separation undefined") {
        const auto grid = testing::linspace(-5.0, 5.0, 101);
        const auto spec = eit_spectrum(p, grid, only_channel(1));
        CHECK_FALSE(spec.separation.has_value());
    }
    SECTION("grid validation") {
        CHECK_THROWS_AS(eit_spectrum(p, {0.0, 1.0}, both_on()), std::invalid_argument);
        CHECK_THROWS_AS(eit_spectrum(p, {0.0, 1.0, 0.5}, both_on()), std::invalid_argument);
    }
}

TEST_CASE("phase sweep") {
    SystemParams p;
    p.delta0 = 0.0;
    const auto grid = testing::linspace(0.0, 2.0 * kPi, 181);
    SECTION("2 pi periodic endpoints") {
        const auto rows = phase_sweep(p, grid, both_on());
        CHECK(std::abs(rows.front().gain_1 - rows.back().gain_1) < 1e-12);
        CHECK(std::abs(rows.front().gain_2 - rows.back().gain_2) < 1e-12);
    }
    SECTION("flat without coupling") {
        SystemParams q = p;
        q.gamma_c = 0.0;
        const auto rows = phase_sweep(q, grid, both_on());
        for (const auto& r : rows) {
            CHECK(r.gain_1 == Approx(rows.front().gain_1).margin(1e-12));
            CHECK(r.gain_2 == Approx(rows.front().gain_2).margin(1e-12));
        }
    }
    SECTION("coupled gains vary and a single harmonic explains them") {
        const auto rows = phase_sweep(p, grid, both_on());
        double lo = 1e9, hi = -1e9;
        for (const auto& r : rows) {
            lo = std::min(lo, r.gain_1);
            hi = std::max(hi, r.gain_1);
        }
        CHECK(hi - lo > 1e-3);
        // discrete single-harmonic projection, excluding the repeated endpoint
        const std::size_t n = rows.size() - 1;
        for (auto trace : {&PhaseRow::gain_1, &PhaseRow::gain_2}) {
            double a0 = 0.0, ac = 0.0, as = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double g = rows[i].*trace;
                a0 += g;
                ac += g * std::cos(rows[i].phi);
                as += g * std::sin(rows[i].phi);
            }
            a0 /= static_cast<double>(n);
            ac *= 2.0 / static_cast<double>(n);
            as *= 2.0 / static_cast<double>(n);
            double ss_res = 0.0, ss_tot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double g = rows[i].*trace;
                const double fit = a0 + ac * std::cos(rows[i].phi) + as * std::sin(rows[i].phi);
                ss_res += (g - fit) * (g - fit);
                ss_tot += (g - a0) * (g - a0);
            }
            CHECK(ss_res <= 0.01 * ss_tot);
        }
    }
    SECTION("phase grid must span 2 pi") {
        CHECK_THROWS_AS(phase_sweep(p, testing::linspace(0.0, 3.0, 10), both_on()),
                        std::invalid_argument);
    }
}

namespace {

// sharper working point for the EP bend: Gc / gamma12 = 0.8
SystemParams bend_params() {
    SystemParams p;
    p.gamma_c = 3.0;
    p.gamma0 = 0.375;
    p.control_rabi = std::sqrt(0.1875 * 100.0);
    p.gamma13 = 100.0;
    return p;
}

} // namespace

TEST_CASE("separation sweep across the EP") {
    SystemParams p;
    const auto d0_grid = testing::linspace(0.0, 9.0, 101);
    const auto rows = separation_sweep(p, d0_grid, both_on());
    REQUIRE(rows.size() == d0_grid.size());
    SECTION("starts at zero and grows monotonically") {
        CHECK(rows.front().separation == Approx(0.0).margin(1e-9));
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].separation >= rows[i - 1].separation - 1e-9);
        }
    }
    SECTION("asymptote matches the supermode gap") {
        const double d0 = rows.back().delta0;
        const double target = 2.0 * std::sqrt(d0 * d0 - p.gamma_c * p.gamma_c);
        CHECK(rows.back().separation == Approx(target).epsilon(0.10));
    }
    SECTION("maximum curvature within 20 percent of the EP at a sharp working point") {
        const auto q = bend_params();
        const auto sharp = separation_sweep(q, d0_grid, both_on());
        std::size_t kink = 1;
        double best = -1.0;
        for (std::size_t i = 1; i + 1 < sharp.size(); ++i) {
            const double curv = std::abs(sharp[i + 1].separation - 2.0 * sharp[i].separation +
                                         sharp[i - 1].separation);
            if (curv > best) {
                best = curv;
                kink = i;
            }
        }
        CHECK(std::abs(sharp[kink].delta0 - q.gamma_c) <= 0.2 * q.gamma_c);
    }
    SECTION("pulled peaks below the EP") {
        for (const auto& r : rows) {
            if (r.delta0 > 0.1 && r.delta0 < p.gamma_c) {
                CHECK(r.separation < 2.0 * r.delta0);
            }
        }
    }
}

TEST_CASE("curvature point scales linearly with the coupling rate") {
    std::vector<double> locations;
    for (double scale : {0.5, 1.0, 2.0}) {
        SystemParams p = bend_params();
        const double gc = p.gamma_c * scale;
        p.gamma_c = gc;
        p.gamma0 *= scale;
        p.control_rabi *= std::sqrt(scale);
        const auto grid = testing::linspace(0.0, 3.0 * gc, 101);
        const auto rows = separation_sweep(p, grid, both_on());
        std::size_t kink = 1;
        double best = -1.0;
        for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
            const double curv = std::abs(rows[i + 1].separation - 2.0 * rows[i].separation +
                                         rows[i - 1].separation);
            if (curv > best) {
                best = curv;
                kink = i;
            }
        }
        locations.push_back(rows[kink].delta0 / gc);
    }
    CHECK(locations[1] == Approx(locations[0]).margin(0.1));
    CHECK(locations[2] == Approx(locations[1]).margin(0.1));
}

TEST_CASE("linearity and channel exchange") {
    SystemParams p;
    p.delta0 = 0.7;
    SECTION("probe scaling leaves gains invariant") {
        std::mt19937_64 rng(61);
        std::uniform_real_distribution<double> u(0.1, 3.0);
        for (int i = 0; i < 50; ++i) {
            ProbeConfig pc;
            pc.e_in_1 = complexd(u(rng), u(rng) - 1.5);
            pc.e_in_2 = complexd(u(rng), 0.3);
            const complexd lambda(u(rng), u(rng));
            ProbeConfig scaled = pc;
            scaled.e_in_1 *= lambda;
            scaled.e_in_2 *= lambda;
            const double db = u(rng) - 1.5;
            const auto g = probe_gain(p, db, pc);
            const auto gs = probe_gain(p, db, scaled);
            CHECK(g.gain_1 == Approx(gs.gain_1).margin(1e-12));
            CHECK(g.gain_2 == Approx(gs.gain_2).margin(1e-12));
            // coherences scale linearly
            const auto [c1, c2] = coherence_steady_state(p, db, pc);
            const auto [l1, l2] = coherence_steady_state(p, db, scaled);
            CHECK(std::abs(l1 - lambda * c1) < 1e-12);
            CHECK(std::abs(l2 - lambda * c2) < 1e-12);
        }
    }
    SECTION("swapping channels and delta0 sign swaps the gains") {
        ProbeConfig pc;
        pc.e_in_1 = complexd(1.0, 0.2);
        pc.e_in_2 = complexd(0.8, -0.4);
        SystemParams q = p;
        q.delta0 = -p.delta0;
        ProbeConfig swapped;
        swapped.e_in_1 = pc.e_in_2;
        swapped.e_in_2 = pc.e_in_1;
        for (double db : {-1.0, 0.0, 0.5, 2.0}) {
            const auto g = probe_gain(p, db, pc);
            const auto gs = probe_gain(q, db, swapped);
            CHECK(g.gain_1 == Approx(gs.gain_2).margin(1e-12));
            CHECK(g.gain_2 == Approx(gs.gain_1).margin(1e-12));
        }
    }
}
