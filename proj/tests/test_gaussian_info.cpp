#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "antipt/gaussian_info.hpp"
#include "antipt/langevin_spectra.hpp"
#include "support/test_utils.hpp"

using namespace antipt;
using Catch::Approx;

TEST_CASE("quadratures from Stokes operators") {
    auto [x, p] = quadratures_from_stokes(1.0, 2.0, 4.0);
    CHECK(x == Approx(0.5).epsilon(1e-15));
    CHECK(p == Approx(1.0).epsilon(1e-15));
    auto [x2, p2] = quadratures_from_stokes(0.0, 0.0, 7.3);
    CHECK(x2 == 0.0);
    CHECK(p2 == 0.0);
    auto [x3, p3] = quadratures_from_stokes(3.0, -3.0, 9.0);
    CHECK(x3 == Approx(1.0).epsilon(1e-15));
    CHECK(p3 == Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(quadratures_from_stokes(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("CovarianceMatrix4 requires symmetry") {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 1) = 0.5;
    CHECK_THROWS_AS(CovarianceMatrix4(m), std::invalid_argument);
}

TEST_CASE("standard form invariants") {
    SECTION("identity") {
        const auto sf = standard_form(CovarianceMatrix4{});
        CHECK(sf.a == Approx(1.0).epsilon(1e-14));
        CHECK(sf.b == Approx(1.0).epsilon(1e-14));
        CHECK(sf.c_plus == Approx(0.0).margin(1e-12));
        CHECK(sf.c_minus == Approx(0.0).margin(1e-12));
    }
    SECTION("two-mode squeezed vacuum is already in standard form") {
        const double r = 0.6;
        const auto sf = standard_form(testing::tmsv(r));
        CHECK(sf.a == Approx(std::cosh(2.0 * r)).epsilon(1e-12));
        CHECK(sf.b == Approx(std::cosh(2.0 * r)).epsilon(1e-12));
        CHECK(sf.c_plus == Approx(std::sinh(2.0 * r)).margin(1e-7));
        CHECK(sf.c_minus == Approx(-std::sinh(2.0 * r)).margin(1e-7));
        CHECK(sf.c_plus * sf.c_minus ==
              Approx(-std::sinh(2.0 * r) * std::sinh(2.0 * r)).epsilon(1e-12));
    }
    SECTION("invariants preserved under local symplectics and reconstruction") {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 300; ++i) {
            const auto cm = testing::random_physical_cm(rng);
            Eigen::Matrix4d s = Eigen::Matrix4d::Identity();
            s.block<2, 2>(0, 0) = testing::random_local_symplectic(rng);
            s.block<2, 2>(2, 2) = testing::random_local_symplectic(rng);
            Eigen::Matrix4d sm = s * cm.m * s.transpose();
            const CovarianceMatrix4 conj(Eigen::Matrix4d(0.5 * (sm + sm.transpose())));
            const auto sf1 = standard_form(cm);
            const auto sf2 = standard_form(conj);
            CHECK(sf1.a == Approx(sf2.a).epsilon(1e-9));
            CHECK(sf1.b == Approx(sf2.b).epsilon(1e-9));
            CHECK(sf1.c_plus * sf1.c_minus == Approx(sf2.c_plus * sf2.c_minus).margin(1e-8));
            const auto rebuilt = from_standard_form(sf1);
            CHECK(rebuilt.block_a().determinant() ==
                  Approx(cm.block_a().determinant()).epsilon(1e-9));
            CHECK(rebuilt.block_b().determinant() ==
                  Approx(cm.block_b().determinant()).epsilon(1e-9));
            CHECK(rebuilt.block_c().determinant() ==
                  Approx(cm.block_c().determinant()).margin(1e-8));
            CHECK(rebuilt.m.determinant() == Approx(cm.m.determinant()).epsilon(1e-8));
        }
    }
    SECTION("non-physical rejected") {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity() * 0.3;
        CHECK_THROWS_AS(standard_form(CovarianceMatrix4(m)), std::invalid_argument);
    }
}

TEST_CASE("symplectic eigenvalues") {
    SECTION("identity and thermal product") {
        auto [np, nm] = symplectic_eigenvalues(CovarianceMatrix4{});
        CHECK(np == Approx(1.0).epsilon(1e-14));
        CHECK(nm == Approx(1.0).epsilon(1e-14));
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m(0, 0) = m(1, 1) = 3.0;
        m(2, 2) = m(3, 3) = 2.0;
        auto [tp, tm] = symplectic_eigenvalues(CovarianceMatrix4(m));
        CHECK(tp == Approx(3.0).epsilon(1e-13));
        CHECK(tm == Approx(2.0).epsilon(1e-13));
    }
    SECTION("TMSV is pure for any squeezing") {
        for (double r : {0.1, 0.5, 1.0, 1.5}) {
            auto [np, nm] = symplectic_eigenvalues(testing::tmsv(r));
            CHECK(np == Approx(1.0).margin(1e-7));
            CHECK(nm == Approx(1.0).margin(1e-7));
        }
    }
    SECTION("matches |eig(i Omega CM)| on random CMs") {
        std::mt19937_64 rng(13);
        const Eigen::Matrix4d omega = symplectic_form();
        for (int i = 0; i < 300; ++i) {
            const auto cm = testing::random_physical_cm(rng);
            const auto [np, nm] = symplectic_eigenvalues(cm);
            const Eigen::Matrix4cd ioc =
                complexd(0.0, 1.0) * omega.cast<complexd>() * cm.m.cast<complexd>();
            Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(ioc);
            std::vector<double> mags;
            for (int k = 0; k < 4; ++k) mags.push_back(std::abs(es.eigenvalues()(k)));
            std::sort(mags.begin(), mags.end());
            CHECK(nm == Approx(mags[0]).epsilon(1e-10));
            CHECK(nm == Approx(mags[1]).epsilon(1e-10));
            CHECK(np == Approx(mags[2]).epsilon(1e-10));
            CHECK(np == Approx(mags[3]).epsilon(1e-10));
        }
    }
}

TEST_CASE("entropy function f") {
    CHECK(entropy_f(1.0) == 0.0);
    CHECK_THROWS_AS(entropy_f(0.9), std::domain_error);
    double prev = 0.0;
    for (double x = 1.0; x <= 8.0; x += 0.05) {
        const double v = entropy_f(x);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
}

TEST_CASE("Gaussian discord closed form") {
    SECTION("vacuum and product states carry no discord") {
        CHECK(gaussian_discord(CovarianceMatrix4{}).discord == Approx(0.0).margin(1e-12));
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m(0, 0) = m(1, 1) = 2.4;
        m(2, 2) = m(3, 3) = 1.7;
        const auto res = gaussian_discord(CovarianceMatrix4(m));
        CHECK(res.discord == Approx(0.0).margin(1e-12));
        CHECK(res.i3 == Approx(0.0).margin(1e-14));
    }
    SECTION("noisy TMSV mixtures match the numeric oracle") {
        const auto base = testing::tmsv(0.6);
        for (double t : {0.2, 0.5, 0.8}) {
            Eigen::Matrix4d m =
                Eigen::Matrix4d::Identity() + t * (base.m - Eigen::Matrix4d::Identity());
            const CovarianceMatrix4 cm(m);
            const double closed = gaussian_discord(cm).discord;
            const double oracle = discord_numeric_oracle(cm, 64);
            CHECK(closed == Approx(oracle).margin(1e-5));
            CHECK(closed > 0.0);
        }
    }
    SECTION("result fields are consistent") {
        const auto cm = testing::tmsv(0.4);
        const auto res = gaussian_discord(cm);
        CHECK(res.nu_plus >= res.nu_minus);
        CHECK(res.nu_minus >= 1.0 - 1e-9);
        CHECK(res.i1 == Approx(cm.block_a().determinant()).epsilon(1e-12));
        CHECK(res.i4 == Approx(cm.m.determinant()).epsilon(1e-10));
        CHECK(res.duan_value == Approx(duan_criterion(cm)).epsilon(1e-12));
    }
}

TEST_CASE("discord oracle baselines") {
    CHECK(discord_numeric_oracle(CovarianceMatrix4{}, 32) == Approx(0.0).margin(1e-12));
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 0) = m(1, 1) = 3.0;
    m(2, 2) = m(3, 3) = 2.0;
    CHECK(discord_numeric_oracle(CovarianceMatrix4(m), 32) == Approx(0.0).margin(1e-10));
    CHECK_THROWS_AS(discord_numeric_oracle(CovarianceMatrix4{}, 16), std::invalid_argument);
}

TEST_CASE("closed form vs oracle over random physical CMs") {
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int checked = 0; checked < 120; ++checked) {
        const auto cm = testing::random_physical_cm(rng);
        const double closed = gaussian_discord(cm).discord;
        const double oracle = discord_numeric_oracle(cm, 96);
        worst = std::max(worst, std::abs(closed - oracle));
        CHECK(closed == Approx(oracle).margin(1e-5));
    }
    INFO("worst closed-vs-oracle gap " << worst);
}

TEST_CASE("discord on the frozen model fixture matches the oracle") {
    SystemParams p;
    p.delta0 = 0.0;
    p.gamma0 = 1.0;
    p.gamma_c = 2.454545454545454;  // 0.45 * gamma12
    p.control_rabi = 10.0;
    p.gamma13 = 100.0;
    p.n_exc = 1.0;
    p.eta_read = 0.5;
    const auto cm = cm_at_analysis_frequency(p);
    const double closed = gaussian_discord(cm).discord;
    const double oracle = discord_numeric_oracle(cm, 128);
    CHECK(closed == Approx(oracle).margin(1e-5));
    CHECK(closed > 0.0);
}

TEST_CASE("discord properties") {
    std::mt19937_64 rng(19);
    SECTION("nonnegative, zero iff uncorrelated blocks") {
        for (int i = 0; i < 200; ++i) {
            const auto cm = testing::random_physical_cm(rng);
            const auto res = gaussian_discord(cm);
            CHECK(res.discord >= -1e-9);
            if (std::abs(res.i3) > 1e-2) CHECK(res.discord > 1e-9);
        }
    }
    SECTION("invariant under local symplectic conjugation") {
        for (int i = 0; i < 100; ++i) {
            const auto cm = testing::random_physical_cm(rng);
            Eigen::Matrix4d s = Eigen::Matrix4d::Identity();
            s.block<2, 2>(0, 0) = testing::random_local_symplectic(rng);
            s.block<2, 2>(2, 2) = testing::random_local_symplectic(rng);
            Eigen::Matrix4d m = s * cm.m * s.transpose();
            const CovarianceMatrix4 conj(Eigen::Matrix4d(0.5 * (m + m.transpose())));
            CHECK(gaussian_discord(cm).discord ==
                  Approx(gaussian_discord(conj).discord).margin(1e-8));
        }
    }
    SECTION("measurement side symmetric for a symmetric state") {
        const auto cm = testing::tmsv(0.5);
        CHECK(gaussian_discord(cm, MeasuredMode::Channel1).discord ==
              Approx(gaussian_discord(cm, MeasuredMode::Channel2).discord).epsilon(1e-12));
    }
}

TEST_CASE("Duan criterion") {
    CHECK(duan_criterion(CovarianceMatrix4{}) == Approx(1.0).epsilon(1e-15));
    CHECK(duan_criterion(testing::tmsv(1.0)) == Approx(std::exp(-2.0)).epsilon(1e-12));
    for (double gc : {0.5, 1.5, 3.0}) {
        for (double n : {0.0, 0.5, 2.0}) {
            SystemParams p;
            p.gamma_c = gc;
            p.n_exc = n;
            CHECK(duan_criterion(cm_at_analysis_frequency(p)) >= 1.0 - 1e-12);
        }
    }
}
