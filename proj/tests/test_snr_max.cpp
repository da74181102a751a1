#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "afsec/snr_max.hpp"

using namespace afsec;

namespace {

NetworkInstance unit_instance(std::size_t m, std::size_t k, double ps = 1.0,
                              double pi = 10.0, double sigma2 = 1.0) {
    NetworkInstance inst;
    inst.source_to_relay.assign(m, cdouble{1.0, 0.0});
    inst.relay_to_dest.assign(m, cdouble{1.0, 0.0});
    inst.relay_to_eve.assign(k, cvector(m, cdouble{1.0, 0.0}));
    inst.power = PowerConfig::uniform(ps, m, pi, sigma2);
    return inst;
}

NetworkInstance random_instance(std::size_t m, std::size_t k, std::uint64_t seed,
                                double ps = 1.0) {
    return sample_instance(m, k, PowerConfig::uniform(ps, m, 10.0, 1.0), seed);
}

cvector random_u(std::size_t m, GaussianSampler& rng, double target_norm) {
    cvector u(m);
    for (auto& z : u) z = rng.complex_normal();
    const double n = norm(u);
    for (auto& z : u) z *= target_norm / n;
    return u;
}

// beta_i = omega_i / h_{i,d} for a point inside the ball
ScalingVector beta_from_u(const NetworkInstance& inst, const cvector& u) {
    const cvector omega = inverse_transform(u);
    ScalingVector s;
    s.beta.resize(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        s.beta[i] = omega[i] / inst.relay_to_dest[i];
    }
    return s;
}

}  // namespace

TEST_CASE("ball transform basics") {
    CHECK(norm(forward_transform({cdouble{}, cdouble{}})) == 0.0);

    const cvector u = forward_transform({cdouble{1.0, 0.0}, cdouble{}});
    CHECK(u[0].real() == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(abs2(u[1]) == 0.0);

    // the image approaches the unit sphere along any fixed direction
    const cvector big = forward_transform({cdouble{1e6, 0.0}});
    CHECK(norm(big) > 1.0 - 1e-11);
    CHECK(norm(big) < 1.0);

    const cvector w = inverse_transform({cdouble{1.0 / std::sqrt(2.0), 0.0}});
    CHECK(w[0].real() == Catch::Approx(1.0).epsilon(1e-12));

    CHECK(norm(inverse_transform({cdouble{}})) == 0.0);
    CHECK_THROWS_AS(inverse_transform({cdouble{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(inverse_transform({cdouble{0.8, 0.0}, cdouble{0.0, 0.8}}),
                    std::invalid_argument);
}

TEST_CASE("ball transform round trips") {
    GaussianSampler rng(101);
    for (int rep = 0; rep < 200; ++rep) {
        cvector omega(3);
        for (auto& z : omega) z = 5.0 * rng.complex_normal();
        const cvector back = inverse_transform(forward_transform(omega));
        double err = 0.0;
        for (std::size_t i = 0; i < omega.size(); ++i) err += abs2(back[i] - omega[i]);
        CHECK(std::sqrt(err) <= 1e-10 * std::max(1.0, norm(omega)));
    }
    for (int rep = 0; rep < 50; ++rep) {
        const cvector u = random_u(4, rng, 0.999);
        const cvector back = forward_transform(inverse_transform(u));
        double err = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) err += abs2(back[i] - u[i]);
        CHECK(std::sqrt(err) < 1e-10);
    }
}

TEST_CASE("constraint system construction") {
    SECTION("scalar with matched eavesdropper") {
        // rho = 1, gamma' = 0.5: C = 1/0.5 + 1 - 1 = 2
        const auto inst = unit_instance(1, 1, 1.0, 10.0, 1.0);
        const auto sys = build_snr_max(inst, Thresholds{0.01, {0.5}});
        REQUIRE(sys.eve_mats.size() == 1);
        CHECK(sys.eve_mats[0](0, 0).real() == Catch::Approx(2.0));
        CHECK(sys.convex_case[0]);
    }
    SECTION("scalar indefinite case") {
        // rho = 2, gamma' = 4: C = 4/4 + 1 - 4 = -2
        auto inst = unit_instance(1, 1, 1.0, 10.0, 1.0);
        inst.relay_to_eve[0][0] = 2.0;
        const auto sys = build_snr_max(inst, Thresholds{0.01, {4.0}});
        CHECK(sys.eve_mats[0](0, 0).real() == Catch::Approx(-2.0));
        CHECK_FALSE(sys.convex_case[0]);
        CHECK_FALSE(report_convexity(sys));
    }
    SECTION("cap rows add the inverse term on their own slot") {
        // beta_max^2 = 1 via P_i = 2, so D_1 = diag(2, 1), D_2 = diag(1, 2)
        auto inst = unit_instance(2, 0, 1.0, 2.0, 1.0);
        const auto caps = beta_max_squared(inst);
        CHECK(caps[0] == Catch::Approx(1.0));
        const auto sys = build_snr_max(inst, Thresholds{0.01, {}});
        REQUIRE(sys.cap_mats.size() == 2);
        CHECK(sys.cap_mats[0](0, 0).real() == Catch::Approx(2.0));
        CHECK(sys.cap_mats[0](1, 1).real() == Catch::Approx(1.0));
        CHECK(sys.cap_mats[1](0, 0).real() == Catch::Approx(1.0));
        CHECK(sys.cap_mats[1](1, 1).real() == Catch::Approx(2.0));
    }
    SECTION("zero destination gain is degenerate") {
        auto inst = unit_instance(2, 1);
        inst.relay_to_dest[1] = 0.0;
        CHECK_THROWS_AS(build_snr_max(inst, Thresholds{0.01, {1.0}}),
                        DegenerateChannelError);
    }
    SECTION("powerless relays are excluded") {
        auto inst = unit_instance(3, 1);
        inst.power.relay_power_caps[1] = 0.0;
        inst.relay_to_dest[1] = 0.0;  // irrelevant once excluded
        const auto sys = build_snr_max(inst, Thresholds{0.01, {1.0}});
        CHECK(sys.active_relays == std::vector<std::size_t>{0, 2});
        CHECK(sys.excluded_relays == std::vector<std::size_t>{1});
        CHECK(sys.eve_mats[0].dim() == 2);
    }
}

TEST_CASE("convexity report follows the gain-ratio test") {
    // |h_e| <= |h_d| everywhere implies every eavesdropper matrix is PSD
    for (std::uint64_t seed : {201, 202, 203, 204, 205, 206, 207, 208}) {
        auto inst = random_instance(3, 2, seed);
        bool all_small = true;
        for (std::size_t k = 0; k < 2; ++k) {
            for (std::size_t i = 0; i < 3; ++i) {
                if (std::abs(inst.relay_to_eve[k][i]) > std::abs(inst.relay_to_dest[i])) {
                    all_small = false;
                }
            }
        }
        const auto sys = build_snr_max(inst, Thresholds{0.01, {0.3, 0.7}});
        if (all_small) CHECK(report_convexity(sys));
    }
    // forced case: scale each eavesdropper gain to half the destination gain
    auto inst = random_instance(3, 1, 301);
    for (std::size_t i = 0; i < 3; ++i) {
        const double target = 0.5 * std::abs(inst.relay_to_dest[i]);
        inst.relay_to_eve[0][i] *= target / std::abs(inst.relay_to_eve[0][i]);
    }
    CHECK(report_convexity(build_snr_max(inst, Thresholds{0.01, {0.4}})));
}

TEST_CASE("transformed objective and constraints match the channel formulas") {
    GaussianSampler rng(121);
    for (std::uint64_t seed : {401, 402, 403}) {
        const auto inst = random_instance(3, 2, seed, 1.6);
        const Thresholds th{0.01, {0.2, 0.9}};
        const auto sys = build_snr_max(inst, th);
        const auto obj = HermitianMatrix::outer(sys.objective_vec);
        const double snr_scale = inst.power.source_power / inst.power.noise_variance;
        for (int rep = 0; rep < 60; ++rep) {
            const cvector u = random_u(3, rng, 0.05 + 0.9 * rng.uniform01());
            const auto s = beta_from_u(inst, u);

            // objective consistency
            const double from_u = obj.quad_form(u) * snr_scale;
            const double direct = snr(inst, s, ReceiverId::destination());
            CHECK(from_u == Catch::Approx(direct).epsilon(1e-9));

            // bidirectional constraint equivalence away from the boundary
            for (std::size_t k = 0; k < 2; ++k) {
                const double q = sys.eve_mats[k].quad_form(u);
                const double se = snr(inst, s, ReceiverId::eavesdropper(k));
                if (std::abs(q - 1.0) > 1e-9) {
                    CHECK((q <= 1.0) == (se <= th.gamma_e[k]));
                }
            }
            for (std::size_t i = 0; i < 3; ++i) {
                const double q = sys.cap_mats[i].quad_form(u);
                const double cap_ratio = abs2(s.beta[i]) / sys.cap_squared[i];
                if (std::abs(q - 1.0) > 1e-9) {
                    CHECK((q <= 1.0) == (cap_ratio <= 1.0));
                }
            }
        }
    }
}

TEST_CASE("scalar closed form with a binding eavesdropper") {
    // unit gains, P_s = sigma^2 = 1, P_1 = 10, gamma_e = 0.25: the
    // eavesdropper cap binds at |beta|^2 = 1/3 and SNR_d = 0.25
    const auto inst = unit_instance(1, 1, 1.0, 10.0, 1.0);
    const auto sol = solve_snr_max(inst, Thresholds{0.01, {0.25}});
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(abs2(sol.beta.beta[0]) == Catch::Approx(1.0 / 3.0).margin(1e-6));
    CHECK(sol.snr_destination == Catch::Approx(0.25).margin(1e-6));
    CHECK(sol.snr_eavesdroppers[0] <= 0.25 * (1.0 + 1e-6));
    CHECK(sol.rank1_gap < 1e-6);
}

TEST_CASE("without eavesdroppers the power cap binds") {
    const auto inst = unit_instance(1, 0, 1.0, 10.0, 1.0);
    const double cap = beta_max_squared(inst)[0];
    const auto sol = solve_snr_max(inst, Thresholds{0.01, {}});
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(abs2(sol.beta.beta[0]) == Catch::Approx(cap).epsilon(1e-5));
    CHECK(sol.snr_destination == Catch::Approx(cap / (1.0 + cap)).epsilon(1e-5));
}

TEST_CASE("all relays powerless yields the silent solution") {
    auto inst = unit_instance(2, 1, 1.0, 0.0, 1.0);
    const auto sol = solve_snr_max(inst, Thresholds{0.01, {0.5}});
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(norm(sol.beta.beta) == 0.0);
    CHECK(sol.snr_destination == 0.0);
    CHECK(sol.secrecy_rate == 0.0);
}

TEST_CASE("solution respects every constraint on random instances") {
    for (std::uint64_t seed : {501, 502, 503, 504, 505, 506}) {
        const auto inst = random_instance(4, 3, seed, 2.0);
        const Thresholds th{0.01, {0.05, 0.2, 0.8}};
        const auto sol = solve_snr_max(inst, th);
        REQUIRE(sol.status == SolveStatus::Optimal);
        const auto caps = beta_max_squared(inst);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(abs2(sol.beta.beta[i]) <= caps[i] * (1.0 + 1e-6));
        }
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(sol.snr_eavesdroppers[k] <= th.gamma_e[k] * (1.0 + 1e-6));
        }
        // the relaxation bounds the achieved value
        CHECK(sol.snr_destination <= sol.sdr_snr_bound * (1.0 + 1e-6) + 1e-9);
        CHECK(sol.secrecy_rate ==
              Catch::Approx(threshold_secrecy_rate(sol.snr_destination, th.gamma_d)));
    }
}

TEST_CASE("widening eavesdropper thresholds never lowers the relaxation bound") {
    for (std::uint64_t seed : {601, 602, 603}) {
        const auto inst = random_instance(3, 2, seed);
        double prev = -1.0;
        for (double ge : {0.005, 0.01, 0.05, 0.2}) {
            const auto sol = solve_snr_max(inst, Thresholds{0.01, {ge, ge}});
            REQUIRE(sol.status == SolveStatus::Optimal);
            CHECK(sol.sdr_snr_bound >= prev - 1e-6 * std::max(1.0, std::abs(prev)));
            prev = sol.sdr_snr_bound;
        }
    }
}
