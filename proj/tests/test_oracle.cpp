#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "afsec/oracle.hpp"
#include "afsec/power_min.hpp"
#include "afsec/snr_max.hpp"

using namespace afsec;

namespace {

NetworkInstance unit_instance(std::size_t m, std::size_t k) {
    NetworkInstance inst;
    inst.source_to_relay.assign(m, cdouble{1.0, 0.0});
    inst.relay_to_dest.assign(m, cdouble{1.0, 0.0});
    inst.relay_to_eve.assign(k, cvector(m, cdouble{1.0, 0.0}));
    inst.power = PowerConfig::uniform(1.0, m, 10.0, 1.0);
    return inst;
}

NetworkInstance random_instance(std::size_t m, std::size_t k, std::uint64_t seed) {
    return sample_instance(m, k, PowerConfig::uniform(1.0, m, 10.0, 1.0), seed);
}

}  // namespace

TEST_CASE("grid search recovers the scalar closed forms") {
    SECTION("snr maximization with a binding eavesdropper") {
        const auto inst = unit_instance(1, 1);
        const auto res = brute_force_snr_max(inst, Thresholds{0.01, {0.25}});
        // the answer lands within one final-round grid spacing of the optimum
        CHECK(abs2(res.beta.beta[0]) == Catch::Approx(1.0 / 3.0).epsilon(2e-3));
        CHECK(res.snr_destination == Catch::Approx(0.25).epsilon(2e-3));
    }
    SECTION("snr maximization without eavesdroppers saturates the cap") {
        const auto inst = unit_instance(1, 0);
        const double cap = std::sqrt(beta_max_squared(inst)[0]);
        const auto res = brute_force_snr_max(inst, Thresholds{0.01, {}});
        CHECK(std::abs(res.beta.beta[0]) == Catch::Approx(cap).epsilon(1e-9));
    }
    SECTION("power minimization closed form") {
        const auto inst = unit_instance(1, 0);
        const auto res = brute_force_power_min(inst, Thresholds{0.5, {}});
        REQUIRE(res.feasible);
        CHECK(res.total_power == Catch::Approx(2.0).epsilon(2e-3));
    }
    SECTION("contradictory thresholds are reported infeasible") {
        const auto inst = unit_instance(1, 1);
        const auto res = brute_force_power_min(inst, Thresholds{0.01, {0.005}});
        CHECK_FALSE(res.feasible);
    }
}

TEST_CASE("cost guard rejects more than two relays") {
    const auto inst = random_instance(3, 1, 5);
    CHECK_THROWS_AS(brute_force_snr_max(inst, Thresholds{0.01, {0.1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(brute_force_power_min(inst, Thresholds{0.01, {0.1}}),
                    std::invalid_argument);
}

TEST_CASE("oracle results are deterministic and refinement helps") {
    const auto inst = random_instance(2, 1, 77);
    const Thresholds th{0.01, {0.1}};
    const auto a = brute_force_snr_max(inst, th);
    const auto b = brute_force_snr_max(inst, th);
    CHECK(a.snr_destination == b.snr_destination);
    CHECK(a.beta.beta == b.beta.beta);

    for (std::size_t rounds = 0; rounds <= 2; ++rounds) {
        SearchGrid grid;
        grid.refinement_rounds = rounds;
        const auto res = brute_force_snr_max(inst, th, grid);
        if (rounds > 0) {
            SearchGrid prev_grid;
            prev_grid.refinement_rounds = rounds - 1;
            const auto prev = brute_force_snr_max(inst, th, prev_grid);
            CHECK(res.snr_destination >= prev.snr_destination);
        }
    }
}

TEST_CASE("oracle points satisfy the constraints they report") {
    for (std::uint64_t seed : {11, 12, 13, 14}) {
        const auto inst = random_instance(2, 1, seed);
        const Thresholds th{0.01, {0.1}};
        const auto p1 = brute_force_snr_max(inst, th);
        CHECK(snr(inst, p1.beta, ReceiverId::eavesdropper(0)) <= th.gamma_e[0]);
        const auto caps = beta_max_squared(inst);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(abs2(p1.beta.beta[i]) <= caps[i] * (1.0 + 1e-12));
        }

        const Thresholds th2{0.01, {0.05}};
        const auto p2 = brute_force_power_min(inst, th2);
        if (p2.feasible) {
            CHECK(check_feasibility(inst, p2.beta, th2).feasible(0.0));
        }
    }
}

TEST_CASE("two-relay oracle is dominated by the relaxation bound") {
    for (std::uint64_t seed : {21, 22, 23}) {
        const auto inst = random_instance(2, 1, seed);
        const Thresholds th{0.01, {0.1}};
        const auto oracle = brute_force_snr_max(inst, th);
        const auto sol = solve_snr_max(inst, th);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(oracle.snr_destination <= sol.sdr_snr_bound + 1e-6);
    }
}

TEST_CASE("two-relay power oracle dominates the analytical bound") {
    for (std::uint64_t seed : {31, 32, 33, 34, 35}) {
        const auto inst = random_instance(2, 1, seed);
        const Thresholds th{0.01, {0.05}};
        const auto oracle = brute_force_power_min(inst, th);
        if (!oracle.feasible) continue;
        const auto bound = analytical_power_bound(inst, th);
        CHECK(oracle.total_power >= bound.power_bound - 1e-9);
    }
}
