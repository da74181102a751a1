#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <sstream>

#include "afsec/json_io.hpp"
#include "afsec/rng.hpp"
#include "afsec/sdp.hpp"

using namespace afsec;

namespace {

bool bit_identical(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            const cdouble x = a(i, j), y = b(i, j);
            if (std::memcmp(&x, &y, sizeof(x)) != 0) return false;
        }
    }
    return true;
}

// exact value equality (tolerates the +0/-0 storage difference that the
// symmetrizing constructor introduces on mirrored entries)
bool exactly_equal(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (a(i, j) != b(i, j)) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("scalar minimization against a floor") {
    // minimize I•X subject to I•X >= 1: X = [1]
    SDPProblem p;
    p.sense = Sense::Minimize;
    p.objective = HermitianMatrix::identity(1);
    p.constraints.push_back({HermitianMatrix::identity(1), Relation::GreaterEq, 1.0});
    const auto sol = solve_sdp(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective_value == Catch::Approx(1.0).margin(1e-6));
    CHECK(sol.X(0, 0).real() == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("trace-capped maximization picks the top eigenvector") {
    // maximize diag(1,0)•X subject to I•X <= 1: objective 1, X = e1 e1†
    SDPProblem p;
    p.sense = Sense::Maximize;
    p.objective = HermitianMatrix::diagonal({1.0, 0.0});
    p.constraints.push_back({HermitianMatrix::identity(2), Relation::LessEq, 1.0});
    const auto sol = solve_sdp(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective_value == Catch::Approx(1.0).margin(1e-6));
    CHECK(sol.X(0, 0).real() == Catch::Approx(1.0).margin(1e-5));
    CHECK(std::abs(sol.X(1, 1)) < 1e-5);
}

TEST_CASE("complex data round-trips through the embedding") {
    // under a trace cap the optimum is the top eigenvalue of the objective,
    // attained at the projector onto its eigenvector
    HermitianMatrix C(2);
    C.set(0, 0, 1.0);
    C.set(1, 1, 0.5);
    C.set(0, 1, cdouble{0.3, 0.4});
    SDPProblem p;
    p.sense = Sense::Maximize;
    p.objective = C;
    p.constraints.push_back({HermitianMatrix::identity(2), Relation::LessEq, 1.0});
    const auto sol = solve_sdp(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const double top = hermitian_eig(C).eigenvalues.front();
    CHECK(sol.objective_value == Catch::Approx(top).margin(1e-6));
    CHECK(sol.eigenvalue_floor > -1e-9);
}

TEST_CASE("infeasible constraints are detected") {
    // I•X >= 1 and I•X <= 0.5 cannot both hold
    SDPProblem p;
    p.sense = Sense::Minimize;
    p.objective = HermitianMatrix::identity(2);
    p.constraints.push_back({HermitianMatrix::identity(2), Relation::GreaterEq, 1.0});
    p.constraints.push_back({HermitianMatrix::identity(2), Relation::LessEq, 0.5});
    const auto sol = solve_sdp(p);
    CHECK(sol.status == SolveStatus::Infeasible);
}

TEST_CASE("equality constraints hold at the solution") {
    SDPProblem p;
    p.sense = Sense::Minimize;
    p.objective = HermitianMatrix::diagonal({1.0, 2.0});
    p.constraints.push_back({HermitianMatrix::identity(2), Relation::Equal, 1.0});
    const auto sol = solve_sdp(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.X.trace() == Catch::Approx(1.0).margin(1e-6));
    CHECK(sol.objective_value == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("solver output is invariant under constraint row scaling") {
    HermitianMatrix C(2);
    C.set(0, 0, 2.0);
    C.set(1, 1, 1.0);
    C.set(0, 1, cdouble{0.5, -0.25});
    SDPProblem p;
    p.sense = Sense::Maximize;
    p.objective = C;
    p.constraints.push_back({HermitianMatrix::identity(2), Relation::LessEq, 1.0});
    p.constraints.push_back(
        {HermitianMatrix::diagonal({1.0, 3.0}), Relation::LessEq, 2.0});
    const auto base = solve_sdp(p);
    REQUIRE(base.status == SolveStatus::Optimal);
    for (double c : {1e-3, 7.0, 1e4}) {
        SDPProblem scaled = p;
        scaled.constraints[1].lhs *= c;
        scaled.constraints[1].rhs *= c;
        const auto sol = solve_sdp(scaled);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective_value ==
              Catch::Approx(base.objective_value).epsilon(1e-6));
    }
}

TEST_CASE("deterministic resolves") {
    HermitianMatrix C(3);
    C.set(0, 0, 1.0);
    C.set(1, 1, -0.5);
    C.set(2, 2, 0.25);
    C.set(0, 1, cdouble{0.1, 0.7});
    C.set(0, 2, cdouble{-0.3, 0.2});
    SDPProblem p;
    p.sense = Sense::Maximize;
    p.objective = C;
    p.constraints.push_back({HermitianMatrix::identity(3), Relation::LessEq, 2.0});
    p.constraints.push_back(
        {HermitianMatrix::diagonal({1.0, 0.0, 0.0}), Relation::LessEq, 0.5});
    const auto a = solve_sdp(p);
    const auto b = solve_sdp(p);
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.iterations == b.iterations);
    CHECK(bit_identical(a.X, b.X));
}

TEST_CASE("rank-one extraction") {
    GaussianSampler rng(23);
    SECTION("pure rank-one input") {
        cvector w(3);
        for (auto& z : w) z = rng.complex_normal();
        const auto X = HermitianMatrix::outer(w);
        const auto ext = extract_rank1(X);
        CHECK(ext.gap == Catch::Approx(0.0).margin(1e-12));
        CHECK(std::abs(inner(ext.factor, w)) ==
              Catch::Approx(norm(w) * norm(ext.factor)).epsilon(1e-10));
        CHECK(norm(ext.factor) == Catch::Approx(norm(w)).epsilon(1e-10));
        // gap 0 means X equals the outer product of the factor
        const auto R = HermitianMatrix::outer(ext.factor);
        CHECK((X - R).frobenius_norm() < 1e-9 * std::max(1.0, X.frobenius_norm()));
    }
    SECTION("identity has half its mass outside the head") {
        const auto ext = extract_rank1(HermitianMatrix::identity(2));
        CHECK(ext.gap == Catch::Approx(0.5).margin(1e-12));
    }
    SECTION("zero matrix signals a zero solution") {
        const auto ext = extract_rank1(HermitianMatrix(3));
        CHECK(norm(ext.factor) == 0.0);
        CHECK(ext.gap == 0.0);
    }
}

TEST_CASE("residual report") {
    SDPProblem p;
    p.sense = Sense::Minimize;
    p.objective = HermitianMatrix::identity(2);
    p.constraints.push_back({HermitianMatrix::identity(2), Relation::GreaterEq, 1.0});
    p.constraints.push_back(
        {HermitianMatrix::diagonal({1.0, 0.0}), Relation::LessEq, 2.0});

    SECTION("feasible point has no violations") {
        const auto X = HermitianMatrix::diagonal({0.75, 0.75});
        const auto rep = residual_report(p, X);
        CHECK(rep.max_scaled_violation == 0.0);
        CHECK(rep.constraints[0].slack == Catch::Approx(0.5));
        CHECK(rep.lambda_min == Catch::Approx(0.75).margin(1e-12));
    }
    SECTION("zero point violates the floor by one") {
        const auto rep = residual_report(p, HermitianMatrix(2));
        CHECK(rep.constraints[0].violation == Catch::Approx(1.0));
        CHECK(rep.max_scaled_violation == Catch::Approx(1.0));
    }
    SECTION("random PSD stays PSD") {
        GaussianSampler rng(29);
        cvector w(2);
        for (auto& z : w) z = rng.complex_normal();
        const auto rep = residual_report(p, HermitianMatrix::outer(w));
        CHECK(rep.lambda_min >= -1e-12);
    }
}

TEST_CASE("weak duality against feasible rank-one points") {
    // maximize C•X over C_j•X <= 1: any feasible uu† is outvalued by the solver
    GaussianSampler rng(31);
    HermitianMatrix C(3);
    C.set(0, 0, 1.0);
    C.set(1, 1, 0.3);
    C.set(0, 1, cdouble{0.2, -0.6});
    SDPProblem p;
    p.sense = Sense::Maximize;
    p.objective = C;
    p.constraints.push_back({HermitianMatrix::identity(3), Relation::LessEq, 1.0});
    p.constraints.push_back(
        {HermitianMatrix::diagonal({2.0, 1.0, 0.5}), Relation::LessEq, 1.0});
    const auto sol = solve_sdp(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    for (int rep = 0; rep < 100; ++rep) {
        cvector u(3);
        for (auto& z : u) z = rng.complex_normal();
        // scale onto the tighter of the two constraint surfaces
        const auto U = HermitianMatrix::outer(u);
        const double scale = std::max(p.constraints[0].lhs.frobenius_inner(U),
                                      p.constraints[1].lhs.frobenius_inner(U));
        if (scale <= 0.0) continue;
        const double value = C.frobenius_inner(U) / scale;
        CHECK(value <= sol.objective_value + 1e-6 * std::max(1.0, sol.objective_value));
    }
}

TEST_CASE("problem dump and load round-trip") {
    HermitianMatrix C(2);
    C.set(0, 0, 1.25);
    C.set(0, 1, cdouble{-0.5, 2.0});
    SDPProblem p;
    p.sense = Sense::Maximize;
    p.objective = C;
    p.constraints.push_back({HermitianMatrix::identity(2), Relation::LessEq, 1.0});
    p.constraints.push_back({C, Relation::GreaterEq, -3.0});
    p.constraints.push_back(
        {HermitianMatrix::diagonal({0.0, 1.0}), Relation::Equal, 0.25});

    const auto j = sdp_problem_to_json(p);
    const auto q = sdp_problem_from_json(j);
    REQUIRE(q.constraints.size() == p.constraints.size());
    CHECK(q.sense == p.sense);
    CHECK(exactly_equal(q.objective, p.objective));
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        CHECK(exactly_equal(q.constraints[i].lhs, p.constraints[i].lhs));
        CHECK(q.constraints[i].rel == p.constraints[i].rel);
        CHECK(q.constraints[i].rhs == p.constraints[i].rhs);
    }
}
