// Total relay-power minimization subject to a destination SNR floor,
// per-eavesdropper SNR caps and per-relay power caps ("solve-p2" in the CLI).
//
// In beta the problem is a QCQP: minimize beta†Q0 beta with quadratic rows
// Q_l = h_l h_l† - gamma'_l D_l; it is solved through the semidefinite
// relaxation B = beta beta†, and an analytical lower bound comes from the
// Rayleigh quotient of the (Q0, QD) pencil.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "afsec/model.hpp"
#include "afsec/rng.hpp"
#include "afsec/sdp.hpp"

namespace afsec {

class ThresholdUnreachableError : public std::runtime_error {
public:
    explicit ThresholdUnreachableError(const std::string& what)
        : std::runtime_error(what) {}
};

struct PowerMinSystem {
    HermitianMatrix power_mat;              // Q0, diagonal positive definite
    HermitianMatrix dest_mat;               // QD
    std::vector<HermitianMatrix> eve_mats;  // Qk
    double dest_threshold = 0.0;            // gamma'_d
    std::vector<double> eve_thresholds;     // gamma'_k
};

inline PowerMinSystem build_power_min(const NetworkInstance& inst,
                                      const Thresholds& thresholds) {
    inst.validate();
    const std::size_t kk = inst.eavesdropper_count();
    if (thresholds.gamma_e.size() != kk) {
        throw std::invalid_argument("build_power_min: one eavesdropper threshold per eavesdropper");
    }
    if (!(thresholds.gamma_d > 0.0)) {
        throw std::invalid_argument("build_power_min: destination threshold must be > 0");
    }
    for (double g : thresholds.gamma_e) {
        if (!(g > 0.0)) {
            throw std::invalid_argument("build_power_min: thresholds must be > 0");
        }
    }

    const std::size_t m = inst.relay_count();
    PowerMinSystem sys;
    std::vector<double> q0(m);
    for (std::size_t i = 0; i < m; ++i) {
        q0[i] = abs2(inst.source_to_relay[i]) * inst.power.source_power +
                inst.power.noise_variance;
    }
    sys.power_mat = HermitianMatrix::diagonal(q0);

    auto quad = [&](ReceiverId l, double gamma_primed) {
        cvector h(m);
        const cvector e = effective_channel(inst, l);
        for (std::size_t i = 0; i < m; ++i) h[i] = std::conj(e[i]);
        HermitianMatrix Q = HermitianMatrix::outer(h);
        Q -= gamma_primed * HermitianMatrix::diagonal(channel_diag(inst, l));
        return Q;
    };
    sys.dest_threshold = thresholds.normalized_dest(inst.power);
    sys.dest_mat = quad(ReceiverId::destination(), sys.dest_threshold);
    for (std::size_t k = 0; k < kk; ++k) {
        sys.eve_thresholds.push_back(thresholds.normalized_eve(k, inst.power));
        sys.eve_mats.push_back(quad(ReceiverId::eavesdropper(k), sys.eve_thresholds[k]));
    }
    return sys;
}

struct ConstraintSlacks {
    double destination = 0.0;            // snr_d - gamma_d
    std::vector<double> eavesdroppers;   // gamma_k - snr_k
    std::vector<double> power_caps;      // beta_max^2 - |beta_i|^2
    double min_relative_slack = 0.0;     // most negative entry over its scale

    bool feasible(double rel_tol) const { return min_relative_slack >= -rel_tol; }
};

inline ConstraintSlacks check_feasibility(const NetworkInstance& inst,
                                          const ScalingVector& beta,
                                          const Thresholds& thresholds) {
    ConstraintSlacks out;
    double worst = std::numeric_limits<double>::infinity();
    out.destination = snr(inst, beta, ReceiverId::destination()) - thresholds.gamma_d;
    if (thresholds.gamma_d > 0.0) {
        worst = std::min(worst, out.destination / thresholds.gamma_d);
    }
    for (std::size_t k = 0; k < inst.eavesdropper_count(); ++k) {
        const double slack =
            thresholds.gamma_e[k] - snr(inst, beta, ReceiverId::eavesdropper(k));
        out.eavesdroppers.push_back(slack);
        worst = std::min(worst, slack / thresholds.gamma_e[k]);
    }
    const auto caps_sq = beta_max_squared(inst);
    for (std::size_t i = 0; i < inst.relay_count(); ++i) {
        const double slack = caps_sq[i] - abs2(beta.beta[i]);
        out.power_caps.push_back(slack);
        worst = std::min(worst, slack / std::max(caps_sq[i], 1e-300));
    }
    out.min_relative_slack = worst;
    return out;
}

struct AnalyticalBound {
    double power_bound = 0.0;  // gamma'_d * smallest positive pencil eigenvalue
    ScalingVector beta;        // scaled so beta†QD beta = gamma'_d
};

// Relaxation keeping only the destination constraint, met with equality; the
// optimum of minimize beta†Q0 beta / beta†QD beta over the positive branch is
// the reciprocal of the top eigenvalue of the reduced pencil. The result
// ignores eavesdropper rows and caps and lower-bounds every feasible power.
inline AnalyticalBound analytical_power_bound(const NetworkInstance& inst,
                                              const Thresholds& thresholds) {
    const PowerMinSystem sys = build_power_min(inst, thresholds);
    const auto pair = min_generalized_eig(sys.power_mat, sys.dest_mat);
    if (!pair) {
        throw ThresholdUnreachableError(
            "analytical_power_bound: no direction meets the destination constraint");
    }
    AnalyticalBound out;
    out.power_bound = sys.dest_threshold * pair->lambda;
    const double qd = sys.dest_mat.quad_form(pair->eigenvector);
    const double scale = std::sqrt(sys.dest_threshold / qd);
    out.beta.beta = pair->eigenvector;
    for (auto& z : out.beta.beta) z *= scale;
    return out;
}

enum class PowerMinStatus { Optimal, Infeasible, GapUnresolved };

struct PowerMinSolution {
    ScalingVector beta;
    double total_power = std::numeric_limits<double>::quiet_NaN();
    double sdr_objective = std::numeric_limits<double>::quiet_NaN();
    double lower_bound = std::numeric_limits<double>::quiet_NaN();
    double rank1_gap = 0.0;
    PowerMinStatus status = PowerMinStatus::GapUnresolved;
    ConstraintSlacks slacks;
    SolveStatus solver_status = SolveStatus::MaxIterations;
    bool randomized = false;  // recovery needed the sampling fallback
};

namespace detail {

// candidate scaled onto the destination-equality surface, or empty when the
// direction cannot meet the destination constraint
inline cvector rescale_to_dest(const HermitianMatrix& dest_mat, double dest_threshold,
                               const cvector& dir) {
    const double qd = dest_mat.quad_form(dir);
    if (!(qd > 0.0)) return {};
    const double scale = std::sqrt(dest_threshold / qd);
    cvector out(dir.size());
    for (std::size_t i = 0; i < dir.size(); ++i) out[i] = scale * dir[i];
    return out;
}

}  // namespace detail

inline PowerMinSolution solve_power_min(const NetworkInstance& inst,
                                        const Thresholds& thresholds,
                                        const SolverSettings& settings = {}) {
    const PowerMinSystem sys = build_power_min(inst, thresholds);
    const std::size_t m = inst.relay_count();
    const auto caps_sq = beta_max_squared(inst);

    PowerMinSolution sol;
    sol.beta.beta.assign(m, cdouble{});

    SDPProblem sdr;
    sdr.sense = Sense::Minimize;
    sdr.objective = sys.power_mat;
    sdr.constraints.push_back({sys.dest_mat, Relation::GreaterEq, sys.dest_threshold});
    for (std::size_t k = 0; k < sys.eve_mats.size(); ++k) {
        sdr.constraints.push_back(
            {sys.eve_mats[k], Relation::LessEq, sys.eve_thresholds[k]});
    }
    for (std::size_t i = 0; i < m; ++i) {
        HermitianMatrix e(m);
        e.set(i, i, 1.0);
        sdr.constraints.push_back({std::move(e), Relation::LessEq, caps_sq[i]});
    }

    const SDPSolution relaxed = solve_sdp(sdr, settings);
    sol.solver_status = relaxed.status;
    try {
        sol.lower_bound = analytical_power_bound(inst, thresholds).power_bound;
    } catch (const ThresholdUnreachableError&) {
        // destination unreachable even without the other rows
    } catch (const SingularPencilError&) {
        // pencil degenerate; the bound is simply unavailable
    }

    if (relaxed.status == SolveStatus::Infeasible) {
        sol.status = PowerMinStatus::Infeasible;
        sol.slacks = check_feasibility(inst, sol.beta, thresholds);
        return sol;
    }
    sol.sdr_objective = relaxed.objective_value;

    const auto extraction = extract_rank1(relaxed.X);
    sol.rank1_gap = extraction.gap;

    // principal-eigenvector candidate scaled so the destination row binds
    const double feas_tol = 1e-9;
    cvector best;
    double best_power = std::numeric_limits<double>::infinity();
    auto consider = [&](const cvector& cand) {
        if (cand.empty()) return false;
        ScalingVector s{cand};
        if (!check_feasibility(inst, s, thresholds).feasible(feas_tol)) return false;
        const double p = relay_power(inst, s);
        if (p < best_power) {
            best_power = p;
            best = cand;
        }
        return true;
    };

    cvector principal = detail::rescale_to_dest(sys.dest_mat, sys.dest_threshold,
                                                extraction.factor);
    consider(principal);

    if (best.empty()) {
        // Gaussian-randomization fallback: directions drawn from CN(0, B),
        // each rescaled onto the destination-equality surface. The draw
        // stream is fixed so repeated solves stay bit-identical.
        sol.randomized = true;
        const auto eig = hermitian_eig(relaxed.X);
        GaussianSampler rng(0x5afec0de);
        for (int trial = 0; trial < 200 && best.empty(); ++trial) {
            cvector dir(m, cdouble{});
            for (std::size_t j = 0; j < m; ++j) {
                const double lam = std::max(eig.eigenvalues[j], 0.0);
                if (lam == 0.0) {
                    rng.complex_normal();  // keep the stream aligned
                    continue;
                }
                const cdouble g = rng.complex_normal() * std::sqrt(lam);
                for (std::size_t i = 0; i < m; ++i) dir[i] += g * eig.eigenvectors[j][i];
            }
            consider(detail::rescale_to_dest(sys.dest_mat, sys.dest_threshold, dir));
        }
    }

    if (best.empty()) {
        sol.status = PowerMinStatus::GapUnresolved;
        // report the unrepaired principal candidate for diagnostics
        if (!principal.empty()) sol.beta.beta = principal;
        sol.slacks = check_feasibility(inst, sol.beta, thresholds);
        if (!sol.beta.beta.empty()) sol.total_power = relay_power(inst, sol.beta);
        return sol;
    }

    sol.beta.beta = std::move(best);
    sol.total_power = best_power;
    sol.slacks = check_feasibility(inst, sol.beta, thresholds);
    sol.status = relaxed.status == SolveStatus::Optimal ? PowerMinStatus::Optimal
                                                        : PowerMinStatus::GapUnresolved;
    return sol;
}

}  // namespace afsec
