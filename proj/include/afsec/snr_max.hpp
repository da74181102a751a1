// Destination-SNR maximization subject to per-eavesdropper SNR caps and
// per-relay power caps ("solve-p1" in the CLI).
//
// The fractional objective is flattened by the change of variables
// omega_i = beta_i h_{i,d}, u = omega / sqrt(1 + omega†omega); in u the
// objective is |h_s†u|^2 and every constraint becomes a quadratic form
// u†Qu <= 1, which is solved through the semidefinite relaxation U = uu†.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "afsec/model.hpp"
#include "afsec/sdp.hpp"

namespace afsec {

// Quadratic-form system of the transformed problem, built over the relays
// that can transmit at all (cap > 0); powerless relays are excluded and
// reported, since their cap rows would need an infinite diagonal entry.
struct SnrMaxSystem {
    cvector objective_vec;                 // conj(h_{s,i}) over active relays
    std::vector<HermitianMatrix> eve_mats; // u†Cu <= 1 per eavesdropper
    std::vector<HermitianMatrix> cap_mats; // u†Du <= 1 per active relay
    std::vector<bool> convex_case;         // eve matrix PSD?
    std::vector<std::size_t> active_relays;
    std::vector<std::size_t> excluded_relays;
    cvector dest_gains;                    // h_{i,d} over active relays
    std::vector<double> cap_squared;       // beta_max^2 over active relays
    std::vector<double> gamma_primed;      // gamma_e * sigma^2 / P_s
    std::size_t full_relay_count = 0;
};

// u = omega / sqrt(1 + omega†omega), always inside the unit ball
inline cvector forward_transform(const cvector& omega) {
    const double scale = 1.0 / std::sqrt(1.0 + norm_squared(omega));
    cvector u(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) u[i] = omega[i] * scale;
    return u;
}

// omega = u / sqrt(1 - u†u), defined for ||u|| < 1
inline cvector inverse_transform(const cvector& u) {
    const double rest = 1.0 - norm_squared(u);
    if (!(rest > 0.0)) {
        throw std::invalid_argument("inverse_transform: ||u|| must be < 1");
    }
    const double scale = 1.0 / std::sqrt(rest);
    cvector omega(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) omega[i] = u[i] * scale;
    return omega;
}

inline SnrMaxSystem build_snr_max(const NetworkInstance& inst,
                                  const Thresholds& thresholds) {
    inst.validate();
    const std::size_t m = inst.relay_count();
    const std::size_t kk = inst.eavesdropper_count();
    if (thresholds.gamma_e.size() != kk) {
        throw std::invalid_argument("build_snr_max: one eavesdropper threshold per eavesdropper");
    }
    for (double g : thresholds.gamma_e) {
        if (!(g > 0.0)) {
            throw std::invalid_argument("build_snr_max: thresholds must be > 0");
        }
    }

    SnrMaxSystem sys;
    sys.full_relay_count = m;
    const auto caps_sq = beta_max_squared(inst);
    for (std::size_t i = 0; i < m; ++i) {
        if (caps_sq[i] > 0.0) {
            sys.active_relays.push_back(i);
        } else {
            sys.excluded_relays.push_back(i);
        }
    }
    const std::size_t na = sys.active_relays.size();
    for (std::size_t a = 0; a < na; ++a) {
        const std::size_t i = sys.active_relays[a];
        if (abs2(inst.relay_to_dest[i]) == 0.0) {
            throw DegenerateChannelError("build_snr_max: zero relay-to-destination gain");
        }
    }

    sys.objective_vec.resize(na);
    sys.dest_gains.resize(na);
    sys.cap_squared.resize(na);
    for (std::size_t a = 0; a < na; ++a) {
        const std::size_t i = sys.active_relays[a];
        sys.objective_vec[a] = std::conj(inst.source_to_relay[i]);
        sys.dest_gains[a] = inst.relay_to_dest[i];
        sys.cap_squared[a] = caps_sq[i];
    }

    // cap rows: identity plus 1/(|h_{i,d}|^2 beta_max_i^2) at the own slot
    for (std::size_t a = 0; a < na; ++a) {
        HermitianMatrix D = HermitianMatrix::identity(na);
        D.set(a, a, 1.0 + 1.0 / (abs2(sys.dest_gains[a]) * sys.cap_squared[a]));
        sys.cap_mats.push_back(std::move(D));
    }

    // eavesdropper rows: C = hh†/gamma' + I - diag(|rho|^2), rho_i = h_{i,k}/h_{i,d}
    sys.gamma_primed.resize(kk);
    for (std::size_t k = 0; k < kk; ++k) {
        sys.gamma_primed[k] = thresholds.normalized_eve(k, inst.power);
        cvector h_srho(na);
        std::vector<double> rho_sq(na);
        for (std::size_t a = 0; a < na; ++a) {
            const std::size_t i = sys.active_relays[a];
            const cdouble rho = inst.relay_to_eve[k][i] / inst.relay_to_dest[i];
            h_srho[a] = std::conj(inst.source_to_relay[i] * rho);
            rho_sq[a] = abs2(rho);
        }
        HermitianMatrix C = HermitianMatrix::outer(h_srho);
        C *= 1.0 / sys.gamma_primed[k];
        C += HermitianMatrix::identity(na);
        C -= HermitianMatrix::diagonal(rho_sq);
        sys.convex_case.push_back(is_psd(C));
        sys.eve_mats.push_back(std::move(C));
    }
    return sys;
}

inline bool report_convexity(const SnrMaxSystem& sys) {
    for (bool c : sys.convex_case) {
        if (!c) return false;
    }
    return true;
}

struct SnrMaxSolution {
    ScalingVector beta;                    // full length M
    double snr_destination = 0.0;          // achieved by beta
    std::vector<double> snr_eavesdroppers;
    double sdr_snr_bound = 0.0;            // relaxation optimum, SNR units
    double rank1_gap = 0.0;
    double secrecy_rate = 0.0;             // from snr_destination and gamma_d
    double shrink_factor = 1.0;            // 1 when no repair was needed
    SolveStatus status = SolveStatus::Optimal;
};

namespace detail {

// largest c in [0,1] keeping c*beta feasible, found by bisection; SNR and
// relay power are monotone in the scale, so the feasible region in c is an
// interval containing 0
inline double feasibility_shrink(const NetworkInstance& inst,
                                 const Thresholds& thresholds,
                                 const cvector& beta,
                                 const std::vector<double>& caps_sq) {
    auto ok = [&](double c) {
        ScalingVector s;
        s.beta.resize(beta.size());
        for (std::size_t i = 0; i < beta.size(); ++i) s.beta[i] = c * beta[i];
        for (std::size_t i = 0; i < beta.size(); ++i) {
            if (abs2(s.beta[i]) > caps_sq[i]) return false;
        }
        for (std::size_t k = 0; k < inst.eavesdropper_count(); ++k) {
            if (snr(inst, s, ReceiverId::eavesdropper(k)) > thresholds.gamma_e[k]) {
                return false;
            }
        }
        return true;
    };
    if (ok(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace detail

inline SnrMaxSolution solve_snr_max(const NetworkInstance& inst,
                                    const Thresholds& thresholds,
                                    const SolverSettings& settings = {}) {
    const SnrMaxSystem sys = build_snr_max(inst, thresholds);
    const std::size_t m = inst.relay_count();
    const std::size_t kk = inst.eavesdropper_count();
    const double snr_scale = inst.power.source_power / inst.power.noise_variance;

    SnrMaxSolution sol;
    sol.beta.beta.assign(m, cdouble{});
    sol.snr_eavesdroppers.assign(kk, 0.0);

    const std::size_t na = sys.active_relays.size();
    if (na == 0) {
        // nothing can transmit; the silent solution is optimal
        if (thresholds.gamma_d > 0.0) {
            sol.secrecy_rate = threshold_secrecy_rate(0.0, thresholds.gamma_d);
        }
        return sol;
    }

    SDPProblem sdr;
    sdr.sense = Sense::Maximize;
    sdr.objective = HermitianMatrix::outer(sys.objective_vec);
    for (const auto& C : sys.eve_mats) {
        sdr.constraints.push_back({C, Relation::LessEq, 1.0});
    }
    for (const auto& D : sys.cap_mats) {
        sdr.constraints.push_back({D, Relation::LessEq, 1.0});
    }

    const SDPSolution relaxed = solve_sdp(sdr, settings);
    if (relaxed.status == SolveStatus::Infeasible) {
        // u = 0 satisfies every row, so this cannot legitimately happen
        throw std::logic_error("solve_snr_max: relaxation reported infeasible");
    }
    sol.status = relaxed.status;
    sol.sdr_snr_bound = std::max(relaxed.objective_value, 0.0) * snr_scale;

    auto extraction = extract_rank1(relaxed.X);
    sol.rank1_gap = extraction.gap;
    cvector u = std::move(extraction.factor);

    // global phase such that the objective inner product is real positive
    const cdouble g = inner(sys.objective_vec, u);
    if (abs2(g) > 0.0) {
        const cdouble ph = g / std::sqrt(abs2(g));
        for (auto& zz : u) zz *= std::conj(ph);
    }
    // the cap rows force ||u|| < 1; clamp only against solver tolerance spill
    const double nu2 = norm_squared(u);
    if (nu2 >= 1.0 - 1e-12) {
        const double fix = std::sqrt((1.0 - 1e-12) / nu2);
        for (auto& zz : u) zz *= fix;
    }

    const cvector omega = inverse_transform(u);
    std::vector<double> caps_sq_full(m, 0.0);
    {
        const auto caps = beta_max_squared(inst);
        caps_sq_full = caps;
    }
    for (std::size_t a = 0; a < na; ++a) {
        sol.beta.beta[sys.active_relays[a]] = omega[a] / sys.dest_gains[a];
    }

    // relaxation gap can leave the recovered point slightly outside; repair
    // by uniform shrinking when any violation exceeds 1e-9 relative
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (caps_sq_full[i] > 0.0) {
            worst = std::max(worst, abs2(sol.beta.beta[i]) / caps_sq_full[i] - 1.0);
        }
    }
    for (std::size_t k = 0; k < kk; ++k) {
        const double se = snr(inst, sol.beta, ReceiverId::eavesdropper(k));
        worst = std::max(worst, se / thresholds.gamma_e[k] - 1.0);
    }
    if (worst > 1e-9) {
        sol.shrink_factor =
            detail::feasibility_shrink(inst, thresholds, sol.beta.beta, caps_sq_full);
        for (auto& zz : sol.beta.beta) zz *= sol.shrink_factor;
    }

    sol.snr_destination = snr(inst, sol.beta, ReceiverId::destination());
    for (std::size_t k = 0; k < kk; ++k) {
        sol.snr_eavesdroppers[k] = snr(inst, sol.beta, ReceiverId::eavesdropper(k));
    }
    if (thresholds.gamma_d > 0.0) {
        sol.secrecy_rate =
            threshold_secrecy_rate(sol.snr_destination, thresholds.gamma_d);
    }
    return sol;
}

}  // namespace afsec
