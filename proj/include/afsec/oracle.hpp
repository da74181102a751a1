// Brute-force reference solvers on one- and two-relay instances, used to
// validate the relaxation pipelines. Magnitudes are gridded on [0, beta_max]
// per relay and the second relay's phase on [0, 2pi); the first relay's
// phase is pinned to zero since every receiver SNR is invariant under a
// global phase. Each refinement round shrinks the window around the
// incumbent tenfold.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "afsec/model.hpp"

namespace afsec {

struct SearchGrid {
    std::size_t magnitude_points = 60;
    std::size_t phase_points = 60;
    std::size_t refinement_rounds = 2;

    void validate() const {
        if (magnitude_points == 0 || phase_points == 0) {
            throw std::invalid_argument("SearchGrid: need at least one point per axis");
        }
    }
};

struct OracleSnrMaxResult {
    ScalingVector beta;
    double snr_destination = 0.0;
};

struct OraclePowerMinResult {
    ScalingVector beta;
    double total_power = std::numeric_limits<double>::infinity();
    bool feasible = false;
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> pts(count);
    if (count == 1) {
        pts[0] = lo;
        return pts;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t t = 0; t < count; ++t) pts[t] = lo + step * static_cast<double>(t);
    return pts;
}

struct OracleRanges {
    std::vector<std::vector<double>> magnitudes;  // per relay
    std::vector<double> phases;                   // second relay only
};

inline OracleRanges oracle_ranges(const std::vector<double>& caps,
                                  const SearchGrid& grid, std::size_t round,
                                  const std::vector<double>& center_mag,
                                  double center_phase) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    OracleRanges r;
    for (std::size_t i = 0; i < caps.size(); ++i) {
        if (round == 0) {
            r.magnitudes.push_back(linspace(0.0, caps[i], grid.magnitude_points));
        } else {
            const double half = 0.5 * caps[i] * std::pow(0.1, static_cast<double>(round));
            const double lo = std::clamp(center_mag[i] - half, 0.0, caps[i]);
            const double hi = std::clamp(center_mag[i] + half, 0.0, caps[i]);
            r.magnitudes.push_back(linspace(lo, hi, grid.magnitude_points));
        }
    }
    if (caps.size() == 2) {
        if (round == 0) {
            r.phases.resize(grid.phase_points);
            for (std::size_t t = 0; t < grid.phase_points; ++t) {
                r.phases[t] = kTwoPi * static_cast<double>(t) /
                              static_cast<double>(grid.phase_points);
            }
        } else {
            const double half = 0.5 * kTwoPi * std::pow(0.1, static_cast<double>(round));
            r.phases = linspace(center_phase - half, center_phase + half,
                                grid.phase_points);
        }
    } else {
        r.phases = {0.0};
    }
    return r;
}

}  // namespace detail

inline OracleSnrMaxResult brute_force_snr_max(const NetworkInstance& inst,
                                              const Thresholds& thresholds,
                                              const SearchGrid& grid = {}) {
    inst.validate();
    grid.validate();
    const std::size_t m = inst.relay_count();
    if (m > 2) throw std::invalid_argument("brute_force_snr_max: cost guard M <= 2");
    if (thresholds.gamma_e.size() != inst.eavesdropper_count()) {
        throw std::invalid_argument("brute_force_snr_max: threshold dimension mismatch");
    }

    std::vector<double> caps(m);
    {
        const auto caps_sq = beta_max_squared(inst);
        for (std::size_t i = 0; i < m; ++i) caps[i] = std::sqrt(caps_sq[i]);
    }

    OracleSnrMaxResult best;
    best.beta.beta.assign(m, cdouble{});
    best.snr_destination = 0.0;  // beta = 0 is always feasible
    std::vector<double> best_mag(m, 0.0);
    double best_phase = 0.0;

    ScalingVector cand;
    cand.beta.assign(m, cdouble{});
    const std::vector<double> single_relay{0.0};
    for (std::size_t round = 0; round <= grid.refinement_rounds; ++round) {
        const auto r = detail::oracle_ranges(caps, grid, round, best_mag, best_phase);
        const auto& mags2 = m == 2 ? r.magnitudes[1] : single_relay;
        for (double m1 : r.magnitudes[0]) {
            cand.beta[0] = m1;
            for (double phase : r.phases) {
                const cdouble rot{std::cos(phase), std::sin(phase)};
                for (double m2 : mags2) {
                    if (m == 2) cand.beta[1] = m2 * rot;
                    bool ok = true;
                    for (std::size_t k = 0; ok && k < inst.eavesdropper_count(); ++k) {
                        ok = snr(inst, cand, ReceiverId::eavesdropper(k)) <=
                             thresholds.gamma_e[k];
                    }
                    if (!ok) continue;
                    const double sd = snr(inst, cand, ReceiverId::destination());
                    if (sd > best.snr_destination) {
                        best.snr_destination = sd;
                        best.beta = cand;
                        best_mag[0] = m1;
                        if (m == 2) {
                            best_mag[1] = m2;
                            best_phase = phase;
                        }
                    }
                }
            }
        }
    }
    return best;
}

inline OraclePowerMinResult brute_force_power_min(const NetworkInstance& inst,
                                                  const Thresholds& thresholds,
                                                  const SearchGrid& grid = {}) {
    inst.validate();
    grid.validate();
    const std::size_t m = inst.relay_count();
    if (m > 2) throw std::invalid_argument("brute_force_power_min: cost guard M <= 2");
    if (thresholds.gamma_e.size() != inst.eavesdropper_count()) {
        throw std::invalid_argument("brute_force_power_min: threshold dimension mismatch");
    }
    if (!(thresholds.gamma_d > 0.0)) {
        throw std::invalid_argument("brute_force_power_min: destination threshold must be > 0");
    }

    std::vector<double> caps(m);
    {
        const auto caps_sq = beta_max_squared(inst);
        for (std::size_t i = 0; i < m; ++i) caps[i] = std::sqrt(caps_sq[i]);
    }

    OraclePowerMinResult best;
    best.beta.beta.assign(m, cdouble{});
    std::vector<double> best_mag(m, 0.0);
    double best_phase = 0.0;
    // centering fallback while nothing is feasible: least-violating point
    double least_violation = std::numeric_limits<double>::infinity();

    ScalingVector cand;
    cand.beta.assign(m, cdouble{});
    const std::vector<double> single_relay{0.0};
    for (std::size_t round = 0; round <= grid.refinement_rounds; ++round) {
        const auto r = detail::oracle_ranges(caps, grid, round, best_mag, best_phase);
        const auto& mags2 = m == 2 ? r.magnitudes[1] : single_relay;
        for (double m1 : r.magnitudes[0]) {
            cand.beta[0] = m1;
            for (double phase : r.phases) {
                const cdouble rot{std::cos(phase), std::sin(phase)};
                for (double m2 : mags2) {
                    if (m == 2) cand.beta[1] = m2 * rot;
                    double violation =
                        std::max(0.0, 1.0 - snr(inst, cand, ReceiverId::destination()) /
                                                thresholds.gamma_d);
                    for (std::size_t k = 0; k < inst.eavesdropper_count(); ++k) {
                        violation = std::max(
                            violation, snr(inst, cand, ReceiverId::eavesdropper(k)) /
                                               thresholds.gamma_e[k] -
                                           1.0);
                    }
                    if (violation == 0.0) {
                        const double p = relay_power(inst, cand);
                        if (!best.feasible || p < best.total_power) {
                            best.feasible = true;
                            best.total_power = p;
                            best.beta = cand;
                            best_mag[0] = m1;
                            if (m == 2) {
                                best_mag[1] = m2;
                                best_phase = phase;
                            }
                        }
                    } else if (!best.feasible && violation < least_violation) {
                        least_violation = violation;
                        best_mag[0] = m1;
                        if (m == 2) {
                            best_mag[1] = m2;
                            best_phase = phase;
                        }
                    }
                }
            }
        }
    }
    if (!best.feasible) {
        best.beta.beta.assign(m, cdouble{});
        best.total_power = std::numeric_limits<double>::infinity();
    }
    return best;
}

}  // namespace afsec
