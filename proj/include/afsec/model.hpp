// Two-hop amplify-and-forward network model: channel gains, per-relay scaling
// caps, receiver SNR and relay power evaluation, rate formulas, random
// instance sampling and a signal-level Monte Carlo validator.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "afsec/numerics.hpp"
#include "afsec/rng.hpp"

namespace afsec {

struct PowerConfig {
    double source_power = 1.0;             // P_s
    std::vector<double> relay_power_caps;  // P_i, one per relay
    double noise_variance = 1.0;           // sigma^2

    static PowerConfig uniform(double source_power, std::size_t relays,
                               double relay_cap, double noise_variance) {
        return PowerConfig{source_power,
                           std::vector<double>(relays, relay_cap),
                           noise_variance};
    }

    void validate() const {
        if (!(source_power > 0.0)) {
            throw std::invalid_argument("PowerConfig: source power must be > 0");
        }
        if (!(noise_variance > 0.0)) {
            throw std::invalid_argument("PowerConfig: noise variance must be > 0");
        }
        for (double p : relay_power_caps) {
            if (!(p >= 0.0)) {
                throw std::invalid_argument("PowerConfig: relay caps must be >= 0");
            }
        }
    }
};

class DegenerateChannelError : public std::runtime_error {
public:
    explicit DegenerateChannelError(const std::string& what)
        : std::runtime_error(what) {}
};

struct NetworkInstance {
    cvector source_to_relay;             // h_{s,i}, length M
    cvector relay_to_dest;               // h_{i,d}, length M
    std::vector<cvector> relay_to_eve;   // K rows of length M, h_{i,k}
    PowerConfig power;

    std::size_t relay_count() const { return source_to_relay.size(); }
    std::size_t eavesdropper_count() const { return relay_to_eve.size(); }

    void validate() const {
        const std::size_t m = relay_count();
        if (m == 0) throw std::invalid_argument("NetworkInstance: need at least one relay");
        if (relay_to_dest.size() != m) {
            throw std::invalid_argument("NetworkInstance: relay_to_dest dimension mismatch");
        }
        for (const auto& row : relay_to_eve) {
            if (row.size() != m) {
                throw std::invalid_argument("NetworkInstance: relay_to_eve dimension mismatch");
            }
        }
        if (power.relay_power_caps.size() != m) {
            throw std::invalid_argument("NetworkInstance: relay cap dimension mismatch");
        }
        power.validate();
        auto finite = [](const cvector& v) {
            for (const auto& z : v) {
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
            }
            return true;
        };
        if (!finite(source_to_relay) || !finite(relay_to_dest)) {
            throw std::invalid_argument("NetworkInstance: non-finite gain");
        }
        for (const auto& row : relay_to_eve) {
            if (!finite(row)) throw std::invalid_argument("NetworkInstance: non-finite gain");
        }
    }
};

struct Thresholds {
    double gamma_d = 0.0;          // destination SNR threshold, linear
    std::vector<double> gamma_e;   // per-eavesdropper SNR thresholds, linear

    // gamma' = gamma * sigma^2 / P_s
    double normalized_dest(const PowerConfig& p) const {
        return gamma_d * p.noise_variance / p.source_power;
    }
    double normalized_eve(std::size_t k, const PowerConfig& p) const {
        return gamma_e.at(k) * p.noise_variance / p.source_power;
    }
};

struct ScalingVector {
    cvector beta;
};

class ReceiverId {
public:
    static ReceiverId destination() { return ReceiverId{-1}; }
    static ReceiverId eavesdropper(std::size_t k) {
        return ReceiverId{static_cast<std::ptrdiff_t>(k)};
    }
    bool is_destination() const { return k_ < 0; }
    std::size_t eavesdropper_index() const {
        if (k_ < 0) throw std::logic_error("ReceiverId: not an eavesdropper");
        return static_cast<std::size_t>(k_);
    }

private:
    explicit ReceiverId(std::ptrdiff_t k) : k_(k) {}
    std::ptrdiff_t k_;
};

inline const cvector& receiver_gains(const NetworkInstance& inst, ReceiverId l) {
    if (l.is_destination()) return inst.relay_to_dest;
    const std::size_t k = l.eavesdropper_index();
    if (k >= inst.eavesdropper_count()) {
        throw std::invalid_argument("receiver_gains: eavesdropper index out of range");
    }
    return inst.relay_to_eve[k];
}

// per-relay squared amplification caps: P_i / (|h_{s,i}|^2 P_s + sigma^2)
inline std::vector<double> beta_max_squared(const NetworkInstance& inst) {
    const std::size_t m = inst.relay_count();
    std::vector<double> caps(m);
    for (std::size_t i = 0; i < m; ++i) {
        caps[i] = inst.power.relay_power_caps[i] /
                  (abs2(inst.source_to_relay[i]) * inst.power.source_power +
                   inst.power.noise_variance);
    }
    return caps;
}

// entrywise two-hop products h_{s,i} h_{i,l}
inline cvector effective_channel(const NetworkInstance& inst, ReceiverId l) {
    const cvector& g = receiver_gains(inst, l);
    cvector e(inst.relay_count());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = inst.source_to_relay[i] * g[i];
    return e;
}

// diagonal of D_l: |h_{i,l}|^2
inline std::vector<double> channel_diag(const NetworkInstance& inst, ReceiverId l) {
    const cvector& g = receiver_gains(inst, l);
    std::vector<double> d(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) d[i] = abs2(g[i]);
    return d;
}

// |sum_i h_{s,i} beta_i h_{i,l}|^2 / (1 + sum_i |beta_i h_{i,l}|^2) * P_s/sigma^2
inline double snr(const NetworkInstance& inst, const ScalingVector& s, ReceiverId l) {
    const std::size_t m = inst.relay_count();
    if (s.beta.size() != m) throw std::invalid_argument("snr: scaling dimension mismatch");
    const cvector& g = receiver_gains(inst, l);
    cdouble num{};
    double den = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        const cdouble bg = s.beta[i] * g[i];
        num += inst.source_to_relay[i] * bg;
        den += abs2(bg);
    }
    return abs2(num) / den * inst.power.source_power / inst.power.noise_variance;
}

// sum_i |beta_i|^2 (|h_{s,i}|^2 P_s + sigma^2)
inline double relay_power(const NetworkInstance& inst, const ScalingVector& s) {
    const std::size_t m = inst.relay_count();
    if (s.beta.size() != m) {
        throw std::invalid_argument("relay_power: scaling dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        acc += abs2(s.beta[i]) * (abs2(inst.source_to_relay[i]) * inst.power.source_power +
                                  inst.power.noise_variance);
    }
    return acc;
}

inline double achievable_rate(double snr_value) {
    if (!(snr_value >= 0.0)) {
        throw std::invalid_argument("achievable_rate: SNR must be >= 0");
    }
    return std::log2(1.0 + snr_value);
}

// Rate guaranteed once the optimized destination SNR clears its threshold:
// (1/2) log2(1 + snr_d) when snr_d > gamma_d, else 0. The positive-part
// factor is applied before the singular ratio can form, so snr_d == gamma_d
// yields exactly 0.
inline double threshold_secrecy_rate(double snr_d, double gamma_d) {
    if (!(snr_d >= 0.0)) {
        throw std::invalid_argument("threshold_secrecy_rate: SNR must be >= 0");
    }
    if (!(gamma_d > 0.0)) {
        throw std::invalid_argument("threshold_secrecy_rate: threshold must be > 0");
    }
    if (snr_d <= gamma_d) return 0.0;
    return 0.5 * std::log2(1.0 + snr_d);
}

// (1/2) log2(1 + gamma_d)
inline double secrecy_rate_lower_bound(double gamma_d) {
    if (!(gamma_d > 0.0)) {
        throw std::invalid_argument("secrecy_rate_lower_bound: threshold must be > 0");
    }
    return 0.5 * std::log2(1.0 + gamma_d);
}

// Channel gains i.i.d. CN(0,1): real and imaginary parts each N(0, 1/2).
// Draw order is h_s[0..M), h_d[0..M), then one eavesdropper row at a time,
// so a seed pins the instance bit-exactly and the gain stream is independent
// of the power configuration.
inline NetworkInstance sample_instance(std::size_t M, std::size_t K,
                                       PowerConfig power, std::uint64_t seed) {
    if (M == 0) throw std::invalid_argument("sample_instance: M must be >= 1");
    if (power.relay_power_caps.size() != M) {
        throw std::invalid_argument("sample_instance: relay cap dimension mismatch");
    }
    power.validate();

    GaussianSampler rng(seed);
    NetworkInstance inst;
    inst.power = std::move(power);
    inst.source_to_relay.resize(M);
    inst.relay_to_dest.resize(M);
    inst.relay_to_eve.assign(K, cvector(M));
    for (auto& z : inst.source_to_relay) z = rng.complex_normal(1.0);
    for (auto& z : inst.relay_to_dest) z = rng.complex_normal(1.0);
    for (auto& row : inst.relay_to_eve) {
        for (auto& z : row) z = rng.complex_normal(1.0);
    }
    return inst;
}

// Symbol-level validation of the SNR formula. Per symbol the draws are the
// source symbol x_s ~ CN(0, P_s), relay noises z_1..z_M ~ CN(0, sigma^2) and
// the receiver noise z_l ~ CN(0, sigma^2); the signal and noise contributions
// of y_l are accumulated separately, so beta = 0 gives exactly 0.
inline double simulate_transmission(const NetworkInstance& inst,
                                    const ScalingVector& s, ReceiverId l,
                                    std::size_t n_symbols, std::uint64_t seed) {
    const std::size_t m = inst.relay_count();
    if (s.beta.size() != m) {
        throw std::invalid_argument("simulate_transmission: scaling dimension mismatch");
    }
    if (n_symbols == 0) {
        throw std::invalid_argument("simulate_transmission: need at least one symbol");
    }
    const cvector& g = receiver_gains(inst, l);
    cdouble coeff{};  // sum_i h_{s,i} beta_i h_{i,l}
    for (std::size_t i = 0; i < m; ++i) coeff += inst.source_to_relay[i] * s.beta[i] * g[i];

    GaussianSampler rng(seed);
    const double ps = inst.power.source_power;
    const double nv = inst.power.noise_variance;
    double signal_power = 0.0;
    double noise_power = 0.0;
    for (std::size_t t = 0; t < n_symbols; ++t) {
        const cdouble xs = rng.complex_normal(ps);
        cdouble noise{};
        for (std::size_t i = 0; i < m; ++i) {
            noise += s.beta[i] * g[i] * rng.complex_normal(nv);
        }
        noise += rng.complex_normal(nv);
        signal_power += abs2(coeff * xs);
        noise_power += abs2(noise);
    }
    return signal_power / noise_power;
}

}  // namespace afsec
