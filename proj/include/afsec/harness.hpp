// Seeded Monte Carlo experiment driver behind the CLI sweeps: samples a
// common set of channel instances, solves the two optimization pipelines
// over a source-power grid, and emits deterministic CSV plot data.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "afsec/json_io.hpp"
#include "afsec/model.hpp"
#include "afsec/power_min.hpp"
#include "afsec/snr_max.hpp"

namespace afsec {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
    std::size_t M = 5;
    std::size_t K = 5;
    double relay_cap = 10.0;  // shared per-relay cap P_i
    double sigma2 = 1.0;
    std::vector<double> P_s_grid;       // defaults to 1..20
    std::vector<double> gamma_e_grid;   // SNR sweep; defaults below
    double gamma_d = 0.01;              // power sweep; also the SNR-sweep reporting threshold
    double gamma_e = 0.005;             // power sweep
    std::size_t n_instances = 100;
    std::uint64_t base_seed = 1;
    std::string output_path;

    // The figure axes are not spelled out anywhere; these defaults are our
    // reconstruction and every value is overridable from the config file.
    void apply_defaults() {
        if (P_s_grid.empty()) {
            for (int p = 1; p <= 20; ++p) P_s_grid.push_back(p);
        }
        if (gamma_e_grid.empty()) gamma_e_grid = {0.005, 0.01, 0.05};
    }

    void validate() const {
        if (M == 0) throw ConfigError("config: M must be >= 1");
        if (n_instances == 0) throw ConfigError("config: n_instances must be >= 1");
        if (P_s_grid.empty()) throw ConfigError("config: P_s_grid must be nonempty");
        if (gamma_e_grid.empty()) throw ConfigError("config: gamma_e_grid must be nonempty");
        for (double p : P_s_grid) {
            if (!(p > 0.0)) throw ConfigError("config: P_s values must be > 0");
        }
        for (double g : gamma_e_grid) {
            if (!(g > 0.0)) throw ConfigError("config: gamma_e values must be > 0");
        }
        if (!(gamma_d > 0.0) || !(gamma_e > 0.0)) {
            throw ConfigError("config: thresholds must be > 0");
        }
        if (!(sigma2 > 0.0)) throw ConfigError("config: sigma2 must be > 0");
        if (!(relay_cap >= 0.0)) throw ConfigError("config: P_i must be >= 0");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

}  // namespace detail

// Simple `key = value` format; '#' starts a comment, lists are
// comma-separated. Unknown keys are rejected.
inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "M") {
            cfg.M = static_cast<std::size_t>(detail::parse_double(key, value));
        } else if (key == "K") {
            cfg.K = static_cast<std::size_t>(detail::parse_double(key, value));
        } else if (key == "P_i") {
            cfg.relay_cap = detail::parse_double(key, value);
        } else if (key == "sigma2") {
            cfg.sigma2 = detail::parse_double(key, value);
        } else if (key == "P_s_grid") {
            cfg.P_s_grid = detail::parse_list(key, value);
        } else if (key == "gamma_e_grid") {
            cfg.gamma_e_grid = detail::parse_list(key, value);
        } else if (key == "gamma_d") {
            cfg.gamma_d = detail::parse_double(key, value);
        } else if (key == "gamma_e") {
            cfg.gamma_e = detail::parse_double(key, value);
        } else if (key == "n_instances") {
            cfg.n_instances = static_cast<std::size_t>(detail::parse_double(key, value));
        } else if (key == "base_seed") {
            cfg.base_seed = static_cast<std::uint64_t>(detail::parse_double(key, value));
        } else if (key == "output") {
            cfg.output_path = value;
        } else {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    cfg.apply_defaults();
    cfg.validate();
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    return parse_config(in);
}

// FNV-1a over the raw bit patterns of the channel gains, used to confirm the
// common-random-numbers design (instance j identical across sweep cells)
inline std::uint64_t instance_hash(const NetworkInstance& inst) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double x) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&bits, &x, sizeof(bits));
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffULL;
            h *= 1099511628211ULL;
        }
    };
    auto mixv = [&](const cvector& v) {
        for (const auto& z : v) {
            mix(z.real());
            mix(z.imag());
        }
    };
    mixv(inst.source_to_relay);
    mixv(inst.relay_to_dest);
    for (const auto& row : inst.relay_to_eve) mixv(row);
    return h;
}

struct SweepRecord {
    std::string sweep;   // "snr" | "power"
    double P_s = 0.0;
    double gamma_d = 0.0;
    double gamma_e = 0.0;
    std::string series;  // "rate_log2" | "rate_secrecy" | "sdr" | "analytical"
    std::vector<double> values;  // per successful instance, ordered by index
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t n_success = 0;
    std::size_t n_infeasible = 0;
    std::size_t n_gap = 0;

    void finalize() {
        n_success = values.size();
        if (values.empty()) {
            mean = 0.0;
            stderr_mean = 0.0;
            return;
        }
        double acc = 0.0;
        for (double v : values) acc += v;
        mean = acc / static_cast<double>(values.size());
        if (values.size() < 2) {
            stderr_mean = 0.0;
            return;
        }
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const auto nn = static_cast<double>(values.size());
        stderr_mean = std::sqrt(ss / (nn * (nn - 1.0)));
    }
};

struct InstanceLogRow {
    std::string sweep;
    double P_s;
    double gamma_d;
    double gamma_e;
    std::string series;
    std::size_t instance;
    std::uint64_t seed;
    std::uint64_t hash;
    double value;
    std::string status;
};

using InstanceLog = std::vector<InstanceLogRow>;

// One cell per (gamma_e, P_s); instance j uses seed base_seed + j in every
// cell, so the channel draws are common across the whole sweep.
inline std::vector<SweepRecord> run_snr_sweep(const ExperimentConfig& cfg,
                                              InstanceLog* log = nullptr) {
    cfg.validate();
    std::vector<SweepRecord> records;
    const SolverSettings settings{};
    for (double ge : cfg.gamma_e_grid) {
        for (double ps : cfg.P_s_grid) {
            SweepRecord rate{"snr", ps, cfg.gamma_d, ge, "rate_log2", {}, 0, 0, 0, 0, 0};
            SweepRecord secrecy{"snr", ps, cfg.gamma_d, ge, "rate_secrecy", {}, 0, 0, 0, 0, 0};
            for (std::size_t j = 0; j < cfg.n_instances; ++j) {
                const std::uint64_t seed = cfg.base_seed + j;
                const NetworkInstance inst = sample_instance(
                    cfg.M, cfg.K, PowerConfig::uniform(ps, cfg.M, cfg.relay_cap, cfg.sigma2),
                    seed);
                Thresholds th{cfg.gamma_d, std::vector<double>(cfg.K, ge)};
                const SnrMaxSolution sol = solve_snr_max(inst, th, settings);
                const bool ok = sol.status == SolveStatus::Optimal;
                if (ok) {
                    rate.values.push_back(achievable_rate(sol.snr_destination));
                    secrecy.values.push_back(sol.secrecy_rate);
                } else {
                    ++rate.n_gap;
                    ++secrecy.n_gap;
                }
                if (log) {
                    const std::uint64_t h = instance_hash(inst);
                    const char* st = ok ? "optimal" : "solver-failed";
                    log->push_back({"snr", ps, cfg.gamma_d, ge, "rate_log2", j, seed, h,
                                    ok ? achievable_rate(sol.snr_destination) : 0.0, st});
                    log->push_back({"snr", ps, cfg.gamma_d, ge, "rate_secrecy", j, seed, h,
                                    ok ? sol.secrecy_rate : 0.0, st});
                }
            }
            rate.finalize();
            secrecy.finalize();
            records.push_back(std::move(rate));
            records.push_back(std::move(secrecy));
        }
    }
    return records;
}

// Two series per P_s cell: the recovered relaxation power and the analytical
// bound. Infeasible instances are excluded from the means and counted.
inline std::vector<SweepRecord> run_power_sweep(const ExperimentConfig& cfg,
                                                InstanceLog* log = nullptr) {
    cfg.validate();
    std::vector<SweepRecord> records;
    const SolverSettings settings{};
    for (double ps : cfg.P_s_grid) {
        SweepRecord sdr{"power", ps, cfg.gamma_d, cfg.gamma_e, "sdr", {}, 0, 0, 0, 0, 0};
        SweepRecord bound{"power", ps, cfg.gamma_d, cfg.gamma_e, "analytical", {}, 0, 0, 0, 0, 0};
        for (std::size_t j = 0; j < cfg.n_instances; ++j) {
            const std::uint64_t seed = cfg.base_seed + j;
            const NetworkInstance inst = sample_instance(
                cfg.M, cfg.K, PowerConfig::uniform(ps, cfg.M, cfg.relay_cap, cfg.sigma2),
                seed);
            Thresholds th{cfg.gamma_d, std::vector<double>(cfg.K, cfg.gamma_e)};
            const PowerMinSolution sol = solve_power_min(inst, th, settings);
            const char* sdr_status = "optimal";
            if (sol.status == PowerMinStatus::Optimal) {
                sdr.values.push_back(sol.total_power);
            } else if (sol.status == PowerMinStatus::Infeasible) {
                ++sdr.n_infeasible;
                sdr_status = "infeasible";
            } else {
                ++sdr.n_gap;
                sdr_status = "gap-unresolved";
            }
            double bound_value = 0.0;
            const char* bound_status = "optimal";
            try {
                bound_value = analytical_power_bound(inst, th).power_bound;
                bound.values.push_back(bound_value);
            } catch (const ThresholdUnreachableError&) {
                ++bound.n_infeasible;
                bound_status = "infeasible";
            } catch (const SingularPencilError&) {
                ++bound.n_gap;
                bound_status = "singular-pencil";
            }
            if (log) {
                const std::uint64_t h = instance_hash(inst);
                log->push_back({"power", ps, cfg.gamma_d, cfg.gamma_e, "sdr", j, seed, h,
                                sol.status == PowerMinStatus::Optimal ? sol.total_power : 0.0,
                                sdr_status});
                log->push_back({"power", ps, cfg.gamma_d, cfg.gamma_e, "analytical", j, seed,
                                h, bound_value, bound_status});
            }
        }
        sdr.finalize();
        bound.finalize();
        records.push_back(std::move(sdr));
        records.push_back(std::move(bound));
    }
    return records;
}

namespace detail {

inline std::string fmt9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

}  // namespace detail

inline void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << "sweep,P_s,gamma_d,gamma_e,series,mean,stderr,n_success,n_infeasible,n_gap\n";
    for (const auto& r : records) {
        out << r.sweep << ',' << detail::fmt9(r.P_s) << ',' << detail::fmt9(r.gamma_d)
            << ',' << detail::fmt9(r.gamma_e) << ',' << r.series << ','
            << detail::fmt9(r.mean) << ',' << detail::fmt9(r.stderr_mean) << ','
            << r.n_success << ',' << r.n_infeasible << ',' << r.n_gap << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

inline void emit_instance_log(const InstanceLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << "sweep,P_s,gamma_d,gamma_e,series,instance,seed,instance_hash,value,status\n";
    char hashbuf[32];
    for (const auto& r : log) {
        std::snprintf(hashbuf, sizeof(hashbuf), "%016llx",
                      static_cast<unsigned long long>(r.hash));
        out << r.sweep << ',' << detail::fmt9(r.P_s) << ',' << detail::fmt9(r.gamma_d)
            << ',' << detail::fmt9(r.gamma_e) << ',' << r.series << ',' << r.instance
            << ',' << r.seed << ',' << hashbuf << ',' << detail::fmt9(r.value) << ','
            << r.status << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace afsec
