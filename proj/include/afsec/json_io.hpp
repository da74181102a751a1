// JSON serialization: the shared network-instance schema used by the CLI and
// test fixtures, solution records, and an SDP dump/load format for debugging.
//
// Instance schema:
//   {"M": 2, "K": 1, "h_s": [[re,im],...], "h_d": [[re,im],...],
//    "h_e": [...K*M pairs, row-major by eavesdropper...],
//    "P_s": 1.0, "P_i": [...], "sigma2": 1.0}
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "afsec/model.hpp"
#include "afsec/power_min.hpp"
#include "afsec/sdp.hpp"
#include "afsec/snr_max.hpp"

namespace afsec {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline nlohmann::json complex_pair(cdouble z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

inline cdouble complex_from_pair(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("expected a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json cvector_json(const cvector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& z : v) out.push_back(complex_pair(z));
    return out;
}

inline cvector cvector_from_json(const nlohmann::json& j) {
    cvector out;
    for (const auto& e : j) out.push_back(complex_from_pair(e));
    return out;
}

}  // namespace detail

inline nlohmann::json instance_to_json(const NetworkInstance& inst) {
    nlohmann::json j;
    j["M"] = inst.relay_count();
    j["K"] = inst.eavesdropper_count();
    j["h_s"] = detail::cvector_json(inst.source_to_relay);
    j["h_d"] = detail::cvector_json(inst.relay_to_dest);
    nlohmann::json he = nlohmann::json::array();
    for (const auto& row : inst.relay_to_eve) {
        for (const auto& z : row) he.push_back(detail::complex_pair(z));
    }
    j["h_e"] = he;
    j["P_s"] = inst.power.source_power;
    j["P_i"] = inst.power.relay_power_caps;
    j["sigma2"] = inst.power.noise_variance;
    return j;
}

inline NetworkInstance instance_from_json(const nlohmann::json& j) {
    NetworkInstance inst;
    const auto m = j.at("M").get<std::size_t>();
    const auto k = j.at("K").get<std::size_t>();
    inst.source_to_relay = detail::cvector_from_json(j.at("h_s"));
    inst.relay_to_dest = detail::cvector_from_json(j.at("h_d"));
    const cvector he = detail::cvector_from_json(j.at("h_e"));
    if (inst.source_to_relay.size() != m || inst.relay_to_dest.size() != m ||
        he.size() != m * k) {
        throw std::invalid_argument("instance JSON: dimension fields disagree with arrays");
    }
    inst.relay_to_eve.assign(k, cvector(m));
    for (std::size_t kk = 0; kk < k; ++kk) {
        for (std::size_t i = 0; i < m; ++i) inst.relay_to_eve[kk][i] = he[kk * m + i];
    }
    inst.power.source_power = j.at("P_s").get<double>();
    inst.power.relay_power_caps = j.at("P_i").get<std::vector<double>>();
    inst.power.noise_variance = j.at("sigma2").get<double>();
    inst.validate();
    return inst;
}

inline NetworkInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file: " + path);
    nlohmann::json j;
    in >> j;
    return instance_from_json(j);
}

inline nlohmann::json snr_max_solution_to_json(const SnrMaxSolution& sol) {
    nlohmann::json j;
    switch (sol.status) {
        case SolveStatus::Optimal: j["status"] = "optimal"; break;
        case SolveStatus::Infeasible: j["status"] = "infeasible"; break;
        case SolveStatus::MaxIterations: j["status"] = "max-iterations"; break;
    }
    j["beta"] = detail::cvector_json(sol.beta.beta);
    j["snr_destination"] = sol.snr_destination;
    j["snr_eavesdroppers"] = sol.snr_eavesdroppers;
    j["sdr_snr_bound"] = sol.sdr_snr_bound;
    j["rank1_gap"] = sol.rank1_gap;
    j["secrecy_rate"] = sol.secrecy_rate;
    j["shrink_factor"] = sol.shrink_factor;
    return j;
}

inline nlohmann::json power_min_solution_to_json(const PowerMinSolution& sol) {
    nlohmann::json j;
    switch (sol.status) {
        case PowerMinStatus::Optimal: j["status"] = "optimal"; break;
        case PowerMinStatus::Infeasible: j["status"] = "infeasible"; break;
        case PowerMinStatus::GapUnresolved: j["status"] = "gap-unresolved"; break;
    }
    j["beta"] = detail::cvector_json(sol.beta.beta);
    j["total_power"] = sol.total_power;
    j["sdr_objective"] = sol.sdr_objective;
    j["lower_bound"] = sol.lower_bound;
    j["rank1_gap"] = sol.rank1_gap;
    j["randomized"] = sol.randomized;
    j["slacks"] = {{"destination", sol.slacks.destination},
                   {"eavesdroppers", sol.slacks.eavesdroppers},
                   {"power_caps", sol.slacks.power_caps}};
    return j;
}

namespace detail {

inline nlohmann::json hermitian_to_json(const HermitianMatrix& A) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < A.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < A.dim(); ++j) row.push_back(complex_pair(A(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline HermitianMatrix hermitian_from_json(const nlohmann::json& j) {
    const std::size_t n = j.size();
    cvector entries(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (j[i].size() != n) throw std::invalid_argument("matrix JSON: ragged rows");
        for (std::size_t c = 0; c < n; ++c) entries[i * n + c] = complex_from_pair(j[i][c]);
    }
    return HermitianMatrix::from_entries(n, entries);
}

}  // namespace detail

inline nlohmann::json sdp_problem_to_json(const SDPProblem& p) {
    nlohmann::json j;
    j["n"] = p.dim();
    j["sense"] = p.sense == Sense::Maximize ? "maximize" : "minimize";
    j["objective"] = detail::hermitian_to_json(p.objective);
    nlohmann::json cons = nlohmann::json::array();
    for (const auto& c : p.constraints) {
        const char* rel = c.rel == Relation::LessEq ? "<="
                          : c.rel == Relation::GreaterEq ? ">="
                                                         : "==";
        cons.push_back({{"A", detail::hermitian_to_json(c.lhs)},
                        {"rel", rel},
                        {"b", c.rhs}});
    }
    j["constraints"] = cons;
    return j;
}

inline SDPProblem sdp_problem_from_json(const nlohmann::json& j) {
    SDPProblem p;
    p.sense = j.at("sense").get<std::string>() == "maximize" ? Sense::Maximize
                                                             : Sense::Minimize;
    p.objective = detail::hermitian_from_json(j.at("objective"));
    for (const auto& c : j.at("constraints")) {
        SDPConstraint con;
        con.lhs = detail::hermitian_from_json(c.at("A"));
        const std::string rel = c.at("rel").get<std::string>();
        if (rel == "<=") {
            con.rel = Relation::LessEq;
        } else if (rel == ">=") {
            con.rel = Relation::GreaterEq;
        } else if (rel == "==") {
            con.rel = Relation::Equal;
        } else {
            throw std::invalid_argument("SDP JSON: unknown relation " + rel);
        }
        con.rhs = c.at("b").get<double>();
        p.constraints.push_back(std::move(con));
    }
    if (p.dim() != j.at("n").get<std::size_t>()) {
        throw std::invalid_argument("SDP JSON: dimension field disagrees with objective");
    }
    p.validate();
    return p;
}

}  // namespace afsec
