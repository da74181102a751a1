// afsec command-line tool: Monte Carlo sweeps over seeded channel instances
// and one-shot solves of the two beamforming problems on instance files.
//
// Exit codes: 0 success, 2 configuration/input error, 3 I/O error.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "afsec/afsec.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

afsec::ExperimentConfig load_sweep_config(const std::string& path,
                                          std::optional<std::uint64_t> seed,
                                          const std::string& out_override) {
    afsec::ExperimentConfig cfg = afsec::parse_config_file(path);
    if (seed) cfg.base_seed = *seed;
    if (!out_override.empty()) cfg.output_path = out_override;
    if (cfg.output_path.empty()) {
        throw afsec::ConfigError("no output path: set 'output' in the config or pass --out");
    }
    return cfg;
}

std::vector<double> expand_thresholds(const std::vector<double>& given, std::size_t K,
                                      const char* flag) {
    if (given.size() == K) return given;
    if (given.size() == 1) return std::vector<double>(K, given[0]);
    throw afsec::ConfigError(std::string(flag) + ": need one value or one per eavesdropper");
}

void write_or_print(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw afsec::IoError("cannot open output file: " + out_path);
    out << j.dump(2) << '\n';
    if (!out) throw afsec::IoError("write failed: " + out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secure amplify-and-forward relay beamforming under "
                 "eavesdropper SNR-threshold constraints"};
    app.require_subcommand(1);

    std::string config_path, out_path, instance_path;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    std::vector<double> gamma_e_list;
    double gamma_d = 0.01;

    auto* snr_cmd = app.add_subcommand(
        "snr-sweep", "Destination-SNR maximization sweep over P_s and gamma_e");
    snr_cmd->add_option("--config", config_path, "sweep config file")->required();
    snr_cmd->add_option("--seed", seed, "override base_seed");
    snr_cmd->add_option("--out", out_path, "override the config output path");
    snr_cmd->add_flag("--verbose", verbose, "also write a per-instance log");

    auto* pow_cmd = app.add_subcommand(
        "power-sweep", "Total relay-power minimization sweep over P_s");
    pow_cmd->add_option("--config", config_path, "sweep config file")->required();
    pow_cmd->add_option("--seed", seed, "override base_seed");
    pow_cmd->add_option("--out", out_path, "override the config output path");
    pow_cmd->add_flag("--verbose", verbose, "also write a per-instance log");

    auto* p1_cmd = app.add_subcommand(
        "solve-p1", "Maximize destination SNR for one instance file");
    p1_cmd->add_option("--instance", instance_path, "instance JSON file")->required();
    p1_cmd->add_option("--gamma-e", gamma_e_list, "eavesdropper SNR thresholds")
        ->required()
        ->delimiter(',');
    p1_cmd->add_option("--gamma-d", gamma_d,
                       "destination threshold used for the secrecy-rate report");
    p1_cmd->add_option("--out", out_path, "write the solution JSON here (default stdout)");

    auto* p2_cmd = app.add_subcommand(
        "solve-p2", "Minimize total relay power for one instance file");
    p2_cmd->add_option("--instance", instance_path, "instance JSON file")->required();
    p2_cmd->add_option("--gamma-d", gamma_d, "destination SNR threshold")->required();
    p2_cmd->add_option("--gamma-e", gamma_e_list, "eavesdropper SNR thresholds")
        ->required()
        ->delimiter(',');
    p2_cmd->add_option("--out", out_path, "write the solution JSON here (default stdout)");

    std::size_t sample_M = 5, sample_K = 5;
    double sample_Ps = 1.0, sample_Pi = 10.0, sample_sigma2 = 1.0;
    std::uint64_t sample_seed = 1;
    auto* gen_cmd = app.add_subcommand(
        "sample-instance", "Draw a random CN(0,1) instance and write its JSON");
    gen_cmd->add_option("--M", sample_M, "relay count");
    gen_cmd->add_option("--K", sample_K, "eavesdropper count");
    gen_cmd->add_option("--P-s", sample_Ps, "source power");
    gen_cmd->add_option("--P-i", sample_Pi, "shared relay power cap");
    gen_cmd->add_option("--sigma2", sample_sigma2, "noise variance");
    gen_cmd->add_option("--seed", sample_seed, "sampling seed");
    gen_cmd->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*snr_cmd || *pow_cmd) {
            const auto cfg = load_sweep_config(config_path, seed, out_path);
            afsec::InstanceLog log;
            const auto records = *snr_cmd
                                     ? afsec::run_snr_sweep(cfg, verbose ? &log : nullptr)
                                     : afsec::run_power_sweep(cfg, verbose ? &log : nullptr);
            afsec::emit_csv(records, cfg.output_path);
            if (verbose) {
                afsec::emit_instance_log(log, cfg.output_path + ".instances.csv");
            }
            std::cout << "wrote " << records.size() << " records to " << cfg.output_path
                      << std::endl;
        } else if (*p1_cmd) {
            const auto inst = afsec::load_instance(instance_path);
            afsec::Thresholds th{
                gamma_d, expand_thresholds(gamma_e_list, inst.eavesdropper_count(),
                                           "--gamma-e")};
            const auto sol = afsec::solve_snr_max(inst, th);
            write_or_print(afsec::snr_max_solution_to_json(sol), out_path);
        } else if (*p2_cmd) {
            const auto inst = afsec::load_instance(instance_path);
            afsec::Thresholds th{
                gamma_d, expand_thresholds(gamma_e_list, inst.eavesdropper_count(),
                                           "--gamma-e")};
            const auto sol = afsec::solve_power_min(inst, th);
            write_or_print(afsec::power_min_solution_to_json(sol), out_path);
        } else if (*gen_cmd) {
            const auto inst = afsec::sample_instance(
                sample_M, sample_K,
                afsec::PowerConfig::uniform(sample_Ps, sample_M, sample_Pi, sample_sigma2),
                sample_seed);
            write_or_print(afsec::instance_to_json(inst), out_path);
        }
    } catch (const afsec::IoError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitIo;
    } catch (const afsec::ConfigError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad input JSON: " << e.what() << std::endl;
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitConfig;
    }
    return 0;
}
