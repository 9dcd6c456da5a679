#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdmec/config.hpp"
#include "bdmec/errors.hpp"
#include "bdmec/harness.hpp"
#include "bdmec/ledger.hpp"
#include "bdmec/privacy.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw bdmec::Error("expected a comma-separated list of numbers");
    return out;
}

std::map<std::string, std::int64_t> parse_counts(const std::string& csv) {
    std::map<std::string, std::int64_t> out;
    std::stringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw bdmec::Error("expected worker=count pairs: " + item);
        out[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
    }
    if (out.empty()) throw bdmec::Error("expected at least one worker=count pair");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BdMEC work-stealing offload simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run a preset or a config/manifest file");
    std::string preset;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::int64_t repetitions = 0;
    std::int64_t iterations = 0;
    bool has_seed = false;
    run->add_option("--preset", preset, "Preset: speed-gain | malicious | small-jobs | privacy-tradeoff");
    run->add_option("--config", config_path, "Scenario config or manifest JSON file");
    run->add_option("--out", out_dir, "Output directory (default out/<scenario>)");
    run->add_option("--seed", seed, "Override rng_seed")->each([&](const std::string&) {
        has_seed = true;
    });
    run->add_option("--repetitions", repetitions, "Override repetition count");
    run->add_option("--iterations", iterations, "Override iteration count");

    // verify
    auto* verify = app.add_subcommand("verify", "Verify an exported ledger file");
    std::string ledger_path;
    verify->add_option("--ledger", ledger_path, "Ledger export file")->required();

    // privacy
    auto* privacy = app.add_subcommand("privacy", "Relative-error / precision sweep");
    std::string epsilon_list = "0.01,0.1,0.5,1,2";
    std::int64_t trials = 100000;
    std::int64_t precision_trials = 10000;
    std::uint64_t privacy_seed = 42;
    std::string counts_arg = "worker-1=316,worker-2=217";
    double sensitivity = 1.0;
    std::string privacy_out;
    privacy->add_option("--epsilon-list", epsilon_list, "Comma-separated privacy budgets");
    privacy->add_option("--trials", trials, "Relative-error trials per cell");
    privacy->add_option("--precision-trials", precision_trials, "Precision trials per cell");
    privacy->add_option("--seed", privacy_seed, "Sweep seed");
    privacy->add_option("--counts", counts_arg, "True job counts, worker=count pairs");
    privacy->add_option("--sensitivity", sensitivity, "Count query sensitivity");
    privacy->add_option("--out", privacy_out, "Output directory (default: print CSV)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (preset.empty() == config_path.empty())
                throw bdmec::Error("give exactly one of --preset or --config");
            bdmec::ExperimentPlan plan =
                preset.empty() ? bdmec::load_plan_file(config_path) : bdmec::preset_plan(preset);
            if (has_seed) {
                plan.base.rng_seed = seed;
                if (plan.privacy_sweep) plan.privacy_sweep->seed = seed;
            }
            if (repetitions > 0) plan.repetitions = repetitions;
            if (iterations > 0) plan.base.iterations = iterations;
            const std::string dir = out_dir.empty() ? "out/" + plan.scenario : out_dir;
            const auto output = bdmec::run_plan_to_dir(plan, dir);
            for (const auto& f : output.files) std::cout << "wrote " << f.string() << '\n';
            return 0;
        }
        if (verify->parsed()) {
            const auto store = bdmec::LedgerStore::import_file(ledger_path);
            bool ok = true;
            for (auto channel : {bdmec::Channel::Delegator, bdmec::Channel::Worker}) {
                const auto violations = store.verify_chain(channel);
                if (violations.empty()) {
                    std::cout << "ok," << bdmec::channel_name(channel) << ','
                              << store.chain(channel).size() << " blocks\n";
                    continue;
                }
                ok = false;
                for (const auto& v : violations)
                    std::cout << "violation," << bdmec::channel_name(channel) << ',' << v.height
                              << ',' << v.reason << '\n';
            }
            return ok ? 0 : 1;
        }
        if (privacy->parsed()) {
            const auto rows =
                bdmec::privacy_sweep(parse_counts(counts_arg), parse_double_list(epsilon_list),
                                     sensitivity, trials, precision_trials, privacy_seed);
            if (privacy_out.empty()) {
                bdmec::write_privacy_csv(rows, std::cout);
            } else {
                std::filesystem::create_directories(privacy_out);
                const auto path = std::filesystem::path(privacy_out) / "privacy.csv";
                std::ofstream out(path, std::ios::binary);
                if (!out) throw bdmec::IoFailure("cannot open " + path.string());
                bdmec::write_privacy_csv(rows, out);
                std::cout << "wrote " << path.string() << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
