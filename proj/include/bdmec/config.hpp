#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bdmec/model.hpp"

namespace bdmec {

// Task entry that regenerates per repetition; the realization seed mixes the
// entry seed with the repetition seed so "five random executions" differ
// while staying reproducible from the manifest.
struct TaskGenSpec {
    std::int64_t n_jobs = 1;
    IntRange payload_bytes;
    RealRange compute_cost;
    std::int64_t steal_chunk_size = 1;
    std::optional<double> complexity;
    std::int64_t result_bytes = 64;
    std::uint64_t seed = 0;
    std::int64_t task_id = 0;
};

using TaskEntry = std::variant<TaskSpec, TaskGenSpec>;

struct PrivacySweepSpec {
    std::map<std::string, std::int64_t> true_counts;
    std::vector<double> epsilons{0.01, 0.1, 0.5, 1.0, 2.0};
    double sensitivity = 1.0;
    std::int64_t error_trials = 100000;
    std::int64_t precision_trials = 10000;
    std::uint64_t seed = 0;
};

// A runnable experiment: either a simulation comparison (modes x repetitions
// over one scenario) or a privacy sweep. Written back out verbatim as the
// run manifest.
struct ExperimentPlan {
    std::string scenario = "custom";
    std::string preset;  // empty for hand-written configs
    std::vector<Mode> modes{Mode::Baseline, Mode::BdMEC};
    std::int64_t repetitions = 5;
    ScenarioConfig base;           // base.tasks stays empty; see `tasks`
    std::vector<TaskEntry> tasks;
    std::optional<PrivacySweepSpec> privacy_sweep;
};

TaskSpec realize_task(const TaskEntry& entry, std::uint64_t repetition_seed);

// Fully resolved, validated config for one (mode, repetition) cell.
ScenarioConfig materialize(const ExperimentPlan& plan, Mode mode, std::int64_t repetition);

// JSON schema is documented in the README. Unknown keys fail closed with
// InvalidScenario naming the offending path.
ExperimentPlan load_plan_json(const nlohmann::json& j);
ExperimentPlan load_plan_file(const std::filesystem::path& path);
nlohmann::json plan_to_json(const ExperimentPlan& plan);
void save_plan_file(const ExperimentPlan& plan, const std::filesystem::path& path);

}  // namespace bdmec
