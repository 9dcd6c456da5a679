#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bdmec {

// One unit of work: payload shipped to the executing device, an abstract
// compute cost, and the bytes of the result shipped back.
struct JobSpec {
    std::int64_t job_id = 0;
    std::int64_t payload_bytes = 0;
    double compute_cost = 1.0;
    std::int64_t result_bytes = 64;
};

struct TaskSpec {
    std::int64_t task_id = 0;
    std::vector<JobSpec> jobs;
    std::int64_t steal_chunk_size = 1;  // jobs taken per steal
    double complexity = 1.0;            // task-level weight used by selection

    double total_compute_cost() const {
        double sum = 0.0;
        for (const auto& j : jobs) sum += j.compute_cost;
        return sum;
    }
    std::int64_t total_jobs() const { return static_cast<std::int64_t>(jobs.size()); }
};

struct Honest {};
struct DelayInjector {
    double delay_s = 0.0;  // added before each result return
};
struct CountInflator {
    std::int64_t extra_jobs = 0;  // added to the claimed count
};
struct IdFabricator {
    std::int64_t fabricated_ids = 0;  // claimed job ids never assigned
};

using BehaviorKind = std::variant<Honest, DelayInjector, CountInflator, IdFabricator>;

const char* behavior_name(const BehaviorKind& b);

struct DeviceProfile {
    std::string device_id;
    double processing_rate = 1.0;  // work units per second
    double bandwidth_bps = 1.0;    // bytes per second, symmetric
    double link_latency_s = 0.0;   // per-message one-way latency
    BehaviorKind behavior = Honest{};
    std::string location;          // opaque tag, recorded on the ledger only
};

struct PrivacyParams {
    double epsilon = 0.5;
    double sensitivity = 1.0;
};

enum class ColdStart { Optimistic, Strict };

struct SelectionPolicy {
    ColdStart cold_start = ColdStart::Optimistic;
    double optimism_eta = 0.01;        // provisional S_i = 1 + eta for unknown workers
    std::int64_t lambda_window = 10;   // audit reports consulted when computing lambda
    std::int64_t failure_threshold = 2;  // incomplete chunks that flip lambda
};

enum class Mode { Baseline, BdMEC };

const char* mode_name(Mode m);

struct ScenarioConfig {
    std::string scenario = "custom";
    DeviceProfile delegator;
    std::vector<DeviceProfile> workers;
    std::vector<TaskSpec> tasks;
    std::int64_t iterations = 1;
    Mode mode = Mode::BdMEC;
    PrivacyParams privacy;
    SelectionPolicy selection_policy;
    double ledger_query_overhead_s = 0.2;  // charged per selected worker, BdMEC only
    std::uint64_t rng_seed = 0;
};

// Returns the config unchanged iff every invariant holds; otherwise throws
// InvalidScenario naming the first violated field. Duplicate device ids
// (including a worker reusing the delegator id) are an error.
ScenarioConfig validate_scenario(const ScenarioConfig& config);

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

struct RealRange {
    double lo = 0.0;
    double hi = 0.0;
};

// Synthetic task generator standing in for a real image set. Jobs get ids
// 0..n_jobs-1; payload and cost are drawn uniformly from the given ranges.
// Pure function of its arguments. complexity == nullopt selects the mean
// per-job compute cost of the generated task.
TaskSpec generate_task(std::int64_t n_jobs,
                       IntRange payload_bytes,
                       RealRange compute_cost,
                       std::int64_t steal_chunk_size,
                       std::optional<double> complexity,
                       std::uint64_t seed,
                       std::int64_t result_bytes = 64,
                       std::int64_t task_id = 0);

}  // namespace bdmec
