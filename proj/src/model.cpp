#include "bdmec/model.hpp"

#include <cmath>
#include <set>
#include <string>

#include "bdmec/errors.hpp"
#include "bdmec/rng.hpp"

namespace bdmec {

const char* behavior_name(const BehaviorKind& b) {
    if (std::holds_alternative<Honest>(b)) return "honest";
    if (std::holds_alternative<DelayInjector>(b)) return "delay_injector";
    if (std::holds_alternative<CountInflator>(b)) return "count_inflator";
    return "id_fabricator";
}

const char* mode_name(Mode m) { return m == Mode::Baseline ? "baseline" : "bdmec"; }

namespace {

void check_device(const DeviceProfile& d, const std::string& field) {
    if (d.device_id.empty())
        throw InvalidScenario(field + ".device_id", "must be non-empty");
    if (!(d.processing_rate > 0.0))
        throw InvalidScenario(field + ".processing_rate", "must be > 0");
    if (!(d.bandwidth_bps > 0.0))
        throw InvalidScenario(field + ".bandwidth_bps", "must be > 0");
    if (d.link_latency_s < 0.0)
        throw InvalidScenario(field + ".link_latency_s", "must be >= 0");
    if (const auto* delay = std::get_if<DelayInjector>(&d.behavior)) {
        if (!(delay->delay_s > 0.0))
            throw InvalidScenario(field + ".behavior.delay_s", "must be > 0");
    } else if (const auto* inflate = std::get_if<CountInflator>(&d.behavior)) {
        if (inflate->extra_jobs < 1)
            throw InvalidScenario(field + ".behavior.extra_jobs", "must be >= 1");
    } else if (const auto* fab = std::get_if<IdFabricator>(&d.behavior)) {
        if (fab->fabricated_ids < 1)
            throw InvalidScenario(field + ".behavior.fabricated_ids", "must be >= 1");
    }
}

void check_task(const TaskSpec& t, const std::string& field) {
    if (t.jobs.empty())
        throw InvalidScenario(field + ".jobs", "must be non-empty");
    if (t.steal_chunk_size < 1)
        throw InvalidScenario("steal_chunk_size", "must be >= 1");
    if (!(t.complexity > 0.0))
        throw InvalidScenario(field + ".complexity", "must be > 0");
    std::set<std::int64_t> ids;
    for (const auto& j : t.jobs) {
        if (!ids.insert(j.job_id).second)
            throw InvalidScenario(field + ".jobs", "duplicate job_id " + std::to_string(j.job_id));
        if (!(j.compute_cost > 0.0))
            throw InvalidScenario(field + ".jobs.compute_cost", "must be > 0");
        if (j.payload_bytes < 0)
            throw InvalidScenario(field + ".jobs.payload_bytes", "must be >= 0");
        if (j.result_bytes < 0)
            throw InvalidScenario(field + ".jobs.result_bytes", "must be >= 0");
    }
}

}  // namespace

ScenarioConfig validate_scenario(const ScenarioConfig& config) {
    check_device(config.delegator, "delegator");
    if (config.workers.empty())
        throw InvalidScenario("workers", "must be non-empty");
    std::set<std::string> ids{config.delegator.device_id};
    for (std::size_t i = 0; i < config.workers.size(); ++i) {
        const auto& w = config.workers[i];
        check_device(w, "workers[" + std::to_string(i) + "]");
        if (!ids.insert(w.device_id).second)
            throw InvalidScenario("workers", "duplicate id " + w.device_id);
    }
    if (config.tasks.empty())
        throw InvalidScenario("tasks", "must be non-empty");
    std::set<std::int64_t> task_ids;
    for (std::size_t i = 0; i < config.tasks.size(); ++i) {
        const auto& t = config.tasks[i];
        check_task(t, "tasks[" + std::to_string(i) + "]");
        if (!task_ids.insert(t.task_id).second)
            throw InvalidScenario("tasks", "duplicate task_id " + std::to_string(t.task_id));
    }
    if (config.iterations < 1)
        throw InvalidScenario("iterations", "must be >= 1");
    if (!(config.privacy.epsilon > 0.0))
        throw InvalidScenario("privacy.epsilon", "must be > 0");
    if (!(config.privacy.sensitivity > 0.0))
        throw InvalidScenario("privacy.sensitivity", "must be > 0");
    if (!(config.selection_policy.optimism_eta > 0.0))
        throw InvalidScenario("selection_policy.optimism_eta", "must be > 0");
    if (config.selection_policy.lambda_window < 1)
        throw InvalidScenario("selection_policy.lambda_window", "must be >= 1");
    if (config.selection_policy.failure_threshold < 1)
        throw InvalidScenario("selection_policy.failure_threshold", "must be >= 1");
    if (config.ledger_query_overhead_s < 0.0)
        throw InvalidScenario("ledger_query_overhead_s", "must be >= 0");
    return config;
}

TaskSpec generate_task(std::int64_t n_jobs,
                       IntRange payload_bytes,
                       RealRange compute_cost,
                       std::int64_t steal_chunk_size,
                       std::optional<double> complexity,
                       std::uint64_t seed,
                       std::int64_t result_bytes,
                       std::int64_t task_id) {
    if (n_jobs < 1) throw InvalidRange("n_jobs must be >= 1");
    if (payload_bytes.lo < 0 || payload_bytes.lo > payload_bytes.hi)
        throw InvalidRange("payload_bytes range must satisfy 0 <= lo <= hi");
    if (!(compute_cost.lo > 0.0) || compute_cost.lo > compute_cost.hi)
        throw InvalidRange("compute_cost range must satisfy 0 < lo <= hi");
    if (steal_chunk_size < 1) throw InvalidRange("steal_chunk_size must be >= 1");
    if (result_bytes < 0) throw InvalidRange("result_bytes must be >= 0");
    if (complexity && !(*complexity > 0.0)) throw InvalidRange("complexity must be > 0");

    Rng rng(seed);
    TaskSpec task;
    task.task_id = task_id;
    task.steal_chunk_size = steal_chunk_size;
    task.jobs.reserve(static_cast<std::size_t>(n_jobs));
    for (std::int64_t i = 0; i < n_jobs; ++i) {
        JobSpec job;
        job.job_id = i;
        job.payload_bytes = rng.uniform_int(payload_bytes.lo, payload_bytes.hi);
        job.compute_cost = rng.uniform_real(compute_cost.lo, compute_cost.hi);
        job.result_bytes = result_bytes;
        task.jobs.push_back(job);
    }
    task.complexity =
        complexity ? *complexity : task.total_compute_cost() / static_cast<double>(n_jobs);
    return task;
}

}  // namespace bdmec
