#include "bdmec/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "bdmec/errors.hpp"
#include "bdmec/rng.hpp"

namespace bdmec {

using nlohmann::json;

namespace {

void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
    if (!j.is_object()) throw InvalidScenario(path, "expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw InvalidScenario(path + "." + key, "unknown key");
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw InvalidScenario(path + "." + key, "missing required key");
    return *it;
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw InvalidScenario(path, "expected a number");
    return j.get<double>();
}

std::int64_t get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw InvalidScenario(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::uint64_t get_uint(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw InvalidScenario(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw InvalidScenario(path, "expected a string");
    return j.get<std::string>();
}

BehaviorKind parse_behavior(const json& j, const std::string& path) {
    if (!j.is_object()) throw InvalidScenario(path, "expected an object");
    const std::string kind = get_string(require(j, "kind", path), path + ".kind");
    if (kind == "honest") {
        expect_keys(j, {"kind"}, path);
        return Honest{};
    }
    if (kind == "delay_injector") {
        expect_keys(j, {"kind", "delay_s"}, path);
        return DelayInjector{get_number(require(j, "delay_s", path), path + ".delay_s")};
    }
    if (kind == "count_inflator") {
        expect_keys(j, {"kind", "extra_jobs"}, path);
        return CountInflator{get_int(require(j, "extra_jobs", path), path + ".extra_jobs")};
    }
    if (kind == "id_fabricator") {
        expect_keys(j, {"kind", "fabricated_ids"}, path);
        return IdFabricator{
            get_int(require(j, "fabricated_ids", path), path + ".fabricated_ids")};
    }
    throw InvalidScenario(path + ".kind", "unknown behavior: " + kind);
}

json behavior_to_json(const BehaviorKind& b) {
    json j;
    j["kind"] = behavior_name(b);
    if (const auto* delay = std::get_if<DelayInjector>(&b)) j["delay_s"] = delay->delay_s;
    if (const auto* inflate = std::get_if<CountInflator>(&b)) j["extra_jobs"] = inflate->extra_jobs;
    if (const auto* fab = std::get_if<IdFabricator>(&b)) j["fabricated_ids"] = fab->fabricated_ids;
    return j;
}

DeviceProfile parse_device(const json& j, const std::string& path) {
    expect_keys(j,
                {"device_id", "processing_rate", "bandwidth_bps", "link_latency_s", "behavior",
                 "location"},
                path);
    DeviceProfile d;
    d.device_id = get_string(require(j, "device_id", path), path + ".device_id");
    d.processing_rate = get_number(require(j, "processing_rate", path), path + ".processing_rate");
    d.bandwidth_bps = get_number(require(j, "bandwidth_bps", path), path + ".bandwidth_bps");
    d.link_latency_s = get_number(require(j, "link_latency_s", path), path + ".link_latency_s");
    if (j.contains("behavior")) d.behavior = parse_behavior(j["behavior"], path + ".behavior");
    if (j.contains("location")) d.location = get_string(j["location"], path + ".location");
    return d;
}

json device_to_json(const DeviceProfile& d) {
    json j;
    j["device_id"] = d.device_id;
    j["processing_rate"] = d.processing_rate;
    j["bandwidth_bps"] = d.bandwidth_bps;
    j["link_latency_s"] = d.link_latency_s;
    j["behavior"] = behavior_to_json(d.behavior);
    j["location"] = d.location;
    return j;
}

JobSpec parse_job(const json& j, const std::string& path) {
    expect_keys(j, {"job_id", "payload_bytes", "compute_cost", "result_bytes"}, path);
    JobSpec job;
    job.job_id = get_int(require(j, "job_id", path), path + ".job_id");
    job.payload_bytes = get_int(require(j, "payload_bytes", path), path + ".payload_bytes");
    job.compute_cost = get_number(require(j, "compute_cost", path), path + ".compute_cost");
    if (j.contains("result_bytes")) job.result_bytes = get_int(j["result_bytes"], path + ".result_bytes");
    return job;
}

TaskEntry parse_task(const json& j, const std::string& path) {
    if (j.is_object() && j.contains("generate")) {
        expect_keys(j, {"generate"}, path);
        const json& g = j["generate"];
        expect_keys(g,
                    {"n_jobs", "payload_bytes", "compute_cost", "steal_chunk_size", "complexity",
                     "result_bytes", "seed", "task_id"},
                    path + ".generate");
        TaskGenSpec spec;
        spec.n_jobs = get_int(require(g, "n_jobs", path), path + ".generate.n_jobs");
        const json& payload = require(g, "payload_bytes", path);
        if (!payload.is_array() || payload.size() != 2)
            throw InvalidScenario(path + ".generate.payload_bytes", "expected [lo, hi]");
        spec.payload_bytes = {get_int(payload[0], path), get_int(payload[1], path)};
        const json& cost = require(g, "compute_cost", path);
        if (!cost.is_array() || cost.size() != 2)
            throw InvalidScenario(path + ".generate.compute_cost", "expected [lo, hi]");
        spec.compute_cost = {get_number(cost[0], path), get_number(cost[1], path)};
        spec.steal_chunk_size =
            get_int(require(g, "steal_chunk_size", path), path + ".generate.steal_chunk_size");
        if (g.contains("complexity") && !g["complexity"].is_null())
            spec.complexity = get_number(g["complexity"], path + ".generate.complexity");
        if (g.contains("result_bytes"))
            spec.result_bytes = get_int(g["result_bytes"], path + ".generate.result_bytes");
        spec.seed = get_uint(require(g, "seed", path), path + ".generate.seed");
        if (g.contains("task_id")) spec.task_id = get_int(g["task_id"], path + ".generate.task_id");
        return spec;
    }

    expect_keys(j, {"task_id", "steal_chunk_size", "complexity", "jobs"}, path);
    TaskSpec task;
    task.task_id = get_int(require(j, "task_id", path), path + ".task_id");
    task.steal_chunk_size =
        get_int(require(j, "steal_chunk_size", path), path + ".steal_chunk_size");
    const json& jobs = require(j, "jobs", path);
    if (!jobs.is_array()) throw InvalidScenario(path + ".jobs", "expected an array");
    for (std::size_t i = 0; i < jobs.size(); ++i)
        task.jobs.push_back(parse_job(jobs[i], path + ".jobs[" + std::to_string(i) + "]"));
    if (j.contains("complexity") && !j["complexity"].is_null()) {
        task.complexity = get_number(j["complexity"], path + ".complexity");
    } else {
        if (task.jobs.empty()) throw InvalidScenario(path + ".jobs", "must be non-empty");
        task.complexity = task.total_compute_cost() / static_cast<double>(task.jobs.size());
    }
    return task;
}

json task_to_json(const TaskEntry& entry) {
    if (const auto* gen = std::get_if<TaskGenSpec>(&entry)) {
        json g;
        g["n_jobs"] = gen->n_jobs;
        g["payload_bytes"] = json::array({gen->payload_bytes.lo, gen->payload_bytes.hi});
        g["compute_cost"] = json::array({gen->compute_cost.lo, gen->compute_cost.hi});
        g["steal_chunk_size"] = gen->steal_chunk_size;
        if (gen->complexity)
            g["complexity"] = *gen->complexity;
        else
            g["complexity"] = nullptr;
        g["result_bytes"] = gen->result_bytes;
        g["seed"] = gen->seed;
        g["task_id"] = gen->task_id;
        return json{{"generate", g}};
    }
    const auto& task = std::get<TaskSpec>(entry);
    json j;
    j["task_id"] = task.task_id;
    j["steal_chunk_size"] = task.steal_chunk_size;
    j["complexity"] = task.complexity;
    json jobs = json::array();
    for (const auto& job : task.jobs) {
        json jj;
        jj["job_id"] = job.job_id;
        jj["payload_bytes"] = job.payload_bytes;
        jj["compute_cost"] = job.compute_cost;
        jj["result_bytes"] = job.result_bytes;
        jobs.push_back(std::move(jj));
    }
    j["jobs"] = std::move(jobs);
    return j;
}

PrivacyParams parse_privacy(const json& j, const std::string& path) {
    expect_keys(j, {"epsilon", "sensitivity"}, path);
    PrivacyParams p;
    p.epsilon = get_number(require(j, "epsilon", path), path + ".epsilon");
    if (j.contains("sensitivity")) p.sensitivity = get_number(j["sensitivity"], path + ".sensitivity");
    return p;
}

SelectionPolicy parse_policy(const json& j, const std::string& path) {
    expect_keys(j, {"cold_start", "optimism_eta", "lambda_window", "failure_threshold"}, path);
    SelectionPolicy p;
    if (j.contains("cold_start")) {
        const std::string cs = get_string(j["cold_start"], path + ".cold_start");
        if (cs == "optimistic")
            p.cold_start = ColdStart::Optimistic;
        else if (cs == "strict")
            p.cold_start = ColdStart::Strict;
        else
            throw InvalidScenario(path + ".cold_start", "expected optimistic or strict");
    }
    if (j.contains("optimism_eta")) p.optimism_eta = get_number(j["optimism_eta"], path);
    if (j.contains("lambda_window")) p.lambda_window = get_int(j["lambda_window"], path);
    if (j.contains("failure_threshold"))
        p.failure_threshold = get_int(j["failure_threshold"], path);
    return p;
}

Mode parse_mode(const std::string& s, const std::string& path) {
    if (s == "baseline") return Mode::Baseline;
    if (s == "bdmec") return Mode::BdMEC;
    throw InvalidScenario(path, "expected baseline or bdmec");
}

PrivacySweepSpec parse_sweep(const json& j, const std::string& path) {
    expect_keys(j,
                {"true_counts", "epsilons", "sensitivity", "error_trials", "precision_trials",
                 "seed"},
                path);
    PrivacySweepSpec s;
    const json& counts = require(j, "true_counts", path);
    if (!counts.is_object() || counts.empty())
        throw InvalidScenario(path + ".true_counts", "expected a non-empty object");
    for (const auto& [worker, count] : counts.items())
        s.true_counts[worker] = get_int(count, path + ".true_counts." + worker);
    if (j.contains("epsilons")) {
        s.epsilons.clear();
        for (const auto& e : j["epsilons"]) s.epsilons.push_back(get_number(e, path + ".epsilons"));
        if (s.epsilons.empty()) throw InvalidScenario(path + ".epsilons", "must be non-empty");
    }
    if (j.contains("sensitivity")) s.sensitivity = get_number(j["sensitivity"], path);
    if (j.contains("error_trials")) s.error_trials = get_int(j["error_trials"], path);
    if (j.contains("precision_trials")) s.precision_trials = get_int(j["precision_trials"], path);
    if (j.contains("seed")) s.seed = get_uint(j["seed"], path + ".seed");
    return s;
}

}  // namespace

TaskSpec realize_task(const TaskEntry& entry, std::uint64_t repetition_seed) {
    if (const auto* gen = std::get_if<TaskGenSpec>(&entry)) {
        return generate_task(gen->n_jobs, gen->payload_bytes, gen->compute_cost,
                             gen->steal_chunk_size, gen->complexity,
                             derive_seed(gen->seed, repetition_seed), gen->result_bytes,
                             gen->task_id);
    }
    return std::get<TaskSpec>(entry);
}

ScenarioConfig materialize(const ExperimentPlan& plan, Mode mode, std::int64_t repetition) {
    ScenarioConfig config = plan.base;
    config.scenario = plan.scenario;
    config.mode = mode;
    config.rng_seed = plan.base.rng_seed + static_cast<std::uint64_t>(repetition);
    config.tasks.clear();
    for (const auto& entry : plan.tasks)
        config.tasks.push_back(realize_task(entry, config.rng_seed));
    return validate_scenario(config);
}

ExperimentPlan load_plan_json(const json& j) {
    expect_keys(j,
                {"scenario", "preset", "mode", "modes", "repetitions", "rng_seed", "iterations",
                 "ledger_query_overhead_s", "privacy", "selection_policy", "delegator", "workers",
                 "tasks", "privacy_sweep"},
                "config");
    ExperimentPlan plan;
    if (j.contains("scenario")) plan.scenario = get_string(j["scenario"], "config.scenario");
    if (j.contains("preset")) plan.preset = get_string(j["preset"], "config.preset");
    if (j.contains("repetitions")) plan.repetitions = get_int(j["repetitions"], "config.repetitions");
    if (plan.repetitions < 1) throw InvalidScenario("repetitions", "must be >= 1");

    if (j.contains("privacy_sweep")) {
        for (const char* key :
             {"mode", "modes", "iterations", "ledger_query_overhead_s", "privacy",
              "selection_policy", "delegator", "workers", "tasks"})
            if (j.contains(key))
                throw InvalidScenario(std::string("config.") + key,
                                      "not allowed alongside privacy_sweep");
        plan.privacy_sweep = parse_sweep(j["privacy_sweep"], "config.privacy_sweep");
        return plan;
    }

    if (j.contains("mode") && j.contains("modes"))
        throw InvalidScenario("config.mode", "give either mode or modes, not both");
    if (j.contains("mode")) {
        plan.modes = {parse_mode(get_string(j["mode"], "config.mode"), "config.mode")};
    } else if (j.contains("modes")) {
        plan.modes.clear();
        for (const auto& m : j["modes"])
            plan.modes.push_back(parse_mode(get_string(m, "config.modes"), "config.modes"));
        if (plan.modes.empty()) throw InvalidScenario("config.modes", "must be non-empty");
    }

    if (j.contains("rng_seed")) plan.base.rng_seed = get_uint(j["rng_seed"], "config.rng_seed");
    if (j.contains("iterations")) plan.base.iterations = get_int(j["iterations"], "config.iterations");
    if (j.contains("ledger_query_overhead_s"))
        plan.base.ledger_query_overhead_s =
            get_number(j["ledger_query_overhead_s"], "config.ledger_query_overhead_s");
    if (j.contains("privacy")) plan.base.privacy = parse_privacy(j["privacy"], "config.privacy");
    if (j.contains("selection_policy"))
        plan.base.selection_policy = parse_policy(j["selection_policy"], "config.selection_policy");

    plan.base.delegator = parse_device(require(j, "delegator", "config"), "config.delegator");
    const json& workers = require(j, "workers", "config");
    if (!workers.is_array()) throw InvalidScenario("config.workers", "expected an array");
    for (std::size_t i = 0; i < workers.size(); ++i)
        plan.base.workers.push_back(
            parse_device(workers[i], "config.workers[" + std::to_string(i) + "]"));

    const json& tasks = require(j, "tasks", "config");
    if (!tasks.is_array() || tasks.empty())
        throw InvalidScenario("config.tasks", "expected a non-empty array");
    for (std::size_t i = 0; i < tasks.size(); ++i)
        plan.tasks.push_back(parse_task(tasks[i], "config.tasks[" + std::to_string(i) + "]"));

    plan.base.scenario = plan.scenario;
    // Validate everything except tasks now; tasks are realized per repetition.
    materialize(plan, plan.modes.front(), 0);
    return plan;
}

ExperimentPlan load_plan_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoFailure("cannot parse " + path.string() + ": " + e.what());
    }
    return load_plan_json(j);
}

json plan_to_json(const ExperimentPlan& plan) {
    json j;
    j["scenario"] = plan.scenario;
    if (!plan.preset.empty()) j["preset"] = plan.preset;
    j["repetitions"] = plan.repetitions;
    if (plan.privacy_sweep) {
        const auto& s = *plan.privacy_sweep;
        json sweep;
        sweep["true_counts"] = s.true_counts;
        sweep["epsilons"] = s.epsilons;
        sweep["sensitivity"] = s.sensitivity;
        sweep["error_trials"] = s.error_trials;
        sweep["precision_trials"] = s.precision_trials;
        sweep["seed"] = s.seed;
        j["privacy_sweep"] = std::move(sweep);
        return j;
    }
    json modes = json::array();
    for (Mode m : plan.modes) modes.push_back(mode_name(m));
    j["modes"] = std::move(modes);
    j["rng_seed"] = plan.base.rng_seed;
    j["iterations"] = plan.base.iterations;
    j["ledger_query_overhead_s"] = plan.base.ledger_query_overhead_s;
    j["privacy"] = {{"epsilon", plan.base.privacy.epsilon},
                    {"sensitivity", plan.base.privacy.sensitivity}};
    j["selection_policy"] = {
        {"cold_start",
         plan.base.selection_policy.cold_start == ColdStart::Optimistic ? "optimistic" : "strict"},
        {"optimism_eta", plan.base.selection_policy.optimism_eta},
        {"lambda_window", plan.base.selection_policy.lambda_window},
        {"failure_threshold", plan.base.selection_policy.failure_threshold}};
    j["delegator"] = device_to_json(plan.base.delegator);
    json workers = json::array();
    for (const auto& w : plan.base.workers) workers.push_back(device_to_json(w));
    j["workers"] = std::move(workers);
    json tasks = json::array();
    for (const auto& t : plan.tasks) tasks.push_back(task_to_json(t));
    j["tasks"] = std::move(tasks);
    return j;
}

void save_plan_file(const ExperimentPlan& plan, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << plan_to_json(plan).dump(2) << '\n';
    if (!out.flush()) throw IoFailure("write failed: " + path.string());
}

}  // namespace bdmec
