#include "bdmec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "bdmec/adversary.hpp"
#include "bdmec/errors.hpp"
#include "bdmec/privacy.hpp"
#include "bdmec/rng.hpp"

namespace bdmec {

namespace {

// Stream tags for deriving independent per-iteration rng streams.
constexpr std::uint64_t kNoiseStream = 0x6e6f697365;  // "noise"
constexpr std::uint64_t kSimStream = 0x73696d;        // "sim"

std::string fmt(double v, const char* format = "%.9f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

}  // namespace

std::pair<double, double> summarize(const std::vector<double>& values) {
    if (values.size() < 2)
        throw InsufficientData("summarize needs at least two values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double variance = ss / (n - 1.0);
    boost::math::students_t dist(n - 1.0);
    const double t = boost::math::quantile(dist, 0.975);
    return {mean, t * std::sqrt(variance / n)};
}

RepetitionArtifacts run_repetition(const ScenarioConfig& config) {
    RepetitionArtifacts rep;
    rep.mode = config.mode;
    rep.seed = config.rng_seed;

    std::vector<std::string> pool;
    std::map<std::string, const DeviceProfile*> by_id;
    for (const auto& w : config.workers) {
        pool.push_back(w.device_id);
        by_id[w.device_id] = &w;
    }

    std::int64_t logical_clock = 0;
    for (std::int64_t iter = 1; iter <= config.iterations; ++iter) {
        const TaskSpec& task =
            config.tasks[static_cast<std::size_t>((iter - 1) % static_cast<std::int64_t>(
                                                      config.tasks.size()))];

        std::vector<DeviceProfile> selected;
        std::vector<double> overheads;
        if (config.mode == Mode::BdMEC) {
            const auto decision =
                select_workers(pool, rep.ledger, rep.audits, config.selection_policy);
            rep.last_assessments = decision.assessments;
            for (const auto& id : decision.selected) selected.push_back(*by_id.at(id));
            overheads.assign(selected.size(), config.ledger_query_overhead_s);
        } else {
            selected = config.workers;  // Honeybee accepts every connection
        }

        IterationOutcome outcome =
            simulate_shared(task, config.delegator, selected, overheads,
                            derive_seed(config.rng_seed, kSimStream + static_cast<std::uint64_t>(iter)));
        outcome.iteration_id = iter;

        if (config.mode == Mode::BdMEC) {
            Rng noise_rng(derive_seed(config.rng_seed,
                                      kNoiseStream + static_cast<std::uint64_t>(iter)));
            // Audit the selected workers, then record every participant
            // (delegator first) on both channels.
            std::vector<std::pair<std::string, int>> participants;
            participants.emplace_back(config.delegator.device_id, 1);
            for (const auto& w : selected) {
                const auto& truth = outcome.worker_stats.at(w.device_id);
                const auto claimed = apply_behavior(w.behavior, truth);
                rep.audits[w.device_id].push_back(
                    audit_claims(truth.assigned_ids, claimed, w.device_id));
                participants.emplace_back(
                    w.device_id,
                    evaluate_lambda(rep.audits[w.device_id], config.selection_policy));
            }
            for (const auto& [device_id, lambda] : participants) {
                const auto& stats = outcome.worker_stats.at(device_id);
                TransactionRecord record;
                record.iteration_id = iter;
                record.task_id = task.task_id;
                record.worker_id = device_id;
                record.jobs_executed = stats.jobs_verified;
                record.speed_gain = outcome.speed_gain;
                record.steal_chunk_size = task.steal_chunk_size;
                record.location = device_id == config.delegator.device_id
                                      ? config.delegator.location
                                      : by_id.at(device_id)->location;
                record.lambda = lambda;
                record.task_complexity = task.complexity;
                record.timestamp = logical_clock++;
                rep.ledger.append_transaction(Channel::Delegator, record);

                TransactionRecord noised = record;
                noised.jobs_executed =
                    perturb_count(stats.jobs_verified, config.privacy, noise_rng);
                rep.ledger.append_transaction(Channel::Worker, noised);
            }
        }

        rep.outcomes.push_back(std::move(outcome));
    }
    return rep;
}

namespace {

void append_summaries(ExperimentResult& result, const std::vector<Mode>& modes) {
    // Per-iteration means per mode, then an overall row per mode.
    std::map<std::pair<Mode, std::int64_t>, std::vector<double>> cells;
    std::map<Mode, std::vector<double>> totals;
    std::int64_t max_iter = 0;
    for (const auto& row : result.repetitions) {
        cells[{row.mode, row.iteration_id}].push_back(row.speed_gain);
        totals[row.mode].push_back(row.speed_gain);
        max_iter = std::max(max_iter, row.iteration_id);
    }
    for (Mode mode : modes) {
        for (std::int64_t it = 1; it <= max_iter; ++it) {
            const auto found = cells.find({mode, it});
            if (found == cells.end()) continue;
            const auto& values = found->second;
            IterationSummary s;
            s.mode = mode;
            s.iteration_id = it;
            if (values.size() >= 2) {
                std::tie(s.mean, s.ci95_halfwidth) = summarize(values);
            } else {
                s.mean = values.front();
                s.ci95_halfwidth = 0.0;
            }
            result.summary.push_back(s);
        }
        const auto& all = totals[mode];
        if (all.empty()) continue;
        IterationSummary overall;
        overall.mode = mode;
        overall.iteration_id = 0;
        if (all.size() >= 2) {
            std::tie(overall.mean, overall.ci95_halfwidth) = summarize(all);
        } else {
            overall.mean = all.front();
        }
        result.summary.push_back(overall);
    }

    // Mean per-iteration percentage change, BdMEC over Baseline.
    double sum_pct = 0.0;
    std::int64_t pct_count = 0;
    for (std::int64_t it = 1; it <= max_iter; ++it) {
        const auto base = cells.find({Mode::Baseline, it});
        const auto bdmec = cells.find({Mode::BdMEC, it});
        if (base == cells.end() || bdmec == cells.end()) continue;
        double base_mean = 0.0;
        for (double v : base->second) base_mean += v;
        base_mean /= static_cast<double>(base->second.size());
        double bdmec_mean = 0.0;
        for (double v : bdmec->second) bdmec_mean += v;
        bdmec_mean /= static_cast<double>(bdmec->second.size());
        sum_pct += (bdmec_mean - base_mean) / base_mean * 100.0;
        ++pct_count;
    }
    if (pct_count > 0) result.uplift_percent = sum_pct / static_cast<double>(pct_count);
}

}  // namespace

ExperimentResult run_scenario(const ScenarioConfig& config, std::int64_t repetitions) {
    if (repetitions < 1) throw Error("repetitions must be >= 1");
    const ScenarioConfig validated = validate_scenario(config);
    ExperimentResult result;
    result.scenario = validated.scenario;
    for (std::int64_t r = 0; r < repetitions; ++r) {
        ScenarioConfig cell = validated;
        cell.rng_seed = validated.rng_seed + static_cast<std::uint64_t>(r);
        const auto rep = run_repetition(cell);
        for (const auto& outcome : rep.outcomes)
            result.repetitions.push_back(
                {cell.rng_seed, cell.mode, outcome.iteration_id, outcome.speed_gain});
    }
    append_summaries(result, {validated.mode});
    return result;
}

PlanResult run_plan(const ExperimentPlan& plan) {
    if (plan.privacy_sweep) throw Error("run_plan expects a simulation plan");
    PlanResult out;
    out.result.scenario = plan.scenario;
    for (Mode mode : plan.modes) {
        for (std::int64_t r = 0; r < plan.repetitions; ++r) {
            const ScenarioConfig config = materialize(plan, mode, r);
            auto rep = run_repetition(config);
            for (const auto& outcome : rep.outcomes)
                out.result.repetitions.push_back(
                    {config.rng_seed, mode, outcome.iteration_id, outcome.speed_gain});
            out.artifacts.push_back(std::move(rep));
        }
    }
    append_summaries(out.result, plan.modes);
    return out;
}

namespace {

// Devices shared by the simulation presets: one delegator, three capable
// workers, one markedly slower device. Rates are synthetic desk-scale stand-
// ins; only the trends they produce are meaningful.
DeviceProfile preset_device(const std::string& id, double rate, const std::string& location,
                            BehaviorKind behavior = Honest{}) {
    DeviceProfile d;
    d.device_id = id;
    d.processing_rate = rate;
    d.bandwidth_bps = 50e6;
    d.link_latency_s = 0.3;
    d.behavior = behavior;
    d.location = location;
    return d;
}

ExperimentPlan simulation_preset(const std::string& name) {
    ExperimentPlan plan;
    plan.scenario = name;
    plan.preset = name;
    plan.modes = {Mode::Baseline, Mode::BdMEC};
    plan.repetitions = 5;
    plan.base.rng_seed = 42;
    plan.base.iterations = 5;
    plan.base.ledger_query_overhead_s = 0.2;
    plan.base.privacy = {0.5, 1.0};
    plan.base.delegator = preset_device("delegator", 2.0, "desk-0");
    plan.base.workers = {
        preset_device("worker-1", 4.5, "desk-1"),
        preset_device("worker-2", 4.0, "desk-2"),
        preset_device("worker-3", 2.2, "desk-3"),
        preset_device("worker-4", 0.25, "desk-4"),  // the slow device
    };
    return plan;
}

TaskGenSpec large_image_task() {
    TaskGenSpec t;
    t.n_jobs = 1000;
    t.payload_bytes = {1 << 20, 2 << 20};  // 1-2 MB
    t.compute_cost = {0.8, 1.2};
    t.steal_chunk_size = 40;
    t.seed = 101;
    return t;
}

}  // namespace

ExperimentPlan preset_plan(const std::string& name) {
    if (name == "speed-gain") {
        auto plan = simulation_preset(name);
        plan.tasks = {large_image_task()};
        return plan;
    }
    if (name == "malicious") {
        auto plan = simulation_preset(name);
        plan.base.workers[2].behavior = DelayInjector{50.0};  // 50,000 ms
        plan.tasks = {large_image_task()};
        return plan;
    }
    if (name == "small-jobs") {
        auto plan = simulation_preset(name);
        TaskGenSpec t;
        t.n_jobs = 4000;
        t.payload_bytes = {10 << 10, 700 << 10};  // 10-700 KB
        t.compute_cost = {0.0096, 0.0144};
        t.steal_chunk_size = 40;
        t.seed = 202;
        plan.tasks = {t};
        return plan;
    }
    if (name == "privacy-tradeoff") {
        ExperimentPlan plan;
        plan.scenario = name;
        plan.preset = name;
        plan.repetitions = 1;
        PrivacySweepSpec sweep;
        sweep.true_counts = {{"worker-1", 316}, {"worker-2", 217}};
        sweep.epsilons = {0.01, 0.1, 0.5, 1.0, 2.0};
        sweep.sensitivity = 1.0;
        sweep.error_trials = 100000;
        sweep.precision_trials = 10000;
        sweep.seed = 42;
        plan.privacy_sweep = sweep;
        return plan;
    }
    throw UnknownPreset("unknown preset: " + name +
                        " (expected speed-gain, malicious, small-jobs, privacy-tradeoff)");
}

std::vector<std::string> preset_names() {
    return {"speed-gain", "malicious", "small-jobs", "privacy-tradeoff"};
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << contents;
    if (!out.flush()) throw IoFailure("write failed: " + path.string());
}

std::string results_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "scenario,mode,seed,iteration,speed_gain\n";
    for (const auto& row : result.repetitions) {
        out << result.scenario << ',' << mode_name(row.mode) << ',' << row.seed << ','
            << row.iteration_id << ',' << fmt(row.speed_gain) << '\n';
    }
    return out.str();
}

std::string summary_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "scenario,mode,iteration,mean_speed_gain,ci95_halfwidth,uplift_percent\n";
    for (const auto& s : result.summary) {
        out << result.scenario << ',' << mode_name(s.mode) << ',';
        if (s.iteration_id == 0)
            out << "overall";
        else
            out << s.iteration_id;
        out << ',' << fmt(s.mean) << ',' << fmt(s.ci95_halfwidth) << ',';
        if (s.iteration_id == 0 && s.mode == Mode::BdMEC && result.uplift_percent)
            out << fmt(*result.uplift_percent, "%.4f");
        out << '\n';
    }
    return out.str();
}

}  // namespace

RunOutput run_plan_to_dir(const ExperimentPlan& plan, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    RunOutput output;

    const auto manifest_path = out_dir / "manifest.json";
    save_plan_file(plan, manifest_path);
    output.files.push_back(manifest_path);

    if (plan.privacy_sweep) {
        const auto& sweep = *plan.privacy_sweep;
        const auto rows = privacy_sweep(sweep.true_counts, sweep.epsilons, sweep.sensitivity,
                                        sweep.error_trials, sweep.precision_trials, sweep.seed);
        std::ostringstream csv;
        write_privacy_csv(rows, csv);
        const auto path = out_dir / "privacy.csv";
        write_file(path, csv.str());
        output.files.push_back(path);
        return output;
    }

    const PlanResult run = run_plan(plan);
    const auto results_path = out_dir / "results.csv";
    write_file(results_path, results_csv(run.result));
    output.files.push_back(results_path);

    const auto summary_path = out_dir / "summary.csv";
    write_file(summary_path, summary_csv(run.result));
    output.files.push_back(summary_path);

    // Final BdMEC repetition: export its ledger and assessment dump.
    for (auto it = run.artifacts.rbegin(); it != run.artifacts.rend(); ++it) {
        if (it->mode != Mode::BdMEC) continue;
        const auto ledger_path = out_dir / "ledger.txt";
        it->ledger.export_file(ledger_path);
        output.files.push_back(ledger_path);
        std::ostringstream csv;
        write_assessment_csv(it->last_assessments, csv);
        const auto assess_path = out_dir / "assessments.csv";
        write_file(assess_path, csv.str());
        output.files.push_back(assess_path);
        break;
    }
    return output;
}

RunOutput run_preset(const std::string& name, const PresetOverrides& overrides,
                     const std::filesystem::path& out_dir) {
    ExperimentPlan plan = preset_plan(name);
    if (overrides.seed) {
        plan.base.rng_seed = *overrides.seed;
        if (plan.privacy_sweep) plan.privacy_sweep->seed = *overrides.seed;
    }
    if (overrides.repetitions) plan.repetitions = *overrides.repetitions;
    if (overrides.iterations) plan.base.iterations = *overrides.iterations;
    return run_plan_to_dir(plan, out_dir);
}

}  // namespace bdmec
