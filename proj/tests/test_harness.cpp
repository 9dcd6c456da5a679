#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bdmec/config.hpp"
#include "bdmec/errors.hpp"
#include "bdmec/harness.hpp"
#include "helpers.hpp"

#include <nlohmann/json.hpp>

using namespace bdmec;
using helpers::device;

namespace fs = std::filesystem;

namespace {

ExperimentPlan mini_plan() {
    ExperimentPlan plan;
    plan.scenario = "mini";
    plan.modes = {Mode::Baseline, Mode::BdMEC};
    plan.repetitions = 2;
    plan.base.rng_seed = 5;
    plan.base.iterations = 3;
    plan.base.ledger_query_overhead_s = 0.05;
    plan.base.delegator = device("delegator", 2.0, 25e6, 0.01);
    plan.base.workers = {device("w-fast", 2.0, 25e6, 0.01),
                         device("w-slow", 0.2, 25e6, 0.01)};
    TaskGenSpec task;
    task.n_jobs = 100;
    task.payload_bytes = {1000, 2000};
    task.compute_cost = {0.9, 1.1};
    task.steal_chunk_size = 10;
    task.seed = 3;
    plan.tasks = {task};
    return plan;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("bdmec_test_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("summarize: zero variance collapses the interval") {
    const auto [mean, hw] = summarize({2, 2, 2, 2, 2});
    CHECK(mean == doctest::Approx(2.0));
    CHECK(hw == doctest::Approx(0.0));
}

TEST_CASE("summarize: two points use the t distribution with one dof") {
    const auto [mean, hw] = summarize({1.0, 3.0});
    CHECK(mean == doctest::Approx(2.0));
    // t(0.975, df=1) = 12.7062..., s = sqrt(2), n = 2 -> hw = t * s / sqrt(n)
    CHECK(hw == doctest::Approx(12.706204736174698).epsilon(1e-9));
}

TEST_CASE("summarize: a single row is insufficient") {
    CHECK_THROWS_AS(summarize({1.0}), InsufficientData);
    CHECK_THROWS_AS(summarize({}), InsufficientData);
}

TEST_CASE("run_scenario is deterministic and counts rows") {
    const auto plan = mini_plan();
    const auto config = materialize(plan, Mode::BdMEC, 0);
    const auto a = run_scenario(config, 5);
    const auto b = run_scenario(config, 5);
    REQUIRE(a.repetitions.size() == 15);  // 3 iterations x 5 repetitions
    REQUIRE(b.repetitions.size() == 15);
    for (std::size_t i = 0; i < a.repetitions.size(); ++i) {
        CHECK(a.repetitions[i].speed_gain == b.repetitions[i].speed_gain);
        CHECK(a.repetitions[i].seed == config.rng_seed + i / 3);
    }
}

TEST_CASE("baseline with capable honest workers always gains") {
    auto plan = mini_plan();
    plan.base.workers = {device("w1", 2.0, 25e6, 0.01), device("w2", 1.5, 25e6, 0.01)};
    const auto config = materialize(plan, Mode::Baseline, 0);
    const auto result = run_scenario(config, 3);
    for (const auto& row : result.repetitions) CHECK(row.speed_gain > 1.0);
}

TEST_CASE("baseline mode never touches ledger or audits") {
    const auto config = materialize(mini_plan(), Mode::Baseline, 0);
    const auto rep = run_repetition(config);
    CHECK(rep.ledger.chain(Channel::Delegator).size() == 1);  // genesis only
    CHECK(rep.ledger.chain(Channel::Worker).size() == 1);
    CHECK(rep.audits.empty());
    CHECK(rep.last_assessments.empty());
}

TEST_CASE("bdmec repetition records every participant on both channels") {
    const auto config = materialize(mini_plan(), Mode::BdMEC, 0);
    const auto rep = run_repetition(config);

    // iteration 1 probes both workers; the slow one is dropped afterwards
    const auto d_history =
        rep.ledger.query_worker_history(Channel::Delegator, "delegator");
    CHECK(static_cast<std::int64_t>(d_history.size()) == config.iterations);

    const auto slow_history = rep.ledger.query_worker_history(Channel::Delegator, "w-slow");
    REQUIRE(slow_history.size() == 1);
    CHECK(slow_history[0].iteration_id == 1);
    CHECK(slow_history[0].lambda == -1);

    // public channel has the same record count, with noised counts
    const auto slow_public = rep.ledger.query_worker_history(Channel::Worker, "w-slow");
    CHECK(slow_public.size() == slow_history.size());

    bool any_noised = false;
    for (const auto& record : rep.ledger.query_worker_history(Channel::Worker, "delegator"))
        if (record.jobs_executed != d_history[record.iteration_id - 1].jobs_executed)
            any_noised = true;
    CHECK(any_noised);

    CHECK(rep.ledger.verify_chain(Channel::Delegator).empty());
    CHECK(rep.ledger.verify_chain(Channel::Worker).empty());
}

TEST_CASE("selection drops the straggler and lifts the mean") {
    const auto run = run_plan(mini_plan());
    REQUIRE(run.result.uplift_percent.has_value());
    CHECK(*run.result.uplift_percent > 0.0);

    double base_mean = 0.0, bdmec_mean = 0.0;
    for (const auto& s : run.result.summary) {
        if (s.iteration_id != 0) continue;
        (s.mode == Mode::Baseline ? base_mean : bdmec_mean) = s.mean;
    }
    CHECK(bdmec_mean > base_mean);
}

TEST_CASE("a fully flagged pool falls back to local execution") {
    auto plan = mini_plan();
    plan.base.workers = {device("w-lag1", 2.0, 25e6, 0.01, DelayInjector{60.0}),
                         device("w-lag2", 1.5, 25e6, 0.01, DelayInjector{60.0})};
    const auto config = materialize(plan, Mode::BdMEC, 0);
    const auto rep = run_repetition(config);
    REQUIRE(static_cast<std::int64_t>(rep.outcomes.size()) == config.iterations);
    for (std::size_t i = 1; i < rep.outcomes.size(); ++i) {
        CHECK(rep.outcomes[i].speed_gain == doctest::Approx(1.0).epsilon(1e-12));
        // only the delegator appears once the pool is quarantined
        CHECK(rep.outcomes[i].worker_stats.size() == 1);
    }
    for (const auto* id : {"w-lag1", "w-lag2"}) {
        const auto history = rep.ledger.query_worker_history(Channel::Delegator, id);
        REQUIRE(history.size() == 1);
        CHECK(history[0].iteration_id == 1);
        CHECK(history[0].lambda == -1);
    }
}

TEST_CASE("unknown preset is rejected") {
    CHECK_THROWS_AS(preset_plan("speed-gains"), UnknownPreset);
    for (const auto& name : preset_names()) CHECK(preset_plan(name).scenario == name);
}

TEST_CASE("manifest round trip reproduces every output byte for byte") {
    TempDir dir_a("manifest_a");
    TempDir dir_b("manifest_b");
    const auto out_a = run_plan_to_dir(mini_plan(), dir_a.path);
    const auto plan_b = load_plan_file(dir_a.path / "manifest.json");
    const auto out_b = run_plan_to_dir(plan_b, dir_b.path);
    REQUIRE(out_a.files.size() == out_b.files.size());
    for (const auto& file : out_a.files) {
        const auto twin = dir_b.path / file.filename();
        INFO(file.string());
        CHECK(slurp(file) == slurp(twin));
    }
}

TEST_CASE("iteration override produces single-iteration csv rows") {
    TempDir dir("override");
    PresetOverrides overrides;
    overrides.iterations = 1;
    overrides.repetitions = 2;
    // trim the preset to keep the unit suite fast
    auto plan = preset_plan("speed-gain");
    plan.base.iterations = 1;
    plan.repetitions = 2;
    std::get<TaskGenSpec>(plan.tasks[0]).n_jobs = 200;
    run_plan_to_dir(plan, dir.path);

    std::ifstream results(dir.path / "results.csv");
    std::string line;
    std::getline(results, line);
    CHECK(line == "scenario,mode,seed,iteration,speed_gain");
    int rows = 0;
    while (std::getline(results, line)) {
        CHECK(line.find(",1,") != std::string::npos);  // iteration column
        ++rows;
    }
    CHECK(rows == 4);  // 2 modes x 2 repetitions x 1 iteration
}

TEST_CASE("privacy plans emit privacy.csv") {
    TempDir dir("privacy");
    auto plan = preset_plan("privacy-tradeoff");
    plan.privacy_sweep->error_trials = 200;
    plan.privacy_sweep->precision_trials = 100;
    const auto out = run_plan_to_dir(plan, dir.path);
    bool has_privacy = false;
    for (const auto& f : out.files)
        if (f.filename() == "privacy.csv") has_privacy = true;
    CHECK(has_privacy);
    const auto csv = slurp(dir.path / "privacy.csv");
    CHECK(csv.find("epsilon,worker_id,mean_R_percent,P_percent,trials,seed") == 0);
    // 5 epsilons x 2 workers + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}

TEST_CASE("config loader fails closed on unknown keys") {
    nlohmann::json j = plan_to_json(mini_plan());
    j["wat"] = 1;
    CHECK_THROWS_AS(load_plan_json(j), InvalidScenario);

    nlohmann::json nested = plan_to_json(mini_plan());
    nested["delegator"]["battery"] = 0.5;
    CHECK_THROWS_AS(load_plan_json(nested), InvalidScenario);

    nlohmann::json task_key = plan_to_json(mini_plan());
    task_key["tasks"][0]["generate"]["color"] = "red";
    CHECK_THROWS_AS(load_plan_json(task_key), InvalidScenario);
}

TEST_CASE("config loader requires the scenario sections") {
    nlohmann::json j = plan_to_json(mini_plan());
    j.erase("delegator");
    CHECK_THROWS_AS(load_plan_json(j), InvalidScenario);
}

TEST_CASE("plan json round trips") {
    const auto plan = mini_plan();
    const auto j = plan_to_json(plan);
    const auto back = load_plan_json(j);
    CHECK(back.scenario == plan.scenario);
    CHECK(back.repetitions == plan.repetitions);
    CHECK(back.modes.size() == 2);
    CHECK(back.base.workers.size() == 2);
    CHECK(back.base.workers[1].processing_rate == plan.base.workers[1].processing_rate);
    CHECK(plan_to_json(back) == j);
}

TEST_CASE("behavior variants survive the json round trip") {
    auto plan = mini_plan();
    plan.base.workers[0].behavior = DelayInjector{50.0};
    plan.base.workers[1].behavior = CountInflator{5};
    const auto back = load_plan_json(plan_to_json(plan));
    CHECK(std::get<DelayInjector>(back.base.workers[0].behavior).delay_s == 50.0);
    CHECK(std::get<CountInflator>(back.base.workers[1].behavior).extra_jobs == 5);
}
