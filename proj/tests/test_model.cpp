#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bdmec/errors.hpp"
#include "bdmec/model.hpp"
#include "helpers.hpp"

using namespace bdmec;
using helpers::device;
using helpers::uniform_task;

namespace {

ScenarioConfig small_config() {
    ScenarioConfig c;
    c.delegator = device("delegator", 2.0);
    c.workers = {device("w1", 2.0), device("w2", 1.5), device("w3", 1.0), device("w4", 0.5)};
    c.tasks = {uniform_task(10, 1.0, 100, 2, 64)};
    c.iterations = 3;
    return c;
}

}  // namespace

TEST_CASE("well formed config validates unchanged") {
    const auto c = small_config();
    const auto v = validate_scenario(c);
    CHECK(v.workers.size() == 4);
    CHECK(v.tasks.size() == 1);
    CHECK(v.iterations == 3);
}

TEST_CASE("validate_scenario is idempotent") {
    const auto once = validate_scenario(small_config());
    const auto twice = validate_scenario(once);
    CHECK(twice.workers.size() == once.workers.size());
    CHECK(twice.rng_seed == once.rng_seed);
}

TEST_CASE("zero chunk size is rejected") {
    auto c = small_config();
    c.tasks[0].steal_chunk_size = 0;
    try {
        validate_scenario(c);
        FAIL("expected InvalidScenario");
    } catch (const InvalidScenario& e) {
        CHECK(e.field() == "steal_chunk_size");
        CHECK(e.reason() == "must be >= 1");
    }
}

TEST_CASE("duplicate worker ids are rejected") {
    auto c = small_config();
    c.workers[2].device_id = "w1";
    try {
        validate_scenario(c);
        FAIL("expected InvalidScenario");
    } catch (const InvalidScenario& e) {
        CHECK(e.field() == "workers");
    }
}

TEST_CASE("worker reusing the delegator id is rejected") {
    auto c = small_config();
    c.workers[0].device_id = "delegator";
    CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
}

TEST_CASE("invariant violations are caught field by field") {
    auto c = small_config();
    SUBCASE("empty jobs") {
        c.tasks[0].jobs.clear();
        CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
    }
    SUBCASE("non-positive compute cost") {
        c.tasks[0].jobs[0].compute_cost = 0.0;
        CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
    }
    SUBCASE("negative payload") {
        c.tasks[0].jobs[0].payload_bytes = -1;
        CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
    }
    SUBCASE("duplicate job ids") {
        c.tasks[0].jobs[1].job_id = c.tasks[0].jobs[0].job_id;
        CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
    }
    SUBCASE("zero iterations") {
        c.iterations = 0;
        CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
    }
    SUBCASE("empty worker pool") {
        c.workers.clear();
        CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
    }
    SUBCASE("zero processing rate") {
        c.workers[1].processing_rate = 0.0;
        CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
    }
    SUBCASE("negative latency") {
        c.delegator.link_latency_s = -0.1;
        CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
    }
    SUBCASE("bad epsilon") {
        c.privacy.epsilon = 0.0;
        CHECK_THROWS_AS(validate_scenario(c), InvalidScenario);
    }
}

TEST_CASE("generate_task draws sizes and costs from the requested ranges") {
    const auto task = generate_task(1000, {1 << 20, 2 << 20}, {0.8, 1.2}, 40, std::nullopt, 7);
    CHECK(task.jobs.size() == 1000);
    CHECK(task.steal_chunk_size == 40);
    for (std::size_t i = 0; i < task.jobs.size(); ++i) {
        CHECK(task.jobs[i].job_id == static_cast<std::int64_t>(i));
        CHECK(task.jobs[i].payload_bytes >= 1 << 20);
        CHECK(task.jobs[i].payload_bytes <= 2 << 20);
        CHECK(task.jobs[i].compute_cost >= 0.8);
        CHECK(task.jobs[i].compute_cost <= 1.2);
        CHECK(task.jobs[i].result_bytes == 64);
    }
    // default complexity: mean per-job compute cost
    CHECK(task.complexity ==
          doctest::Approx(task.total_compute_cost() / 1000.0).epsilon(1e-12));
}

TEST_CASE("degenerate payload range pins the value") {
    const auto task = generate_task(1, {4096, 4096}, {1.0, 1.0}, 1, 2.5, 9);
    CHECK(task.jobs.size() == 1);
    CHECK(task.jobs[0].payload_bytes == 4096);
    CHECK(task.jobs[0].compute_cost == doctest::Approx(1.0));
    CHECK(task.complexity == doctest::Approx(2.5));
}

TEST_CASE("generate_task is a pure function of its arguments") {
    const auto a = generate_task(200, {100, 5000}, {0.5, 2.0}, 10, std::nullopt, 77);
    const auto b = generate_task(200, {100, 5000}, {0.5, 2.0}, 10, std::nullopt, 77);
    REQUIRE(a.jobs.size() == b.jobs.size());
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        CHECK(a.jobs[i].payload_bytes == b.jobs[i].payload_bytes);
        CHECK(a.jobs[i].compute_cost == b.jobs[i].compute_cost);  // bitwise
    }
    const auto c = generate_task(200, {100, 5000}, {0.5, 2.0}, 10, std::nullopt, 78);
    bool any_differs = false;
    for (std::size_t i = 0; i < a.jobs.size(); ++i)
        if (a.jobs[i].payload_bytes != c.jobs[i].payload_bytes) any_differs = true;
    CHECK(any_differs);
}

TEST_CASE("generate_task rejects malformed ranges") {
    CHECK_THROWS_AS(generate_task(0, {0, 1}, {1, 2}, 1, std::nullopt, 0), InvalidRange);
    CHECK_THROWS_AS(generate_task(5, {10, 1}, {1, 2}, 1, std::nullopt, 0), InvalidRange);
    CHECK_THROWS_AS(generate_task(5, {0, 1}, {2, 1}, 1, std::nullopt, 0), InvalidRange);
    CHECK_THROWS_AS(generate_task(5, {0, 1}, {0.0, 1.0}, 1, std::nullopt, 0), InvalidRange);
    CHECK_THROWS_AS(generate_task(5, {0, 1}, {1, 2}, 0, std::nullopt, 0), InvalidRange);
}
