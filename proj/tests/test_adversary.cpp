#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bdmec/adversary.hpp"
#include "bdmec/rng.hpp"
#include "bdmec/sim.hpp"
#include "helpers.hpp"

using namespace bdmec;
using helpers::device;
using helpers::uniform_task;

namespace {

WorkerIterationStats honest_stats(std::int64_t first_id, std::int64_t count) {
    WorkerIterationStats s;
    for (std::int64_t i = first_id; i < first_id + count; ++i) {
        s.assigned_ids.insert(i);
        s.verified_ids.insert(i);
        s.claimed_ids.insert(i);
    }
    s.jobs_verified = count;
    s.jobs_claimed = count;
    s.chunks_stolen = 1;
    s.chunks_returned = 1;
    return s;
}

}  // namespace

TEST_CASE("honest behavior is the identity") {
    const auto truth = honest_stats(0, 40);
    const auto out = apply_behavior(Honest{}, truth);
    CHECK(out.jobs_claimed == 40);
    CHECK(out.claimed_ids == truth.claimed_ids);
    CHECK(out.jobs_verified == truth.jobs_verified);
}

TEST_CASE("count inflator reports more jobs than processed") {
    const auto out = apply_behavior(CountInflator{5}, honest_stats(0, 40));
    CHECK(out.jobs_claimed == 45);
    CHECK(out.jobs_verified == 40);  // ground truth untouched
}

TEST_CASE("id fabricator claims ids outside the assigned set") {
    const auto truth = honest_stats(0, 40);  // assigned ids 0..39
    const auto out = apply_behavior(IdFabricator{2}, truth);
    CHECK(out.claimed_ids.size() == 42);
    CHECK(out.claimed_ids.count(40) == 1);
    CHECK(out.claimed_ids.count(41) == 1);
    for (auto id : out.claimed_ids)
        if (id >= 40) CHECK(truth.assigned_ids.count(id) == 0);
    // deterministic on rerun
    const auto again = apply_behavior(IdFabricator{2}, truth);
    CHECK(again.claimed_ids == out.claimed_ids);
}

TEST_CASE("delay injector claims stay truthful") {
    const auto truth = honest_stats(0, 40);
    const auto out = apply_behavior(DelayInjector{50.0}, truth);
    CHECK(out.jobs_claimed == truth.jobs_claimed);
    CHECK(out.claimed_ids == truth.claimed_ids);
}

TEST_CASE("apply_behavior never alters ground truth") {
    Rng rng(555);
    for (int trial = 0; trial < 40; ++trial) {
        const auto truth = honest_stats(rng.uniform_int(0, 100), rng.uniform_int(1, 60));
        for (const BehaviorKind behavior :
             {BehaviorKind{Honest{}}, BehaviorKind{DelayInjector{1.0}},
              BehaviorKind{CountInflator{rng.uniform_int(1, 9)}},
              BehaviorKind{IdFabricator{rng.uniform_int(1, 9)}}}) {
            const auto out = apply_behavior(behavior, truth);
            CHECK(out.jobs_verified == truth.jobs_verified);
            CHECK(out.verified_ids == truth.verified_ids);
        }
    }
}

TEST_CASE("audit flags a count mismatch") {
    const auto truth = honest_stats(0, 40);
    const auto claimed = apply_behavior(CountInflator{5}, truth);
    const auto report = audit_claims(truth.assigned_ids, claimed, "w");
    CHECK(report.count_mismatch);
    CHECK_FALSE(report.id_fabrication);
    CHECK(report.device_id == "w");
}

TEST_CASE("audit is clear for a truthful worker") {
    const auto truth = honest_stats(0, 40);
    const auto report = audit_claims(truth.assigned_ids, truth, "w");
    CHECK_FALSE(report.count_mismatch);
    CHECK_FALSE(report.id_fabrication);
    CHECK(report.incomplete_chunks == 0);
    CHECK(report.deadline_violations == 0);
}

TEST_CASE("audit flags fabricated ids") {
    const auto truth = honest_stats(0, 40);
    const auto claimed = apply_behavior(IdFabricator{2}, truth);
    const auto report = audit_claims(truth.assigned_ids, claimed, "w");
    CHECK(report.id_fabrication);
}

TEST_CASE("chunk stolen but never returned is incomplete") {
    // Worker whose response would land far past the iteration horizon.
    const auto task = uniform_task(10, 1.0, 0, 5);
    const auto d = device("d", 1.0);
    const auto w = device("w", 1.0, 1e9, 0.0, DelayInjector{1000.0});
    SimOptions options;
    options.horizon_s = 20.0;
    const auto out = simulate_shared(task, d, {w}, {}, 0, options);
    const auto& stats = out.worker_stats.at("w");
    const auto report = audit_claims(stats.assigned_ids, stats, "w");
    CHECK(report.incomplete_chunks == 1);
}

TEST_CASE("every modeled adversary trips at least one audit flag") {
    const auto truth = honest_stats(0, 40);

    const auto inflator_report =
        audit_claims(truth.assigned_ids, apply_behavior(CountInflator{1}, truth), "w");
    CHECK((inflator_report.count_mismatch || inflator_report.id_fabrication));

    const auto fabricator_report =
        audit_claims(truth.assigned_ids, apply_behavior(IdFabricator{1}, truth), "w");
    CHECK(fabricator_report.id_fabrication);

    // DelayInjector is temporal: the engine's deadline detector carries the
    // evidence into the report.
    const auto task = uniform_task(20, 1.0, 0, 10);
    const auto out = simulate_shared(task, device("d", 1.0),
                                     {device("w", 1.0, 1e9, 0.0, DelayInjector{60.0})}, {}, 0);
    const auto& stats = out.worker_stats.at("w");
    const auto delay_report = audit_claims(stats.assigned_ids, stats, "w");
    CHECK(delay_report.deadline_violations > 0);
}
