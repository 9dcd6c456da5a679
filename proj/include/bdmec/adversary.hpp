#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "bdmec/model.hpp"
#include "bdmec/sim.hpp"

namespace bdmec {

// Evidence the delegator extracts from one worker's iteration. Any raised
// flag marks the behavior factor for the selection gate.
struct AuditReport {
    std::string device_id;
    bool count_mismatch = false;   // jobs_claimed != jobs_verified
    bool id_fabrication = false;   // claimed_ids not a subset of assigned ids
    std::int64_t incomplete_chunks = 0;  // stolen but never returned
    std::int64_t deadline_violations = 0;
};

// Rewrites the claim fields of engine-produced ground truth according to the
// device's behavior. Never touches jobs_verified or verified_ids. Fabricated
// ids are max(assigned) + 1, +2, ... so reruns reproduce them exactly.
WorkerIterationStats apply_behavior(const BehaviorKind& behavior,
                                    const WorkerIterationStats& true_stats);

// Pure comparison of a worker's claims against what the delegator assigned
// and received. assigned_ids is the delegator-side record of the steals.
AuditReport audit_claims(const std::set<std::int64_t>& assigned_ids,
                         const WorkerIterationStats& stats,
                         const std::string& device_id);

}  // namespace bdmec
