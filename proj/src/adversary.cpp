#include "bdmec/adversary.hpp"

#include <algorithm>

namespace bdmec {

WorkerIterationStats apply_behavior(const BehaviorKind& behavior,
                                    const WorkerIterationStats& true_stats) {
    WorkerIterationStats stats = true_stats;
    if (const auto* inflate = std::get_if<CountInflator>(&behavior)) {
        stats.jobs_claimed += inflate->extra_jobs;
    } else if (const auto* fab = std::get_if<IdFabricator>(&behavior)) {
        std::int64_t next = 0;
        if (!stats.assigned_ids.empty()) next = *stats.assigned_ids.rbegin() + 1;
        for (std::int64_t i = 0; i < fab->fabricated_ids; ++i)
            stats.claimed_ids.insert(next + i);
        stats.jobs_claimed = static_cast<std::int64_t>(stats.claimed_ids.size());
    }
    // Honest and DelayInjector claims are truthful; the injector's effect is
    // temporal and already applied inside the engine.
    return stats;
}

AuditReport audit_claims(const std::set<std::int64_t>& assigned_ids,
                         const WorkerIterationStats& stats,
                         const std::string& device_id) {
    AuditReport report;
    report.device_id = device_id;
    report.count_mismatch = stats.jobs_claimed != stats.jobs_verified;
    report.id_fabrication =
        !std::includes(assigned_ids.begin(), assigned_ids.end(),
                       stats.claimed_ids.begin(), stats.claimed_ids.end());
    report.incomplete_chunks = stats.chunks_stolen - stats.chunks_returned;
    report.deadline_violations = stats.deadline_violations;
    return report;
}

}  // namespace bdmec
