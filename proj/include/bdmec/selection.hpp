#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "bdmec/adversary.hpp"
#include "bdmec/ledger.hpp"
#include "bdmec/model.hpp"

namespace bdmec {

struct Contribution {
    std::int64_t iteration_id = 0;
    double wc = 0.0;          // worker's share of that iteration's jobs, in [0, 1]
    double complexity = 1.0;  // task complexity c_k of that iteration
    double iteration_speed_gain = 1.0;
};

struct WorkerAssessment {
    std::string worker_id;
    double fractional_speed_gain = 0.0;  // S_i
    int lambda = 1;                      // +1 or -1
    std::int64_t history_length = 0;
    std::vector<Contribution> contributions;
};

// The delegator's private audit evidence, one report per audited iteration
// in chronological order.
using AuditArchive = std::map<std::string, std::vector<AuditReport>>;

// jobs_by_worker / total_jobs. Throws ZeroTotalJobs.
double fractional_contribution(std::int64_t jobs_by_worker, std::int64_t total_jobs);

// Weighted mean of historical speed gains, weight c_k * Wc_k per entry.
// Returns 0 when every weight is zero (including the empty history).
double fractional_speed_gain(const std::vector<Contribution>& contributions);

// -1 iff, within the last `lambda_window` reports: any count mismatch, any
// id fabrication, any deadline violation, or incomplete chunks summing to at
// least `failure_threshold`. Otherwise +1.
int evaluate_lambda(const std::vector<AuditReport>& audit_history, const SelectionPolicy& policy);

// Descending by S_i, ties by worker_id ascending. Input is not modified.
std::vector<WorkerAssessment> find_max(std::vector<WorkerAssessment> assessments);

struct SelectionDecision {
    bool local_execution = false;
    std::vector<std::string> selected;             // gate passers, find_max order
    std::vector<WorkerAssessment> assessments;     // every pool member, find_max order
};

// Algorithm 1. Builds assessments from the delegator channel (true counts)
// plus the audit archive, applies the cold-start policy to workers without
// history, and admits those with S_i > 1 and lambda = +1. Throws
// LedgerUnavailable when the store is disconnected: writes can be deferred
// offline, selection reads cannot.
SelectionDecision select_workers(const std::vector<std::string>& pool,
                                 const LedgerStore& ledger,
                                 const AuditArchive& audits,
                                 const SelectionPolicy& policy);

// Post-mortem dump: worker_id, fractional_speed_gain, lambda, history_length.
void write_assessment_csv(const std::vector<WorkerAssessment>& assessments, std::ostream& out);

}  // namespace bdmec
