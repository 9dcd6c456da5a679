#include "bdmec/selection.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "bdmec/errors.hpp"

namespace bdmec {

double fractional_contribution(std::int64_t jobs_by_worker, std::int64_t total_jobs) {
    if (total_jobs <= 0) throw ZeroTotalJobs("total_jobs must be > 0");
    return static_cast<double>(jobs_by_worker) / static_cast<double>(total_jobs);
}

double fractional_speed_gain(const std::vector<Contribution>& contributions) {
    double weighted = 0.0;
    double weights = 0.0;
    for (const auto& c : contributions) {
        const double w = c.complexity * c.wc;
        weighted += w * c.iteration_speed_gain;
        weights += w;
    }
    if (weights == 0.0) return 0.0;
    return weighted / weights;
}

int evaluate_lambda(const std::vector<AuditReport>& audit_history,
                    const SelectionPolicy& policy) {
    const std::size_t window = static_cast<std::size_t>(policy.lambda_window);
    const std::size_t begin =
        audit_history.size() > window ? audit_history.size() - window : 0;
    std::int64_t incomplete = 0;
    for (std::size_t i = begin; i < audit_history.size(); ++i) {
        const auto& report = audit_history[i];
        if (report.count_mismatch || report.id_fabrication) return -1;
        if (report.deadline_violations > 0) return -1;
        incomplete += report.incomplete_chunks;
    }
    if (incomplete >= policy.failure_threshold) return -1;
    return 1;
}

std::vector<WorkerAssessment> find_max(std::vector<WorkerAssessment> assessments) {
    std::sort(assessments.begin(), assessments.end(),
              [](const WorkerAssessment& a, const WorkerAssessment& b) {
                  if (a.fractional_speed_gain != b.fractional_speed_gain)
                      return a.fractional_speed_gain > b.fractional_speed_gain;
                  return a.worker_id < b.worker_id;
              });
    return assessments;
}

SelectionDecision select_workers(const std::vector<std::string>& pool,
                                 const LedgerStore& ledger,
                                 const AuditArchive& audits,
                                 const SelectionPolicy& policy) {
    if (!ledger.connected())
        throw LedgerUnavailable("selection requires a connected ledger");

    // Total verified jobs per iteration, reconstructed from the delegator
    // channel (every participant, the delegator included, has a record).
    std::map<std::int64_t, std::int64_t> iteration_totals;
    for (const auto& block : ledger.chain(Channel::Delegator))
        for (const auto& record : block.records)
            iteration_totals[record.iteration_id] += record.jobs_executed;

    std::vector<WorkerAssessment> assessments;
    std::set<std::string> seen;
    for (const auto& worker_id : pool) {
        if (!seen.insert(worker_id).second) continue;
        WorkerAssessment a;
        a.worker_id = worker_id;

        const auto history = ledger.query_worker_history(Channel::Delegator, worker_id);
        a.history_length = static_cast<std::int64_t>(history.size());
        for (const auto& record : history) {
            Contribution c;
            c.iteration_id = record.iteration_id;
            c.wc = fractional_contribution(record.jobs_executed,
                                           iteration_totals.at(record.iteration_id));
            c.complexity = record.task_complexity;
            c.iteration_speed_gain = record.speed_gain;
            a.contributions.push_back(c);
        }

        if (history.empty()) {
            a.fractional_speed_gain =
                policy.cold_start == ColdStart::Optimistic ? 1.0 + policy.optimism_eta : 0.0;
        } else {
            a.fractional_speed_gain = fractional_speed_gain(a.contributions);
        }

        const auto audit_it = audits.find(worker_id);
        a.lambda = evaluate_lambda(
            audit_it == audits.end() ? std::vector<AuditReport>{} : audit_it->second, policy);

        assessments.push_back(std::move(a));
    }

    SelectionDecision decision;
    decision.assessments = find_max(std::move(assessments));
    for (const auto& a : decision.assessments)
        if (a.fractional_speed_gain > 1.0 && a.lambda > 0)
            decision.selected.push_back(a.worker_id);
    decision.local_execution = decision.selected.empty();
    return decision;
}

void write_assessment_csv(const std::vector<WorkerAssessment>& assessments, std::ostream& out) {
    out << "worker_id,fractional_speed_gain,lambda,history_length\n";
    char buf[64];
    for (const auto& a : assessments) {
        std::snprintf(buf, sizeof buf, "%.6f,%d,%lld", a.fractional_speed_gain, a.lambda,
                      static_cast<long long>(a.history_length));
        out << a.worker_id << ',' << buf << '\n';
    }
}

}  // namespace bdmec
