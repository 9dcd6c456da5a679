#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "bdmec/model.hpp"

namespace bdmec {

enum class EventKind { Steal, TransferStart, TransferEnd, ComputeEnd, ResultReceived };

const char* event_kind_name(EventKind k);

struct SimEvent {
    double timestamp_s = 0.0;
    EventKind kind = EventKind::Steal;
    std::string device_id;
    std::vector<std::int64_t> job_ids;
};

// Per-device result of one iteration. The engine reports ground truth:
// jobs_claimed and claimed_ids start out equal to the verified values and
// are rewritten by apply_behavior for dishonest devices.
struct WorkerIterationStats {
    std::int64_t jobs_verified = 0;
    std::int64_t jobs_claimed = 0;
    std::set<std::int64_t> claimed_ids;
    std::set<std::int64_t> verified_ids;  // engine-owned ground truth
    std::set<std::int64_t> assigned_ids;
    std::int64_t chunks_stolen = 0;
    std::int64_t chunks_returned = 0;
    std::int64_t deadline_violations = 0;
    double total_response_delay_s = 0.0;  // lateness beyond the device's own profile
};

struct IterationOutcome {
    std::int64_t iteration_id = 0;
    double time_1_s = 0.0;
    double time_2_s = 0.0;
    double speed_gain = 0.0;  // time_1_s / time_2_s
    std::map<std::string, WorkerIterationStats> worker_stats;  // delegator included
    std::vector<SimEvent> event_log;  // sorted by timestamp
};

struct SimOptions {
    // A chunk whose response time exceeds slack_factor x the nominal estimate
    // counts one deadline violation. The estimate prices transfers at the
    // worker's profiled link and compute at the delegator's rate, so a device
    // much slower than the delegator trips it even when its claims are honest.
    double slack_factor = 3.0;
    // Results that would arrive after the horizon are cancelled; their chunks
    // count as incomplete and the delegator re-executes the jobs afterwards.
    double horizon_s = std::numeric_limits<double>::infinity();
};

// time_1: the delegator executes every job itself, no transfers.
double simulate_local(const TaskSpec& task, const DeviceProfile& delegator);

// S = time_1 / time_2. Throws NonPositiveTime unless both are > 0.
double speed_gain(double time_1_s, double time_2_s);

// Deterministic Honeybee round: a shared FIFO job queue consumed by the
// delegator (one job at a time, no transfer cost) and by each selected worker
// (steal up to steal_chunk_size jobs, inbound transfer, compute, outbound
// transfer plus any injected delay, then steal again). time_2 is the instant
// the last result lands plus the sum of the per-worker ledger query
// overheads. `overheads_s` must be empty or one entry per selected worker.
IterationOutcome simulate_shared(const TaskSpec& task,
                                 const DeviceProfile& delegator,
                                 const std::vector<DeviceProfile>& selected_workers,
                                 const std::vector<double>& overheads_s,
                                 std::uint64_t seed,
                                 const SimOptions& options = {});

// Debug export: timestamp_s, event_kind, device_id, job_ids (';'-joined).
void write_event_log_csv(const std::vector<SimEvent>& events, std::ostream& out);

}  // namespace bdmec
