#include "bdmec/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <functional>
#include <queue>
#include <utility>

#include "bdmec/errors.hpp"

namespace bdmec {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Steal: return "steal";
        case EventKind::TransferStart: return "transfer_start";
        case EventKind::TransferEnd: return "transfer_end";
        case EventKind::ComputeEnd: return "compute_end";
        case EventKind::ResultReceived: return "result_received";
    }
    return "unknown";
}

double simulate_local(const TaskSpec& task, const DeviceProfile& delegator) {
    return task.total_compute_cost() / delegator.processing_rate;
}

double speed_gain(double time_1_s, double time_2_s) {
    if (!(time_1_s > 0.0) || !(time_2_s > 0.0))
        throw NonPositiveTime("speed_gain requires positive times");
    return time_1_s / time_2_s;
}

namespace {

struct ChunkCost {
    double payload_bytes = 0.0;
    double compute_cost = 0.0;
    double result_bytes = 0.0;
};

ChunkCost sum_chunk(const TaskSpec& task, const std::vector<std::size_t>& positions) {
    ChunkCost c;
    for (auto p : positions) {
        const auto& job = task.jobs[p];
        c.payload_bytes += static_cast<double>(job.payload_bytes);
        c.compute_cost += job.compute_cost;
        c.result_bytes += static_cast<double>(job.result_bytes);
    }
    return c;
}

std::vector<std::int64_t> job_ids_of(const TaskSpec& task, const std::vector<std::size_t>& positions) {
    std::vector<std::int64_t> ids;
    ids.reserve(positions.size());
    for (auto p : positions) ids.push_back(task.jobs[p].job_id);
    return ids;
}

}  // namespace

IterationOutcome simulate_shared(const TaskSpec& task,
                                 const DeviceProfile& delegator,
                                 const std::vector<DeviceProfile>& selected_workers,
                                 const std::vector<double>& overheads_s,
                                 std::uint64_t /*seed*/,
                                 const SimOptions& options) {
    if (!overheads_s.empty() && overheads_s.size() != selected_workers.size())
        throw Error("overheads_s must be empty or match selected_workers");

    IterationOutcome out;
    out.time_1_s = simulate_local(task, delegator);

    auto& d_stats = out.worker_stats[delegator.device_id];
    for (const auto& w : selected_workers) out.worker_stats[w.device_id];

    // The shared queue is a cursor over jobs in task order.
    std::size_t next_job = 0;
    const std::size_t total = task.jobs.size();
    auto queue_empty = [&] { return next_job >= total; };
    auto take_jobs = [&](std::int64_t count) {
        std::vector<std::size_t> positions;
        while (count-- > 0 && !queue_empty()) positions.push_back(next_job++);
        return positions;
    };

    // Min-heap of (ready time, actor). Actor 0 is the delegator, so it wins
    // simultaneous steals; workers tie-break in selection order.
    using Ready = std::pair<double, std::size_t>;
    std::priority_queue<Ready, std::vector<Ready>, std::greater<>> ready;
    ready.emplace(0.0, 0);
    for (std::size_t i = 0; i < selected_workers.size(); ++i) ready.emplace(0.0, i + 1);

    double makespan = 0.0;
    double delegator_free = 0.0;
    std::vector<std::size_t> cancelled_jobs;

    while (!ready.empty()) {
        const auto [t, actor] = ready.top();
        ready.pop();
        if (queue_empty()) {
            if (actor == 0) delegator_free = t;
            continue;
        }
        if (actor == 0) {
            const auto pos = take_jobs(1);
            const auto& job = task.jobs[pos[0]];
            const double end = t + job.compute_cost / delegator.processing_rate;
            out.event_log.push_back({t, EventKind::Steal, delegator.device_id, {job.job_id}});
            out.event_log.push_back({end, EventKind::ComputeEnd, delegator.device_id, {job.job_id}});
            d_stats.assigned_ids.insert(job.job_id);
            d_stats.verified_ids.insert(job.job_id);
            ++d_stats.chunks_stolen;
            ++d_stats.chunks_returned;
            makespan = std::max(makespan, end);
            delegator_free = end;
            ready.emplace(end, 0);
            continue;
        }

        const auto& worker = selected_workers[actor - 1];
        auto& w_stats = out.worker_stats.at(worker.device_id);
        if (t >= options.horizon_s) continue;  // iteration cut off, no more steals

        const auto pos = take_jobs(task.steal_chunk_size);
        const ChunkCost chunk = sum_chunk(task, pos);
        const auto ids = job_ids_of(task, pos);
        w_stats.assigned_ids.insert(ids.begin(), ids.end());
        ++w_stats.chunks_stolen;

        const double inbound = chunk.payload_bytes / worker.bandwidth_bps + worker.link_latency_s;
        const double outbound = chunk.result_bytes / worker.bandwidth_bps + worker.link_latency_s;
        double injected = 0.0;
        if (const auto* delay = std::get_if<DelayInjector>(&worker.behavior))
            injected = delay->delay_s;

        const double inbound_end = t + inbound;
        const double compute_end = inbound_end + chunk.compute_cost / worker.processing_rate;
        const double arrival = compute_end + outbound + injected;

        out.event_log.push_back({t, EventKind::Steal, worker.device_id, ids});
        out.event_log.push_back({t, EventKind::TransferStart, worker.device_id, ids});

        if (arrival > options.horizon_s) {
            // Never returns: the delegator re-queues these jobs once the
            // horizon passes. Only events before the cutoff are observable.
            if (inbound_end <= options.horizon_s)
                out.event_log.push_back({inbound_end, EventKind::TransferEnd, worker.device_id, ids});
            if (compute_end <= options.horizon_s)
                out.event_log.push_back({compute_end, EventKind::ComputeEnd, worker.device_id, ids});
            cancelled_jobs.insert(cancelled_jobs.end(), pos.begin(), pos.end());
            continue;
        }

        out.event_log.push_back({inbound_end, EventKind::TransferEnd, worker.device_id, ids});
        out.event_log.push_back({compute_end, EventKind::ComputeEnd, worker.device_id, ids});
        out.event_log.push_back({arrival, EventKind::ResultReceived, worker.device_id, ids});
        w_stats.verified_ids.insert(ids.begin(), ids.end());
        ++w_stats.chunks_returned;

        const double response = arrival - t;
        const double own_expected =
            inbound + chunk.compute_cost / worker.processing_rate + outbound;
        const double nominal_expected =
            inbound + chunk.compute_cost / delegator.processing_rate + outbound;
        if (response > options.slack_factor * nominal_expected) ++w_stats.deadline_violations;
        w_stats.total_response_delay_s += std::max(0.0, response - own_expected);

        makespan = std::max(makespan, arrival);
        ready.emplace(arrival, actor);
    }

    // Jobs stranded on cancelled chunks are executed locally after the cutoff.
    if (!cancelled_jobs.empty()) {
        double t = std::max(delegator_free, options.horizon_s);
        for (auto p : cancelled_jobs) {
            const auto& job = task.jobs[p];
            const double end = t + job.compute_cost / delegator.processing_rate;
            out.event_log.push_back({t, EventKind::Steal, delegator.device_id, {job.job_id}});
            out.event_log.push_back({end, EventKind::ComputeEnd, delegator.device_id, {job.job_id}});
            d_stats.assigned_ids.insert(job.job_id);
            d_stats.verified_ids.insert(job.job_id);
            ++d_stats.chunks_stolen;
            ++d_stats.chunks_returned;
            t = end;
        }
        makespan = std::max(makespan, t);
    }

    double total_overhead = 0.0;
    for (double o : overheads_s) total_overhead += o;
    out.time_2_s = makespan + total_overhead;
    out.speed_gain = out.time_1_s / out.time_2_s;

    std::size_t verified_total = 0;
    for (auto& [id, stats] : out.worker_stats) {
        stats.jobs_verified = static_cast<std::int64_t>(stats.verified_ids.size());
        stats.jobs_claimed = stats.jobs_verified;
        stats.claimed_ids = stats.verified_ids;
        verified_total += stats.verified_ids.size();
    }
    assert(verified_total == total);
    (void)verified_total;

    std::stable_sort(out.event_log.begin(), out.event_log.end(),
                     [](const SimEvent& a, const SimEvent& b) {
                         return a.timestamp_s < b.timestamp_s;
                     });
    return out;
}

void write_event_log_csv(const std::vector<SimEvent>& events, std::ostream& out) {
    out << "timestamp_s,event_kind,device_id,job_ids\n";
    char buf[64];
    for (const auto& e : events) {
        std::snprintf(buf, sizeof buf, "%.9f", e.timestamp_s);
        out << buf << ',' << event_kind_name(e.kind) << ',' << e.device_id << ',';
        for (std::size_t i = 0; i < e.job_ids.size(); ++i) {
            if (i) out << ';';
            out << e.job_ids[i];
        }
        out << '\n';
    }
}

}  // namespace bdmec
