#pragma once

// Reference schedule for small instances, kept deliberately independent of
// the engine: no event calendar, no priority queue. Each round scans every
// device for the earliest wake-up (delegator wins ties, then worker order),
// hands out jobs from a plain list, and tracks completion instants directly.

#include <cstdint>
#include <variant>
#include <vector>

#include "bdmec/model.hpp"

namespace oracle {

inline double time2(const bdmec::TaskSpec& task,
                    const bdmec::DeviceProfile& delegator,
                    const std::vector<bdmec::DeviceProfile>& workers,
                    const std::vector<double>& overheads) {
    const std::size_t n = workers.size();
    std::vector<double> wake(n + 1, 0.0);   // slot 0 = delegator
    std::vector<bool> active(n + 1, true);

    std::vector<const bdmec::JobSpec*> pending;
    for (const auto& j : task.jobs) pending.push_back(&j);
    std::size_t cursor = 0;

    double last_completion = 0.0;
    while (true) {
        std::size_t who = n + 1;
        for (std::size_t i = 0; i <= n; ++i) {
            if (!active[i]) continue;
            if (who == n + 1 || wake[i] < wake[who]) who = i;
        }
        if (who == n + 1) break;
        if (cursor >= pending.size()) {
            active[who] = false;
            continue;
        }
        if (who == 0) {
            const bdmec::JobSpec* job = pending[cursor++];
            const double done = wake[0] + job->compute_cost / delegator.processing_rate;
            if (done > last_completion) last_completion = done;
            wake[0] = done;
            continue;
        }
        const auto& w = workers[who - 1];
        double payload = 0.0, cost = 0.0, result = 0.0;
        for (std::int64_t k = 0; k < task.steal_chunk_size && cursor < pending.size(); ++k) {
            payload += static_cast<double>(pending[cursor]->payload_bytes);
            cost += pending[cursor]->compute_cost;
            result += static_cast<double>(pending[cursor]->result_bytes);
            ++cursor;
        }
        double delay = 0.0;
        if (const auto* d = std::get_if<bdmec::DelayInjector>(&w.behavior)) delay = d->delay_s;
        const double duration = payload / w.bandwidth_bps + w.link_latency_s +
                                cost / w.processing_rate +
                                result / w.bandwidth_bps + w.link_latency_s + delay;
        const double arrival = wake[who] + duration;
        if (arrival > last_completion) last_completion = arrival;
        wake[who] = arrival;
    }

    double overhead = 0.0;
    for (double o : overheads) overhead += o;
    return last_completion + overhead;
}

}  // namespace oracle
