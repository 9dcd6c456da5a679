#pragma once

#include <string>
#include <vector>

#include "bdmec/model.hpp"

namespace helpers {

inline bdmec::DeviceProfile device(const std::string& id, double rate, double bw = 1e9,
                                   double latency = 0.0,
                                   bdmec::BehaviorKind behavior = bdmec::Honest{}) {
    bdmec::DeviceProfile d;
    d.device_id = id;
    d.processing_rate = rate;
    d.bandwidth_bps = bw;
    d.link_latency_s = latency;
    d.behavior = behavior;
    d.location = "test";
    return d;
}

inline bdmec::TaskSpec uniform_task(std::int64_t n_jobs, double cost, std::int64_t payload,
                                    std::int64_t chunk, std::int64_t result = 0) {
    bdmec::TaskSpec t;
    t.task_id = 0;
    t.steal_chunk_size = chunk;
    t.complexity = cost;
    for (std::int64_t i = 0; i < n_jobs; ++i)
        t.jobs.push_back({i, payload, cost, result});
    return t;
}

}  // namespace helpers
