#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "bdmec/model.hpp"
#include "bdmec/rng.hpp"

namespace bdmec {

// Inverse-CDF form of the Laplace mechanism: u uniform on (-1/2, 1/2) maps
// to -b * sign(u) * ln(1 - 2|u|).
double laplace_from_uniform(double scale_b, double u);

double laplace_sample(double scale_b, Rng& rng);

// round(v + Lap(sensitivity/epsilon)), clamped at zero. Post-processing of
// the mechanism output, so the privacy guarantee is unchanged.
std::int64_t perturb_count(std::int64_t v, const PrivacyParams& params, Rng& rng);

// |v - v'| / v * 100. Throws NonPositiveTrueValue unless v > 0.
double relative_error(double v, double v_prime);

// Fraction (percent) of trials in which `target` keeps its true rank after
// every count is independently noised. A trial where the noisy rank is
// strictly lower counts as a false negative; upward displacement is neither.
// Noisy ties break by worker id, ascending.
double precision_experiment(const std::map<std::string, std::int64_t>& true_counts,
                            const std::string& target,
                            const PrivacyParams& params,
                            std::int64_t trials,
                            Rng& rng);

struct PrivacySweepRow {
    double epsilon = 0.0;
    std::string worker_id;
    double mean_r_percent = 0.0;
    double p_percent = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
};

// Per (epsilon, worker): mean relative error of the noised count over
// `error_trials` draws and precision over `precision_trials` rank trials.
std::vector<PrivacySweepRow> privacy_sweep(const std::map<std::string, std::int64_t>& true_counts,
                                           const std::vector<double>& epsilons,
                                           double sensitivity,
                                           std::int64_t error_trials,
                                           std::int64_t precision_trials,
                                           std::uint64_t seed);

void write_privacy_csv(const std::vector<PrivacySweepRow>& rows, std::ostream& out);

}  // namespace bdmec
