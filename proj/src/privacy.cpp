#include "bdmec/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bdmec/errors.hpp"

namespace bdmec {

double laplace_from_uniform(double scale_b, double u) {
    const double sign = u < 0.0 ? -1.0 : 1.0;
    return -scale_b * sign * std::log(1.0 - 2.0 * std::abs(u));
}

double laplace_sample(double scale_b, Rng& rng) {
    return laplace_from_uniform(scale_b, rng.symmetric_unit());
}

std::int64_t perturb_count(std::int64_t v, const PrivacyParams& params, Rng& rng) {
    const double scale = params.sensitivity / params.epsilon;
    const double noisy = static_cast<double>(v) + laplace_sample(scale, rng);
    return std::max<std::int64_t>(0, std::llround(noisy));
}

double relative_error(double v, double v_prime) {
    if (!(v > 0.0)) throw NonPositiveTrueValue("relative_error requires v > 0");
    return std::abs(v - v_prime) / v * 100.0;
}

namespace {

// Rank = position in descending count order, ties by id ascending.
std::size_t rank_of(const std::vector<std::pair<std::string, std::int64_t>>& counts,
                    const std::string& target) {
    std::size_t rank = 0;
    std::int64_t target_count = 0;
    for (const auto& [id, count] : counts)
        if (id == target) target_count = count;
    for (const auto& [id, count] : counts) {
        if (id == target) continue;
        if (count > target_count || (count == target_count && id < target)) ++rank;
    }
    return rank;
}

}  // namespace

double precision_experiment(const std::map<std::string, std::int64_t>& true_counts,
                            const std::string& target,
                            const PrivacyParams& params,
                            std::int64_t trials,
                            Rng& rng) {
    if (!true_counts.count(target)) throw UnknownTarget("unknown worker: " + target);
    if (trials < 1) throw Error("trials must be >= 1");

    std::vector<std::pair<std::string, std::int64_t>> base(true_counts.begin(),
                                                           true_counts.end());
    const std::size_t true_rank = rank_of(base, target);

    std::int64_t tp = 0;
    std::int64_t fn = 0;
    std::vector<std::pair<std::string, std::int64_t>> noisy = base;
    for (std::int64_t t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < base.size(); ++i)
            noisy[i].second = perturb_count(base[i].second, params, rng);
        const std::size_t noisy_rank = rank_of(noisy, target);
        if (noisy_rank == true_rank)
            ++tp;
        else if (noisy_rank > true_rank)
            ++fn;
    }
    if (tp + fn == 0) return 0.0;
    return static_cast<double>(tp) / static_cast<double>(tp + fn) * 100.0;
}

std::vector<PrivacySweepRow> privacy_sweep(const std::map<std::string, std::int64_t>& true_counts,
                                           const std::vector<double>& epsilons,
                                           double sensitivity,
                                           std::int64_t error_trials,
                                           std::int64_t precision_trials,
                                           std::uint64_t seed) {
    std::vector<PrivacySweepRow> rows;
    std::uint64_t stream = 0;
    for (double eps : epsilons) {
        for (const auto& [worker, count] : true_counts) {
            PrivacyParams params{eps, sensitivity};

            Rng error_rng(derive_seed(seed, stream++));
            double sum_r = 0.0;
            for (std::int64_t t = 0; t < error_trials; ++t) {
                const std::int64_t noised = perturb_count(count, params, error_rng);
                sum_r += relative_error(static_cast<double>(count),
                                        static_cast<double>(noised));
            }

            Rng precision_rng(derive_seed(seed, stream++));
            const double p = precision_experiment(true_counts, worker, params,
                                                  precision_trials, precision_rng);

            PrivacySweepRow row;
            row.epsilon = eps;
            row.worker_id = worker;
            row.mean_r_percent = sum_r / static_cast<double>(error_trials);
            row.p_percent = p;
            row.trials = error_trials;
            row.seed = seed;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_privacy_csv(const std::vector<PrivacySweepRow>& rows, std::ostream& out) {
    out << "epsilon,worker_id,mean_R_percent,P_percent,trials,seed\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%g,%s,%.6f,%.4f,%lld,%llu", r.epsilon,
                      r.worker_id.c_str(), r.mean_r_percent, r.p_percent,
                      static_cast<long long>(r.trials),
                      static_cast<unsigned long long>(r.seed));
        out << buf << '\n';
    }
}

}  // namespace bdmec
