#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdmec/config.hpp"
#include "bdmec/ledger.hpp"
#include "bdmec/model.hpp"
#include "bdmec/selection.hpp"
#include "bdmec/sim.hpp"

namespace bdmec {

struct SpeedGainRow {
    std::uint64_t seed = 0;
    Mode mode = Mode::Baseline;
    std::int64_t iteration_id = 0;
    double speed_gain = 0.0;
};

struct IterationSummary {
    Mode mode = Mode::Baseline;
    std::int64_t iteration_id = 0;  // 0 marks the overall row
    double mean = 0.0;
    double ci95_halfwidth = 0.0;
};

struct ExperimentResult {
    std::string scenario;
    std::vector<SpeedGainRow> repetitions;
    std::vector<IterationSummary> summary;
    // Mean per-iteration percentage change of BdMEC over Baseline; present
    // only when both modes ran.
    std::optional<double> uplift_percent;
};

// Sample mean and Student-t 95% half-width (n-1 degrees of freedom).
// Throws InsufficientData for fewer than two values.
std::pair<double, double> summarize(const std::vector<double>& values);

// Everything one (mode, seed) cell produced; tests and the acceptance suite
// inspect the ledger and audit trail directly.
struct RepetitionArtifacts {
    Mode mode = Mode::Baseline;
    std::uint64_t seed = 0;
    std::vector<IterationOutcome> outcomes;
    LedgerStore ledger;  // untouched in Baseline mode
    AuditArchive audits;
    std::vector<WorkerAssessment> last_assessments;  // final BdMEC selection pass
};

RepetitionArtifacts run_repetition(const ScenarioConfig& config);

// Repetition r re-runs the given config with seed rng_seed + r. Tasks stay
// as given; use run_plan for per-repetition task regeneration.
ExperimentResult run_scenario(const ScenarioConfig& config, std::int64_t repetitions);

struct PlanResult {
    ExperimentResult result;
    std::vector<RepetitionArtifacts> artifacts;  // mode-major, repetition-minor
};

PlanResult run_plan(const ExperimentPlan& plan);

// Built-in scenario presets: speed-gain, malicious, small-jobs,
// privacy-tradeoff. Throws UnknownPreset.
ExperimentPlan preset_plan(const std::string& name);
std::vector<std::string> preset_names();

struct PresetOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> repetitions;
    std::optional<std::int64_t> iterations;
};

struct RunOutput {
    std::vector<std::filesystem::path> files;
};

// Writes results.csv / summary.csv (or privacy.csv), manifest.json, and for
// simulation plans the final BdMEC ledger export and assessment dump.
RunOutput run_plan_to_dir(const ExperimentPlan& plan, const std::filesystem::path& out_dir);
RunOutput run_preset(const std::string& name, const PresetOverrides& overrides,
                     const std::filesystem::path& out_dir);

}  // namespace bdmec
