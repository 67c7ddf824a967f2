#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mskel/graph.hpp"
#include "mskel/rational.hpp"

#include "json.hpp"

namespace mskel {

/// Default seed for every command and experiment; never derived from the
/// clock so runs are replayable.
inline constexpr std::uint64_t kDefaultSeed = 12345;

enum class Policy { Canonical, Avoid, Baseline };

std::string_view policy_name(Policy policy);
std::optional<Policy> parse_policy(std::string_view name);

/// Measurements of one partition-summarize-recombine round.
struct TrialReport {
    std::uint32_t trial_index = 0;
    std::uint64_t seed = 0;
    std::uint32_t k = 1;
    Policy policy = Policy::Canonical;
    std::int64_t mm_g = 0;
    std::int64_t mm_union = 0;
    /// mm_union / mm_g exactly; 1 when mm_g = 0 (nothing to lose).
    Rational ratio;
    /// Edges each player sends (communication words).
    std::vector<std::int64_t> per_player_edges;
    std::uint32_t refusals = 0;
};

struct ExperimentConfig {
    std::uint32_t k = 1;
    std::uint32_t repetitions = 1;
    std::uint64_t master_seed = kDefaultSeed;
    Policy policy = Policy::Canonical;
    /// Edge group withheld by the avoid policy; ignored otherwise.
    std::vector<Edge> forbidden;

    void validate() const;
};

struct PathologicalSummary {
    std::uint32_t r = 0;
    std::uint32_t k = 0;
    /// The adversarial recombination cap 2r + 4r/k.
    std::int64_t mm_bound = 0;
    std::uint32_t trials_with_zero_refusals = 0;
    std::uint32_t trials_within_bound = 0;
    /// Fraction of (trial, player) avoidance attempts that succeeded.
    Rational avoid_success_fraction;
};

struct ExperimentReport {
    std::vector<TrialReport> trials;
    Rational mean_ratio, min_ratio, max_ratio;
    double wall_seconds = 0.0;
    std::optional<PathologicalSummary> pathological;
};

/// One trial: random k-partition with the given seed, one coreset per part
/// under the policy (canonical skeleton; avoiding skeleton with fallback to
/// canonical counted as a refusal; or the plain maximum-matching baseline),
/// recombination, measurement. Pure function of its arguments.
TrialReport run_trial(const BipartiteGraph& g, std::uint32_t k, std::uint64_t seed,
                      Policy policy, std::span<const Edge> forbidden = {});

/// Runs config.repetitions independent trials with per-trial seeds derived
/// from the master seed. Trials execute in parallel (OpenMP) but the report
/// is assembled by trial index, so the output is identical for any thread
/// count. threads = 0 means use all available.
ExperimentReport run_experiment(const BipartiteGraph& g, const ExperimentConfig& config,
                                int threads = 0);

/// Single-threaded reference runner; byte-identical reports to
/// run_experiment for equal configs.
ExperimentReport run_experiment_serial(const BipartiteGraph& g,
                                       const ExperimentConfig& config);

/// Builds the adversarial six-group graph and runs the avoid policy against
/// its middle edge group, recording refusal statistics and the per-trial
/// bound check mm_union <= 2r + 4r/k.
ExperimentReport pathological_experiment(std::uint32_t r, std::uint32_t k,
                                         std::uint32_t repetitions, std::uint64_t seed,
                                         int threads = 0);

/// CSV with header trial,seed,k,mm_g,mm_union,ratio,refusals,max_player_edges
/// and one row per trial; ratio rendered to 6 decimal places.
std::string report_csv(const ExperimentReport& report);

nlohmann::json report_json(const ExperimentReport& report);

}  // namespace mskel
