#include "mskel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mskel/generators.hpp"
#include "mskel/matching.hpp"
#include "mskel/partition.hpp"
#include "mskel/rng.hpp"
#include "mskel/skeleton.hpp"

namespace mskel {

std::string_view policy_name(Policy policy) {
    switch (policy) {
        case Policy::Canonical: return "canonical";
        case Policy::Avoid: return "avoid";
        case Policy::Baseline: return "baseline";
    }
    return "unknown";
}

std::optional<Policy> parse_policy(std::string_view name) {
    if (name == "canonical") return Policy::Canonical;
    if (name == "avoid") return Policy::Avoid;
    if (name == "baseline") return Policy::Baseline;
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    if (k < 1) throw std::invalid_argument("experiment config: k must be >= 1");
    if (repetitions < 1) {
        throw std::invalid_argument("experiment config: repetitions must be >= 1");
    }
}

namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

std::vector<Edge> sorted_unique(std::span<const Edge> edges) {
    std::vector<Edge> out(edges.begin(), edges.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Core of run_trial with the host matching size already known and the
/// forbidden set already sorted. Player summaries are independent and run in
/// parallel unless suppressed (or already inside a parallel trial loop,
/// where nesting stays disabled).
TrialReport run_trial_impl(const BipartiteGraph& g, std::uint32_t k, std::uint64_t seed,
                           Policy policy, std::span<const Edge> forbidden,
                           std::int64_t mm_g, bool parallel_players = true) {
    const PartitionResult partition = random_k_partition(g, k, seed);

    std::vector<std::vector<Edge>> coresets(k);
    std::vector<char> refused(k, 0);
    std::atomic<bool> failed{false};
    std::exception_ptr error;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel_players)
#else
    (void)parallel_players;
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(k); ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            const BipartiteGraph& part = partition.parts[static_cast<std::size_t>(i)];
            std::vector<Edge>& coreset = coresets[static_cast<std::size_t>(i)];
            switch (policy) {
                case Policy::Canonical:
                    coreset = matching_skeleton(part).support();
                    break;
                case Policy::Avoid: {
                    AvoidOutcome outcome = skeleton_avoiding(part, forbidden);
                    if (outcome.refused()) {
                        refused[static_cast<std::size_t>(i)] = 1;
                        coreset = matching_skeleton(part).support();
                    } else {
                        coreset = outcome.skeleton->support();
                    }
                    break;
                }
                case Policy::Baseline:
                    coreset = maximum_matching(part).pairs;
                    break;
            }
        } catch (...) {
#pragma omp critical
            {
                if (!error) error = std::current_exception();
            }
            failed.store(true, std::memory_order_relaxed);
        }
    }
    if (error) std::rethrow_exception(error);

    std::vector<BipartiteGraph> coreset_graphs;
    coreset_graphs.reserve(k);
    for (auto& edges : coresets) {
        coreset_graphs.emplace_back(g.p_count(), g.q_count(), std::move(edges));
    }
    const BipartiteGraph recombined = union_graphs(coreset_graphs);

    TrialReport report;
    report.seed = seed;
    report.k = k;
    report.policy = policy;
    report.mm_g = mm_g;
    report.mm_union = static_cast<std::int64_t>(maximum_matching(recombined).size());
    report.ratio = mm_g > 0 ? Rational(report.mm_union, mm_g) : Rational(1);
    for (const BipartiteGraph& cg : coreset_graphs) {
        report.per_player_edges.push_back(static_cast<std::int64_t>(cg.edge_count()));
    }
    for (char f : refused) report.refusals += f;
    return report;
}

/// Shared setup and teardown for the parallel and serial runners; only the
/// trial loop differs between them.
struct TrialRunner {
    const BipartiteGraph& g;
    const ExperimentConfig& config;
    std::vector<Edge> forbidden;
    std::int64_t mm_g = 0;
    ExperimentReport report;
    std::chrono::steady_clock::time_point start;

    TrialRunner(const BipartiteGraph& graph, const ExperimentConfig& cfg)
        : g(graph), config(cfg) {
        config.validate();
        start = std::chrono::steady_clock::now();
        forbidden = sorted_unique(config.forbidden);
        mm_g = static_cast<std::int64_t>(maximum_matching(g).size());
        report.trials.resize(config.repetitions);
    }

    void one_trial(std::uint32_t t, bool parallel_players) {
        const std::uint64_t trial_seed = derive_u64(config.master_seed, t);
        TrialReport trial = run_trial_impl(g, config.k, trial_seed, config.policy,
                                           forbidden, mm_g, parallel_players);
        trial.trial_index = t;
        report.trials[t] = std::move(trial);
    }

    ExperimentReport finish() {
        Rational sum;
        report.min_ratio = report.trials.front().ratio;
        report.max_ratio = report.trials.front().ratio;
        for (const TrialReport& trial : report.trials) {
            sum += trial.ratio;
            report.min_ratio = std::min(report.min_ratio, trial.ratio);
            report.max_ratio = std::max(report.max_ratio, trial.ratio);
        }
        report.mean_ratio = sum / Rational(static_cast<std::int64_t>(config.repetitions));
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::move(report);
    }
};

}  // namespace

TrialReport run_trial(const BipartiteGraph& g, std::uint32_t k, std::uint64_t seed,
                      Policy policy, std::span<const Edge> forbidden) {
    if (k < 1) throw std::invalid_argument("run_trial: k must be >= 1");
    const std::vector<Edge> sorted = sorted_unique(forbidden);
    return run_trial_impl(g, k, seed, policy, sorted,
                          static_cast<std::int64_t>(maximum_matching(g).size()));
}

ExperimentReport run_experiment(const BipartiteGraph& g, const ExperimentConfig& config,
                                int threads) {
    TrialRunner runner(g, config);
    const int nthreads = resolve_threads(threads);
    (void)nthreads;
    std::atomic<bool> failed{false};
    std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(config.repetitions); ++t) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            runner.one_trial(static_cast<std::uint32_t>(t), true);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!error) error = std::current_exception();
            }
            failed.store(true, std::memory_order_relaxed);
        }
    }
    if (error) std::rethrow_exception(error);
    return runner.finish();
}

ExperimentReport run_experiment_serial(const BipartiteGraph& g,
                                       const ExperimentConfig& config) {
    TrialRunner runner(g, config);
    for (std::uint32_t t = 0; t < config.repetitions; ++t) {
        runner.one_trial(t, false);
    }
    return runner.finish();
}

ExperimentReport pathological_experiment(std::uint32_t r, std::uint32_t k,
                                         std::uint32_t repetitions, std::uint64_t seed,
                                         int threads) {
    const PathologicalLayout layout = PathologicalLayout::for_params(r, k);
    const BipartiteGraph g = gen_pathological(r, k);

    ExperimentConfig config;
    config.k = k;
    config.repetitions = repetitions;
    config.master_seed = seed;
    config.policy = Policy::Avoid;
    config.forbidden = layout.middle_pairs();

    ExperimentReport report = run_experiment(g, config, threads);

    PathologicalSummary summary;
    summary.r = r;
    summary.k = k;
    summary.mm_bound = 2ll * r + (4ll * r) / k;
    std::int64_t attempts = 0;
    std::int64_t refusals = 0;
    for (const TrialReport& trial : report.trials) {
        if (trial.refusals == 0) ++summary.trials_with_zero_refusals;
        if (trial.mm_union <= summary.mm_bound) ++summary.trials_within_bound;
        attempts += k;
        refusals += trial.refusals;
    }
    summary.avoid_success_fraction = Rational(attempts - refusals, attempts);
    report.pathological = summary;
    return report;
}

std::string report_csv(const ExperimentReport& report) {
    std::string csv = "trial,seed,k,mm_g,mm_union,ratio,refusals,max_player_edges\n";
    for (const TrialReport& trial : report.trials) {
        std::int64_t max_edges = 0;
        for (std::int64_t edges : trial.per_player_edges) {
            max_edges = std::max(max_edges, edges);
        }
        csv += std::to_string(trial.trial_index) + ',' + std::to_string(trial.seed) + ',' +
               std::to_string(trial.k) + ',' + std::to_string(trial.mm_g) + ',' +
               std::to_string(trial.mm_union) + ',' + trial.ratio.to_decimal(6) + ',' +
               std::to_string(trial.refusals) + ',' + std::to_string(max_edges) + '\n';
    }
    return csv;
}

nlohmann::json report_json(const ExperimentReport& report) {
    nlohmann::json trials = nlohmann::json::array();
    for (const TrialReport& trial : report.trials) {
        std::int64_t max_edges = 0;
        for (std::int64_t edges : trial.per_player_edges) {
            max_edges = std::max(max_edges, edges);
        }
        nlohmann::json row{{"trial", trial.trial_index},
                           {"seed", trial.seed},
                           {"k", trial.k},
                           {"policy", std::string(policy_name(trial.policy))},
                           {"mm_g", trial.mm_g},
                           {"mm_union", trial.mm_union},
                           {"ratio", trial.ratio.to_string()},
                           {"ratio_decimal", trial.ratio.to_decimal(6)},
                           {"refusals", trial.refusals},
                           {"per_player_edges", trial.per_player_edges},
                           {"max_player_edges", max_edges}};
        if (report.pathological) {
            row["within_bound"] = trial.mm_union <= report.pathological->mm_bound;
        }
        trials.push_back(std::move(row));
    }
    nlohmann::json out{{"trials", std::move(trials)},
                       {"mean_ratio", report.mean_ratio.to_string()},
                       {"mean_ratio_decimal", report.mean_ratio.to_decimal(6)},
                       {"min_ratio", report.min_ratio.to_string()},
                       {"min_ratio_decimal", report.min_ratio.to_decimal(6)},
                       {"max_ratio", report.max_ratio.to_string()},
                       {"max_ratio_decimal", report.max_ratio.to_decimal(6)},
                       {"wall_seconds", report.wall_seconds}};
    if (report.pathological) {
        const PathologicalSummary& s = *report.pathological;
        out["pathological"] = {
            {"r", s.r},
            {"k", s.k},
            {"mm_bound", s.mm_bound},
            {"trials_with_zero_refusals", s.trials_with_zero_refusals},
            {"trials_within_bound", s.trials_within_bound},
            {"avoid_success_fraction", s.avoid_success_fraction.to_string()},
            {"avoid_success_fraction_decimal", s.avoid_success_fraction.to_decimal(6)}};
    }
    return out;
}

}  // namespace mskel
