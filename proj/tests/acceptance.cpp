// Acceptance suite: exercises the library end to end and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion
// fails. Expected wall time is a few minutes on two cores.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "mskel/decomposition.hpp"
#include "mskel/experiment.hpp"
#include "mskel/generators.hpp"
#include "mskel/matching.hpp"
#include "mskel/rng.hpp"
#include "mskel/skeleton.hpp"
#include "mskel/union_find.hpp"

using namespace mskel;

namespace {

struct Criterion {
    std::string name;
    bool passed = true;
    std::vector<std::string> notes;

    void require(bool condition, const std::string& context) {
        if (!condition) {
            passed = false;
            if (notes.size() < 8) notes.push_back(context);
        }
    }
};

int failures = 0;

void report(const Criterion& c) {
    std::printf("[%s] %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str());
    for (const std::string& note : c.notes) {
        std::printf("       %s\n", note.c_str());
    }
    std::fflush(stdout);
    if (!c.passed) ++failures;
}

std::vector<std::uint32_t> all_p(const BipartiteGraph& g) {
    std::vector<std::uint32_t> out(g.p_count());
    for (std::uint32_t p = 0; p < g.p_count(); ++p) out[p] = p;
    return out;
}

struct CorpusEntry {
    BipartiteGraph graph;
    BlockDecomposition decomposition;
};

// 1000 seeded random graphs with both sides at most 12.
std::vector<CorpusEntry> build_small_corpus() {
    std::vector<CorpusEntry> corpus(1000);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < 1000; ++i) {
        const auto seed = static_cast<std::uint64_t>(i);
        const std::uint32_t p = 1 + derive_u64(seed, 0) % 12;
        const std::uint32_t q = 1 + derive_u64(seed, 1) % 12;
        const double prob = 0.05 + 0.9 * (derive_u64(seed, 2) % 100) / 100.0;
        BipartiteGraph g = gen_random_bipartite(p, q, prob, derive_u64(seed, 3));
        BlockDecomposition d = block_decomposition(g);
        corpus[i] = {std::move(g), std::move(d)};
    }
    return corpus;
}

// 100 graphs with n = 2000 vertices at mixed densities.
std::vector<CorpusEntry> build_large_corpus() {
    const double probs[] = {0.0015, 0.002, 0.003, 0.005};
    std::vector<CorpusEntry> corpus(100);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < 100; ++i) {
        const auto seed = 5000 + static_cast<std::uint64_t>(i);
        BipartiteGraph g =
            gen_random_bipartite(1000, 1000, probs[i % 4], derive_u64(seed, 0));
        BlockDecomposition d = block_decomposition(g);
        corpus[i] = {std::move(g), std::move(d)};
    }
    return corpus;
}

void criterion_1(const std::vector<CorpusEntry>& small) {
    Criterion c{"criterion 1: min_expansion equals the exhaustive oracle on 1000 graphs"};
    for (std::size_t i = 0; i < small.size(); ++i) {
        const BipartiteGraph& g = small[i].graph;
        const auto p = all_p(g);
        const MinExpansionResult fast = min_expansion(g, p);
        const MinExpansionResult oracle = brute_force_min_expansion(g, p);
        c.require(fast.alpha == oracle.alpha,
                  "graph " + std::to_string(i) + ": alpha " + fast.alpha.to_string() +
                      " vs oracle " + oracle.alpha.to_string());
        c.require(fast.s_max == oracle.s_max,
                  "graph " + std::to_string(i) + ": maximal tight sets differ");
    }
    report(c);
}

void check_block_structure(Criterion& c, const CorpusEntry& entry, const std::string& tag) {
    const BipartiteGraph& g = entry.graph;
    const BlockDecomposition& d = entry.decomposition;
    for (std::size_t i = 0; i < d.blocks().size(); ++i) {
        const Block& b = d.blocks()[i];
        if (i > 0) {
            c.require(d.blocks()[i - 1].alpha < b.alpha,
                      tag + ": alphas not strictly increasing at block " + std::to_string(i));
        }
        c.require(b.alpha == Rational(static_cast<std::int64_t>(b.q_set.size()),
                                      static_cast<std::int64_t>(b.p_set.size())),
                  tag + ": alpha != |Q|/|P| at block " + std::to_string(i));
    }
    for (const Edge& e : g.edges()) {
        const int bp = d.block_of({Side::P, e.p});
        const int bq = d.block_of({Side::Q, e.q});
        c.require(bq >= 0 && bq <= bp, tag + ": neighborhood containment violated");
    }
}

void criterion_2(const std::vector<CorpusEntry>& small,
                 const std::vector<CorpusEntry>& large) {
    Criterion c{"criterion 2: block structure (increasing alphas, exact ratios, "
                "neighborhood containment) on the corpus"};
    for (std::size_t i = 0; i < small.size(); ++i) {
        check_block_structure(c, small[i], "small " + std::to_string(i));
        const VerifyReport full = verify_decomposition(small[i].graph, small[i].decomposition);
        c.require(full.ok, "small " + std::to_string(i) + ": " +
                               (full.violations.empty() ? "" : full.violations.front()));
    }
    for (std::size_t i = 0; i < large.size(); ++i) {
        check_block_structure(c, large[i], "large " + std::to_string(i));
    }
    report(c);
}

void criterion_3(const std::vector<CorpusEntry>& small,
                 const std::vector<CorpusEntry>& large) {
    Criterion c{"criterion 3: canonical cover covers every edge with |cover| = mm(G)"};
    auto check = [&](const CorpusEntry& entry, const std::string& tag) {
        const VertexCover cover = canonical_vertex_cover(entry.graph, entry.decomposition);
        c.require(is_vertex_cover(entry.graph, cover), tag + ": not a vertex cover");
        c.require(cover.size() == maximum_matching(entry.graph).size(),
                  tag + ": cover size != matching size");
    };
    for (std::size_t i = 0; i < small.size(); ++i) check(small[i], "small " + std::to_string(i));
    for (std::size_t i = 0; i < large.size(); ++i) check(large[i], "large " + std::to_string(i));
    report(c);
}

void criterion_4(const std::vector<CorpusEntry>& small,
                 const std::vector<CorpusEntry>& large) {
    Criterion c{"criterion 4: skeleton forests with exact saturation preserve mm"};
    auto check = [&](const CorpusEntry& entry, const std::string& tag) {
        const BipartiteGraph& g = entry.graph;
        const Skeleton sk = matching_skeleton(g, entry.decomposition);
        const std::vector<Edge> support = sk.support();

        if (g.vertex_count() > 0) {
            c.require(support.size() <= g.vertex_count() - 1, tag + ": support too large");
        }
        UnionFind uf(g.vertex_count());
        for (const Edge& e : support) {
            c.require(uf.unite(e.p, g.p_count() + e.q), tag + ": support has a cycle");
        }

        std::vector<Rational> p_sum(g.p_count()), q_sum(g.q_count());
        for (const auto& [e, w] : sk.weights.weights()) {
            p_sum[e.p] += w;
            q_sum[e.q] += w;
        }
        for (const Block& b : sk.decomposition.blocks()) {
            for (std::uint32_t p : b.p_set) {
                c.require(p_sum[p] == b.alpha, tag + ": P saturation inexact");
            }
        }
        const Rational one(1);
        for (std::uint32_t q = 0; q < g.q_count(); ++q) {
            c.require(q_sum[q] <= one, tag + ": Q oversaturated");
        }

        const BipartiteGraph support_graph(g.p_count(), g.q_count(), support);
        c.require(maximum_matching(support_graph).size() == maximum_matching(g).size(),
                  tag + ": support loses matching size");
    };
    for (std::size_t i = 0; i < small.size(); ++i) check(small[i], "small " + std::to_string(i));
    for (std::size_t i = 0; i < large.size(); ++i) check(large[i], "large " + std::to_string(i));
    report(c);
}

void criterion_5() {
    Criterion c{"criterion 5: 500 random edge perturbations leave the decomposition fixed"};
    std::vector<std::string> errors(500);
    std::vector<char> ok(500, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < 500; ++i) {
        const auto seed = 31000 + static_cast<std::uint64_t>(i);
        const std::uint32_t p = 4 + derive_u64(seed, 0) % 56;
        const std::uint32_t q = 4 + derive_u64(seed, 1) % 56;
        const double prob = 0.03 + 0.35 * (derive_u64(seed, 2) % 100) / 100.0;
        const BipartiteGraph g = gen_random_bipartite(p, q, prob, derive_u64(seed, 3));
        const Skeleton sk = matching_skeleton(g);
        const std::vector<Edge> support = sk.support();

        std::vector<Edge> removed;
        for (const Edge& e : g.edges()) {
            if (!std::binary_search(support.begin(), support.end(), e) &&
                derive_u64(seed, 100 + e.p * 997 + e.q) % 3 == 0) {
                removed.push_back(e);
            }
        }
        std::vector<Edge> added;
        for (std::uint32_t pp = 0; pp < p && added.size() < 12; ++pp) {
            for (std::uint32_t qq = 0; qq < q && added.size() < 12; ++qq) {
                const Edge e{pp, qq};
                if (g.has_edge(e)) continue;
                if (derive_u64(seed, 5000 + pp * 997 + qq) % 6 != 0) continue;
                if (sk.decomposition.expansion_of({Side::P, pp}) >=
                    sk.decomposition.expansion_of({Side::Q, qq})) {
                    added.push_back(e);
                }
            }
        }
        const RobustnessResult rr =
            check_robustness(g, sk.decomposition, added, removed, sk);
        ok[i] = rr.ok ? 1 : 0;
        if (!rr.ok) errors[i] = rr.detail;
    }
    for (std::size_t i = 0; i < ok.size(); ++i) {
        c.require(ok[i] == 1, "triple " + std::to_string(i) + ": " + errors[i]);
    }
    report(c);
}

ExperimentReport criterion_6(ExperimentConfig* config_out, BipartiteGraph* graph_out) {
    Criterion c{"criterion 6: canonical coreset on random 1000+1000 graphs, "
                "mean ratio >= 0.50 and min ratio >= 0.45"};
    const BipartiteGraph g = gen_random_bipartite(1000, 1000, 0.01, 90210);
    ExperimentConfig config;
    config.k = 20;
    config.repetitions = 50;
    config.master_seed = 777;
    config.policy = Policy::Canonical;

    const ExperimentReport result = run_experiment(g, config);
    c.require(result.mean_ratio >= Rational(1, 2),
              "mean ratio " + result.mean_ratio.to_decimal(6) + " < 0.50");
    c.require(result.min_ratio >= Rational(45, 100),
              "min ratio " + result.min_ratio.to_decimal(6) + " < 0.45");
    std::printf("       (mean %s, min %s over %zu trials)\n",
                result.mean_ratio.to_decimal(6).c_str(),
                result.min_ratio.to_decimal(6).c_str(), result.trials.size());
    report(c);
    *config_out = config;
    *graph_out = g;
    return result;
}

void criterion_7() {
    Criterion c{"criterion 7: adversarial skeletons cap the recombined matching at "
                "2r + 4r/k (r=500, k=20, 20 trials)"};
    const ExperimentReport result = pathological_experiment(500, 20, 20, 1234);
    const std::int64_t bound = 2 * 500 + 4 * 500 / 20;  // 1100
    std::uint32_t zero_refusal = 0;
    for (const TrialReport& trial : result.trials) {
        if (trial.refusals == 0) {
            ++zero_refusal;
            c.require(trial.mm_union <= bound,
                      "trial " + std::to_string(trial.trial_index) + ": mm_union " +
                          std::to_string(trial.mm_union) + " exceeds " +
                          std::to_string(bound));
        }
    }
    c.require(zero_refusal >= 18, "only " + std::to_string(zero_refusal) +
                                      " of 20 trials had zero refusals");
    std::printf("       (zero-refusal trials: %u/20, max ratio %s)\n", zero_refusal,
                result.max_ratio.to_decimal(6).c_str());
    report(c);
}

void criterion_8(const std::vector<CorpusEntry>& small,
                 const std::vector<CorpusEntry>& large) {
    Criterion c{"criterion 8: matching oracle and König equality"};
    int checked = 0;
    for (std::uint64_t seed = 0; checked < 1000; ++seed) {
        const std::uint32_t p = 2 + derive_u64(seed, 10) % 7;
        const std::uint32_t q = 2 + derive_u64(seed, 11) % 7;
        std::vector<Edge> edges;
        std::uint64_t counter = 12;
        for (std::uint32_t i = 0; i < p; ++i) {
            for (std::uint32_t j = 0; j < q; ++j) {
                if (derive_u64(seed, counter++) % 100 < 35) edges.push_back({i, j});
            }
        }
        if (edges.size() > 25) edges.resize(25);
        const BipartiteGraph g(p, q, std::move(edges));
        c.require(maximum_matching(g).size() == brute_force_matching(g).size(),
                  "graph seed " + std::to_string(seed) + ": oracle mismatch");
        ++checked;
    }
    auto koenig = [&](const CorpusEntry& entry, const std::string& tag) {
        const Matching m = maximum_matching(entry.graph);
        const VertexCover cover = minimum_vertex_cover(entry.graph, m);
        c.require(cover.size() == m.size(), tag + ": |cover| != |matching|");
        c.require(is_vertex_cover(entry.graph, cover), tag + ": cover misses an edge");
    };
    for (std::size_t i = 0; i < small.size(); ++i) koenig(small[i], "small " + std::to_string(i));
    for (std::size_t i = 0; i < large.size(); ++i) koenig(large[i], "large " + std::to_string(i));
    report(c);
}

void criterion_9(const BipartiteGraph& g6, const ExperimentConfig& config6,
                 const ExperimentReport& report6) {
    Criterion c{"criterion 9: byte-identical CSV across reruns, thread counts and the "
                "serial reference"};
    const std::string base = report_csv(report6);
    c.require(report_csv(run_experiment(g6, config6, 1)) == base,
              "single-thread rerun differs on the canonical experiment");
    c.require(report_csv(run_experiment_serial(g6, config6)) == base,
              "serial reference differs on the canonical experiment");

    const ExperimentReport pa = pathological_experiment(50, 10, 5, 99, 0);
    const ExperimentReport pb = pathological_experiment(50, 10, 5, 99, 1);
    c.require(report_csv(pa) == report_csv(pb),
              "adversarial experiment differs across thread counts");
    report(c);
}

}  // namespace

int main() {
    std::printf("building corpora...\n");
    std::fflush(stdout);
    const std::vector<CorpusEntry> small = build_small_corpus();
    const std::vector<CorpusEntry> large = build_large_corpus();

    criterion_1(small);
    criterion_2(small, large);
    criterion_3(small, large);
    criterion_4(small, large);
    criterion_5();

    ExperimentConfig config6;
    BipartiteGraph g6;
    const ExperimentReport report6 = criterion_6(&config6, &g6);
    criterion_7();
    criterion_8(small, large);
    criterion_9(g6, config6, report6);

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
