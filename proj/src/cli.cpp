#include "mskel/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "mskel/decomposition.hpp"
#include "mskel/experiment.hpp"
#include "mskel/generators.hpp"
#include "mskel/graph.hpp"
#include "mskel/matching.hpp"
#include "mskel/skeleton.hpp"

namespace mskel {

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

struct GraphSourceFlags {
    std::string input;
    std::string family;
    std::uint32_t p = 0, q = 0, r = 0, gen_k = 0;
    double prob = 0.0;
    bool strict_duplicates = false;
};

void add_family_flags(CLI::App* cmd, GraphSourceFlags& src) {
    cmd->add_option("--family", src.family, "graph family: perfect|random|pathological")
        ->check(CLI::IsMember({"perfect", "random", "pathological"}));
    cmd->add_option("--p", src.p, "P-side size (perfect: side size; random: |P|)");
    cmd->add_option("--q", src.q, "Q-side size (random)");
    cmd->add_option("--prob", src.prob, "edge probability (random)");
    cmd->add_option("--r", src.r, "group size r (pathological)");
}

BipartiteGraph generate_family(const GraphSourceFlags& src, std::uint64_t seed) {
    if (src.family == "perfect") {
        return gen_perfect(src.p);
    }
    if (src.family == "random") {
        return gen_random_bipartite(src.p, src.q, src.prob, seed);
    }
    if (src.family == "pathological") {
        return gen_pathological(src.r, src.gen_k);
    }
    throw std::runtime_error("unknown family '" + src.family + "'");
}

BipartiteGraph resolve_graph(const GraphSourceFlags& src, std::uint64_t seed) {
    if (!src.input.empty() && !src.family.empty()) {
        throw std::runtime_error("give either --input or --family, not both");
    }
    if (!src.input.empty()) {
        return load_edge_list(src.input,
                              src.strict_duplicates ? DuplicatePolicy::Error
                                                    : DuplicatePolicy::Warn,
                              &std::cerr);
    }
    if (!src.family.empty()) {
        return generate_family(src, seed);
    }
    throw std::runtime_error("no graph given: use --input or --family");
}

std::string graph_text(const BipartiteGraph& g) {
    std::ostringstream out;
    write_edge_list(g, out);
    return out.str();
}

std::string report_text(const ExperimentReport& report, const std::string& format) {
    if (format == "json") {
        return report_json(report).dump(2) + "\n";
    }
    return report_csv(report);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"matching-skeleton coresets for bipartite maximum matching"};
    app.require_subcommand(1);

    // gen ------------------------------------------------------------------
    GraphSourceFlags gen_src;
    std::uint64_t gen_seed = kDefaultSeed;
    std::string gen_output;
    auto* gen = app.add_subcommand("gen", "generate a graph file");
    add_family_flags(gen, gen_src);
    gen->get_option("--family")->required();
    gen->add_option("--k", gen_src.gen_k, "group padding divisor k (pathological)");
    gen->add_option("--seed", gen_seed, "generator seed (default 12345)");
    gen->add_option("--output", gen_output, "output path (default stdout)");

    // decompose --------------------------------------------------------------
    GraphSourceFlags dec_src;
    std::string dec_output;
    auto* decompose_cmd = app.add_subcommand("decompose", "emit the block decomposition");
    decompose_cmd->add_option("--input", dec_src.input, "edge-list file")->required();
    decompose_cmd->add_flag("--strict-duplicates", dec_src.strict_duplicates,
                            "reject duplicate edges instead of warning");
    decompose_cmd->add_option("--output", dec_output, "output path (default stdout)");

    // skeleton ---------------------------------------------------------------
    GraphSourceFlags sk_src;
    std::string sk_output;
    auto* skeleton_cmd =
        app.add_subcommand("skeleton", "emit the matching-skeleton support");
    skeleton_cmd->add_option("--input", sk_src.input, "edge-list file")->required();
    skeleton_cmd->add_flag("--strict-duplicates", sk_src.strict_duplicates,
                           "reject duplicate edges instead of warning");
    skeleton_cmd
        ->add_option("--output", sk_output,
                     "support edge-list path; weights go to <output>.weights.json")
        ->required();

    // cover ------------------------------------------------------------------
    GraphSourceFlags cov_src;
    std::string cov_output;
    auto* cover_cmd = app.add_subcommand("cover", "emit the canonical vertex cover");
    cover_cmd->add_option("--input", cov_src.input, "edge-list file")->required();
    cover_cmd->add_flag("--strict-duplicates", cov_src.strict_duplicates,
                        "reject duplicate edges instead of warning");
    cover_cmd->add_option("--output", cov_output, "output path (default stdout)");

    // simulate ---------------------------------------------------------------
    GraphSourceFlags sim_src;
    std::uint32_t sim_k = 1, sim_reps = 1;
    std::uint64_t sim_seed = kDefaultSeed;
    std::string sim_policy = "canonical", sim_format = "csv", sim_output, sim_forbidden;
    int sim_threads = 0;
    auto* simulate_cmd =
        app.add_subcommand("simulate", "run the coreset experiment on a graph");
    simulate_cmd->add_option("--input", sim_src.input, "edge-list file");
    add_family_flags(simulate_cmd, sim_src);
    simulate_cmd->add_flag("--strict-duplicates", sim_src.strict_duplicates,
                           "reject duplicate edges instead of warning");
    simulate_cmd->add_option("--k", sim_k, "number of players (parts)")->required();
    simulate_cmd->add_option("--reps", sim_reps, "trial count (default 1)");
    simulate_cmd->add_option("--seed", sim_seed, "master seed (default 12345)");
    simulate_cmd->add_option("--policy", sim_policy, "canonical|avoid|baseline")
        ->check(CLI::IsMember({"canonical", "avoid", "baseline"}));
    simulate_cmd->add_option("--forbidden", sim_forbidden,
                             "edge-list file withheld by the avoid policy");
    simulate_cmd->add_option("--format", sim_format, "csv|json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    simulate_cmd->add_option("--output", sim_output, "output path (default stdout)");
    simulate_cmd->add_option("--threads", sim_threads,
                             "worker threads, 0 = all (default 0)");

    // pathological -------------------------------------------------------------
    std::uint32_t pat_r = 0, pat_k = 0, pat_reps = 1;
    std::uint64_t pat_seed = kDefaultSeed;
    std::string pat_format = "csv", pat_output;
    int pat_threads = 0;
    auto* pathological_cmd = app.add_subcommand(
        "pathological", "adversarial-graph experiment with the avoid policy");
    pathological_cmd->add_option("--r", pat_r, "group size r")->required();
    pathological_cmd->add_option("--k", pat_k, "players and padding divisor")->required();
    pathological_cmd->add_option("--reps", pat_reps, "trial count (default 1)");
    pathological_cmd->add_option("--seed", pat_seed, "master seed (default 12345)");
    pathological_cmd->add_option("--format", pat_format, "csv|json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    pathological_cmd->add_option("--output", pat_output, "output path (default stdout)");
    pathological_cmd->add_option("--threads", pat_threads,
                                 "worker threads, 0 = all (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen->parsed()) {
            write_text(gen_output, graph_text(generate_family(gen_src, gen_seed)));
        } else if (decompose_cmd->parsed()) {
            const BipartiteGraph g = resolve_graph(dec_src, 0);
            const BlockDecomposition d = block_decomposition(g);
            write_text(dec_output, decomposition_report(g, d).dump(2) + "\n");
        } else if (skeleton_cmd->parsed()) {
            const BipartiteGraph g = resolve_graph(sk_src, 0);
            const Skeleton sk = matching_skeleton(g);
            write_text(sk_output,
                       graph_text(BipartiteGraph(g.p_count(), g.q_count(), sk.support())));
            nlohmann::json blocks = nlohmann::json::array();
            for (const Block& b : sk.decomposition.blocks()) {
                blocks.push_back({{"alpha", b.alpha.to_string()}});
            }
            nlohmann::json weights = nlohmann::json::array();
            for (const auto& [e, w] : sk.weights.weights()) {
                weights.push_back({{"p", e.p}, {"q", e.q}, {"weight", w.to_string()}});
            }
            write_text(sk_output + ".weights.json",
                       nlohmann::json{{"blocks", std::move(blocks)},
                                      {"weights", std::move(weights)}}
                               .dump(2) +
                           "\n");
        } else if (cover_cmd->parsed()) {
            const BipartiteGraph g = resolve_graph(cov_src, 0);
            const BlockDecomposition d = block_decomposition(g);
            const VertexCover cover = canonical_vertex_cover(g, d);
            const std::size_t mm = maximum_matching(g).size();
            if (cover.size() != mm) {
                throw std::runtime_error("internal invariant failure: |cover| = " +
                                         std::to_string(cover.size()) + " but mm = " +
                                         std::to_string(mm));
            }
            std::vector<std::uint32_t> cover_p, cover_q;
            for (const VertexRef& v : cover.vertices) {
                (v.side == Side::P ? cover_p : cover_q).push_back(v.index);
            }
            write_text(cov_output, nlohmann::json{{"p", cover_p},
                                                  {"q", cover_q},
                                                  {"size", cover.size()},
                                                  {"maximum_matching_size", mm}}
                                           .dump(2) +
                                       "\n");
        } else if (simulate_cmd->parsed()) {
            sim_src.gen_k = sim_k;  // pathological family pads by the player count
            const BipartiteGraph g = resolve_graph(sim_src, sim_seed);
            ExperimentConfig config;
            config.k = sim_k;
            config.repetitions = sim_reps;
            config.master_seed = sim_seed;
            config.policy = *parse_policy(sim_policy);
            if (config.policy == Policy::Avoid) {
                if (!sim_forbidden.empty()) {
                    const BipartiteGraph fg = load_edge_list(
                        sim_forbidden, DuplicatePolicy::Warn, &std::cerr);
                    if (fg.p_count() != g.p_count() || fg.q_count() != g.q_count()) {
                        throw std::runtime_error(
                            "--forbidden vertex counts do not match the graph");
                    }
                    config.forbidden = fg.edges();
                } else if (sim_src.family == "pathological") {
                    config.forbidden =
                        PathologicalLayout::for_params(sim_src.r, sim_k).middle_pairs();
                }
            }
            write_text(sim_output,
                       report_text(run_experiment(g, config, sim_threads), sim_format));
        } else if (pathological_cmd->parsed()) {
            write_text(pat_output,
                       report_text(pathological_experiment(pat_r, pat_k, pat_reps,
                                                           pat_seed, pat_threads),
                                   pat_format));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace mskel
