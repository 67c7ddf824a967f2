#include "mskel/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "mskel/maxflow.hpp"

namespace mskel {

const Rational& Expansion::value() const {
    if (infinite_) {
        throw std::logic_error("Expansion: value() on the infinite sentinel");
    }
    return value_;
}

BlockDecomposition::BlockDecomposition(std::uint32_t p_count, std::uint32_t q_count,
                                       std::vector<Block> blocks)
    : p_count_(p_count),
      q_count_(q_count),
      blocks_(std::move(blocks)),
      block_of_p_(p_count, -1),
      block_of_q_(q_count, -1) {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        for (std::uint32_t p : blocks_[i].p_set) block_of_p_[p] = static_cast<int>(i);
        for (std::uint32_t q : blocks_[i].q_set) block_of_q_[q] = static_cast<int>(i);
    }
    for (std::uint32_t q = 0; q < q_count_; ++q) {
        if (block_of_q_[q] < 0) leftover_q_.push_back(q);
    }
}

int BlockDecomposition::block_of(VertexRef v) const {
    if (v.side == Side::P) {
        if (v.index >= p_count_) {
            throw std::invalid_argument("expansion_of: P index out of range");
        }
        return block_of_p_[v.index];
    }
    if (v.index >= q_count_) {
        throw std::invalid_argument("expansion_of: Q index out of range");
    }
    return block_of_q_[v.index];
}

Expansion BlockDecomposition::expansion_of(VertexRef v) const {
    const int b = block_of(v);
    if (b < 0) {
        if (v.side == Side::P) {
            throw std::logic_error("expansion_of: P vertex outside every block");
        }
        return Expansion::infinite();
    }
    return Expansion(blocks_[static_cast<std::size_t>(b)].alpha);
}

namespace {

std::vector<std::uint32_t> checked_sorted_unique(std::span<const std::uint32_t> p_set,
                                                 std::uint32_t bound, const char* who) {
    if (p_set.empty()) {
        throw std::invalid_argument(std::string(who) + ": p_set must be nonempty");
    }
    std::vector<std::uint32_t> sorted(p_set.begin(), p_set.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.back() >= bound) {
        throw std::invalid_argument(std::string(who) + ": P index " +
                                    std::to_string(sorted.back()) + " out of range");
    }
    return sorted;
}

/// The slice of a graph seen by an expansion query: the members of p_set,
/// their adjacency, and the joint neighborhood.
struct ExpansionProblem {
    std::vector<std::uint32_t> p_vertices;             // sorted unique
    std::vector<std::vector<std::uint32_t>> adj;       // parallel to p_vertices
    std::vector<std::uint32_t> gamma;                  // sorted union of adj
    std::uint32_t q_count = 0;
};

ExpansionProblem make_problem(const BipartiteGraph& g,
                              std::vector<std::uint32_t> p_vertices) {
    ExpansionProblem prob;
    prob.q_count = g.q_count();
    prob.p_vertices = std::move(p_vertices);
    prob.adj.resize(prob.p_vertices.size());
    std::vector<std::uint32_t> slot_of(g.p_count(), UINT32_MAX);
    for (std::size_t i = 0; i < prob.p_vertices.size(); ++i) {
        slot_of[prob.p_vertices[i]] = static_cast<std::uint32_t>(i);
    }
    std::vector<char> seen(g.q_count(), 0);
    for (const Edge& e : g.edges()) {
        const std::uint32_t slot = slot_of[e.p];
        if (slot == UINT32_MAX) continue;
        prob.adj[slot].push_back(e.q);
        if (!seen[e.q]) {
            seen[e.q] = 1;
            prob.gamma.push_back(e.q);
        }
    }
    std::sort(prob.gamma.begin(), prob.gamma.end());
    return prob;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* who) {
    const __int128 r = static_cast<__int128>(a) * b;
    if (r > INT64_MAX) {
        throw std::overflow_error(std::string(who) + ": scaled capacity overflow");
    }
    return static_cast<std::int64_t>(r);
}

/// Scaled network for an alpha = num/den probe. Node layout: source, the
/// p slots, the gamma Q vertices, sink.
struct ScaledNetwork {
    MaxFlowNetwork net;
    std::uint32_t source, sink;
    std::vector<std::size_t> arc_ids;                  // per p->q arc
    std::vector<std::pair<std::uint32_t, std::uint32_t>> arc_edges;  // (slot, q)

    ScaledNetwork(const ExpansionProblem& prob, const Rational& alpha)
        : net(static_cast<std::uint32_t>(2 + prob.p_vertices.size() + prob.gamma.size())) {
        const auto np = static_cast<std::uint32_t>(prob.p_vertices.size());
        const auto nq = static_cast<std::uint32_t>(prob.gamma.size());
        source = 0;
        sink = 1 + np + nq;
        std::vector<std::uint32_t> q_node(prob.q_count, 0);
        for (std::uint32_t j = 0; j < nq; ++j) q_node[prob.gamma[j]] = 1 + np + j;

        const std::int64_t a = alpha.num();
        const std::int64_t infinite_cap =
            checked_mul(a, static_cast<std::int64_t>(np), "alpha_feasible") + 1;
        for (std::uint32_t i = 0; i < np; ++i) {
            net.add_arc(source, 1 + i, a);
            for (std::uint32_t q : prob.adj[i]) {
                arc_ids.push_back(net.add_arc(1 + i, q_node[q], infinite_cap));
                arc_edges.emplace_back(i, q);
            }
        }
        for (std::uint32_t j = 0; j < nq; ++j) {
            net.add_arc(1 + np + j, sink, alpha.den());
        }
    }

    std::int64_t target(const ExpansionProblem& prob, const Rational& alpha) const {
        return checked_mul(alpha.num(), static_cast<std::int64_t>(prob.p_vertices.size()),
                           "alpha_feasible");
    }
};

bool probe_feasible(const ExpansionProblem& prob, const Rational& alpha) {
    ScaledNetwork sn(prob, alpha);
    return sn.net.max_flow(sn.source, sn.sink) == sn.target(prob, alpha);
}

/// Smallest-denominator rational in the closed interval [lo, hi], lo <= hi,
/// both nonnegative. Classic continued-fraction descent.
Rational simplest_between(const Rational& lo, const Rational& hi) {
    const std::int64_t ceil_lo = (lo.num() + lo.den() - 1) / lo.den();
    if (Rational(ceil_lo) <= hi) return Rational(ceil_lo);
    const std::int64_t whole = lo.num() / lo.den();
    const Rational inner =
        simplest_between(Rational(1) / (hi - Rational(whole)),
                         Rational(1) / (lo - Rational(whole)));
    return Rational(whole) + Rational(1) / inner;
}

MinExpansionResult min_expansion_impl(const ExpansionProblem& prob) {
    std::vector<std::uint32_t> isolated;
    for (std::size_t i = 0; i < prob.p_vertices.size(); ++i) {
        if (prob.adj[i].empty()) isolated.push_back(prob.p_vertices[i]);
    }
    if (!isolated.empty()) {
        return {Rational(0), std::move(isolated)};
    }

    const auto np = static_cast<std::int64_t>(prob.p_vertices.size());
    const auto gamma_plus_one = static_cast<std::int64_t>(prob.gamma.size()) + 1;

    // Integer bisection over alpha(x) = x * (|Gamma|+1) / (2^T * |P|); the
    // grid spacing is below 1/(2|P|^2), so the bracket [alpha(x_lo),
    // alpha(x_hi)] isolates a unique rational with denominator <= |P|.
    const auto grid_span = static_cast<std::uint64_t>(
        checked_mul(2 * np, gamma_plus_one, "min_expansion"));
    const int t = std::bit_width(grid_span - 1);
    if (t >= 62) {
        throw std::overflow_error("min_expansion: bisection grid exceeds 64-bit range");
    }
    const std::int64_t x_max = std::int64_t{1} << t;
    const Rational step = Rational(gamma_plus_one, checked_mul(x_max, np, "min_expansion"));

    std::int64_t x_lo = 0;       // alpha(0) = 0 is always feasible
    std::int64_t x_hi = x_max;   // alpha(x_max) exceeds |Gamma(P)|/|P|
    while (x_hi - x_lo > 1) {
        const std::int64_t mid = x_lo + (x_hi - x_lo) / 2;
        if (probe_feasible(prob, Rational(mid) * step)) {
            x_lo = mid;
        } else {
            x_hi = mid;
        }
    }

    const Rational alpha = simplest_between(Rational(x_lo) * step, Rational(x_hi) * step);

    // One probe at the exact level; the source side of the maximal minimum
    // cut is the union of all tight sets.
    ScaledNetwork sn(prob, alpha);
    const std::int64_t flow = sn.net.max_flow(sn.source, sn.sink);
    if (flow != sn.target(prob, alpha)) {
        throw std::logic_error("min_expansion: snapped alpha is not feasible");
    }
    const std::vector<char> source_side = sn.net.max_source_side(sn.sink);

    std::vector<std::uint32_t> s_max;
    for (std::size_t i = 0; i < prob.p_vertices.size(); ++i) {
        if (source_side[1 + i]) s_max.push_back(prob.p_vertices[i]);
    }
    if (s_max.empty()) {
        throw std::logic_error("min_expansion: empty tight set at the minimum level");
    }

    // Consistency: the cut certifies |Gamma(S)| = alpha * |S| exactly.
    std::vector<char> in_s(prob.p_vertices.size(), 0);
    {
        std::size_t slot = 0;
        for (std::uint32_t p : s_max) {
            while (prob.p_vertices[slot] != p) ++slot;
            in_s[slot] = 1;
        }
    }
    std::vector<char> gamma_seen(prob.q_count, 0);
    std::int64_t gamma_size = 0;
    for (std::size_t i = 0; i < prob.p_vertices.size(); ++i) {
        if (!in_s[i]) continue;
        for (std::uint32_t q : prob.adj[i]) {
            if (!gamma_seen[q]) {
                gamma_seen[q] = 1;
                ++gamma_size;
            }
        }
    }
    if (Rational(gamma_size, static_cast<std::int64_t>(s_max.size())) != alpha) {
        throw std::logic_error("min_expansion: extracted set is not tight");
    }
    return {alpha, std::move(s_max)};
}

}  // namespace

bool alpha_feasible(const BipartiteGraph& g, const Rational& alpha,
                    std::span<const std::uint32_t> p_set) {
    if (alpha < Rational(0)) {
        throw std::invalid_argument("alpha_feasible: alpha must be nonnegative");
    }
    auto sorted = checked_sorted_unique(p_set, g.p_count(), "alpha_feasible");
    return probe_feasible(make_problem(g, std::move(sorted)), alpha);
}

MinExpansionResult min_expansion(const BipartiteGraph& g,
                                 std::span<const std::uint32_t> p_set) {
    auto sorted = checked_sorted_unique(p_set, g.p_count(), "min_expansion");
    return min_expansion_impl(make_problem(g, std::move(sorted)));
}

MinExpansionResult brute_force_min_expansion(const BipartiteGraph& g,
                                             std::span<const std::uint32_t> p_set) {
    auto sorted = checked_sorted_unique(p_set, g.p_count(), "brute_force_min_expansion");
    if (sorted.size() > 16) {
        throw std::invalid_argument("brute_force_min_expansion: guard |p_set| <= 16 violated");
    }
    const auto prob = make_problem(g, std::move(sorted));
    const std::size_t n = prob.p_vertices.size();
    const std::size_t words = (g.q_count() + 63) / 64;

    std::vector<std::uint64_t> masks(n * words, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t q : prob.adj[i]) {
            masks[i * words + q / 64] |= std::uint64_t{1} << (q % 64);
        }
    }

    std::vector<std::uint64_t> acc(words);
    Rational best;
    bool have_best = false;
    std::uint32_t union_mask = 0;
    for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::uint32_t bits = subset; bits != 0; bits &= bits - 1) {
            const auto i = static_cast<std::size_t>(std::countr_zero(bits));
            for (std::size_t w = 0; w < words; ++w) acc[w] |= masks[i * words + w];
        }
        std::int64_t gamma = 0;
        for (std::uint64_t word : acc) gamma += std::popcount(word);
        const Rational ratio(gamma, std::popcount(subset));
        if (!have_best || ratio < best) {
            best = ratio;
            have_best = true;
            union_mask = subset;
        } else if (ratio == best) {
            union_mask |= subset;
        }
    }

    // The union of minimizers is itself a minimizer (tight sets are closed
    // under union); recheck rather than assume.
    {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::uint32_t bits = union_mask; bits != 0; bits &= bits - 1) {
            const auto i = static_cast<std::size_t>(std::countr_zero(bits));
            for (std::size_t w = 0; w < words; ++w) acc[w] |= masks[i * words + w];
        }
        std::int64_t gamma = 0;
        for (std::uint64_t word : acc) gamma += std::popcount(word);
        if (Rational(gamma, std::popcount(union_mask)) != best) {
            throw std::logic_error("brute_force_min_expansion: union of minimizers not tight");
        }
    }

    MinExpansionResult result;
    result.alpha = best;
    for (std::uint32_t bits = union_mask; bits != 0; bits &= bits - 1) {
        result.s_max.push_back(
            prob.p_vertices[static_cast<std::size_t>(std::countr_zero(bits))]);
    }
    return result;
}

BlockDecomposition block_decomposition(const BipartiteGraph& g) {
    std::vector<char> removed_p(g.p_count(), 0), removed_q(g.q_count(), 0);
    std::vector<Edge> residual = g.edges();
    std::vector<std::uint32_t> alive_p(g.p_count());
    for (std::uint32_t p = 0; p < g.p_count(); ++p) alive_p[p] = p;

    std::vector<Block> blocks;
    while (!alive_p.empty()) {
        ExpansionProblem prob;
        prob.q_count = g.q_count();
        prob.p_vertices = alive_p;
        prob.adj.resize(alive_p.size());
        {
            std::vector<std::uint32_t> slot_of(g.p_count(), UINT32_MAX);
            for (std::size_t i = 0; i < alive_p.size(); ++i) slot_of[alive_p[i]] = static_cast<std::uint32_t>(i);
            std::vector<char> seen(g.q_count(), 0);
            for (const Edge& e : residual) {
                prob.adj[slot_of[e.p]].push_back(e.q);
                if (!seen[e.q]) {
                    seen[e.q] = 1;
                    prob.gamma.push_back(e.q);
                }
            }
            std::sort(prob.gamma.begin(), prob.gamma.end());
        }

        MinExpansionResult step = min_expansion_impl(prob);

        // Q_i = Gamma(P_i) in the residual graph.
        std::vector<char> in_s(g.p_count(), 0);
        for (std::uint32_t p : step.s_max) in_s[p] = 1;
        std::vector<char> q_hit(g.q_count(), 0);
        std::vector<std::uint32_t> q_set;
        for (const Edge& e : residual) {
            if (in_s[e.p] && !q_hit[e.q]) {
                q_hit[e.q] = 1;
                q_set.push_back(e.q);
            }
        }
        std::sort(q_set.begin(), q_set.end());

        if (!blocks.empty() && !(blocks.back().alpha < step.alpha)) {
            throw std::logic_error("block_decomposition: expansion levels failed to increase");
        }
        blocks.push_back({step.s_max, std::move(q_set), step.alpha});

        for (std::uint32_t p : blocks.back().p_set) removed_p[p] = 1;
        for (std::uint32_t q : blocks.back().q_set) removed_q[q] = 1;
        std::erase_if(residual,
                      [&](const Edge& e) { return removed_p[e.p] || removed_q[e.q]; });
        std::erase_if(alive_p, [&](std::uint32_t p) { return removed_p[p]; });
    }
    return BlockDecomposition(g.p_count(), g.q_count(), std::move(blocks));
}

VerifyReport verify_decomposition(const BipartiteGraph& g, const BlockDecomposition& d) {
    VerifyReport report;
    if (d.p_count() != g.p_count() || d.q_count() != g.q_count()) {
        report.fail("decomposition host sizes do not match the graph");
        return report;
    }

    std::vector<int> seen_p(g.p_count(), -1), seen_q(g.q_count(), -1);
    for (std::size_t i = 0; i < d.blocks().size(); ++i) {
        const Block& b = d.blocks()[i];
        if (b.p_set.empty()) {
            report.fail("block " + std::to_string(i) + " has an empty P set");
            continue;
        }
        for (std::uint32_t p : b.p_set) {
            if (p >= g.p_count() || seen_p[p] >= 0) {
                report.fail("block " + std::to_string(i) + ": P" + std::to_string(p) +
                            " out of range or repeated");
            } else {
                seen_p[p] = static_cast<int>(i);
            }
        }
        for (std::uint32_t q : b.q_set) {
            if (q >= g.q_count() || seen_q[q] >= 0) {
                report.fail("block " + std::to_string(i) + ": Q" + std::to_string(q) +
                            " out of range or repeated");
            } else {
                seen_q[q] = static_cast<int>(i);
            }
        }
        if (i > 0 && !(d.blocks()[i - 1].alpha < b.alpha)) {
            report.fail("alphas not strictly increasing at block " + std::to_string(i));
        }
        if (b.alpha != Rational(static_cast<std::int64_t>(b.q_set.size()),
                                static_cast<std::int64_t>(b.p_set.size()))) {
            report.fail("block " + std::to_string(i) + ": alpha " + b.alpha.to_string() +
                        " differs from |Q|/|P|");
        }
    }
    for (std::uint32_t p = 0; p < g.p_count(); ++p) {
        if (seen_p[p] < 0) {
            report.fail("P" + std::to_string(p) + " missing from every block");
        }
    }
    {
        std::vector<std::uint32_t> leftover_expected;
        for (std::uint32_t q = 0; q < g.q_count(); ++q) {
            if (seen_q[q] < 0) leftover_expected.push_back(q);
        }
        if (leftover_expected != d.leftover_q()) {
            report.fail("leftover_q does not equal the unabsorbed Q vertices");
        }
    }
    // Neighborhood containment in the original graph.
    for (const Edge& e : g.edges()) {
        if (seen_p[e.p] >= 0 && (seen_q[e.q] < 0 || seen_q[e.q] > seen_p[e.p])) {
            report.fail("edge (" + std::to_string(e.p) + "," + std::to_string(e.q) +
                        ") leaves block " + std::to_string(seen_p[e.p]) +
                        "'s closed neighborhood");
        }
    }
    if (!report.ok) return report;

    // Residual replay: per-block neighborhood identity, feasibility at
    // alpha_i, and oracle agreement where the guard allows.
    std::vector<char> removed_p(g.p_count(), 0), removed_q(g.q_count(), 0);
    std::vector<Edge> residual = g.edges();
    std::vector<std::uint32_t> alive_p(g.p_count());
    for (std::uint32_t p = 0; p < g.p_count(); ++p) alive_p[p] = p;

    for (std::size_t i = 0; i < d.blocks().size(); ++i) {
        const Block& b = d.blocks()[i];
        const BipartiteGraph residual_graph(g.p_count(), g.q_count(), residual);

        const auto gamma = neighbors(residual_graph, b.p_set);
        if (gamma != b.q_set) {
            report.fail("block " + std::to_string(i) +
                        ": q_set differs from the residual neighborhood");
        }
        if (!alpha_feasible(residual_graph, b.alpha, b.p_set)) {
            report.fail("block " + std::to_string(i) + ": no " + b.alpha.to_string() +
                        "-matching exists for its P set");
        }
        if (alive_p.size() <= 16) {
            const auto oracle = brute_force_min_expansion(residual_graph, alive_p);
            if (oracle.alpha != b.alpha || oracle.s_max != b.p_set) {
                report.fail("block " + std::to_string(i) +
                            ": disagrees with the brute-force expansion oracle");
            }
        }

        for (std::uint32_t p : b.p_set) removed_p[p] = 1;
        for (std::uint32_t q : b.q_set) removed_q[q] = 1;
        std::erase_if(residual,
                      [&](const Edge& e) { return removed_p[e.p] || removed_q[e.q]; });
        std::erase_if(alive_p, [&](std::uint32_t p) { return removed_p[p]; });
    }
    return report;
}

VertexCover canonical_vertex_cover(const BipartiteGraph& g, const BlockDecomposition& d) {
    if (d.p_count() != g.p_count() || d.q_count() != g.q_count()) {
        throw std::invalid_argument("canonical_vertex_cover: decomposition/graph mismatch");
    }
    const Rational one(1);
    VertexCover cover;
    for (const Block& b : d.blocks()) {
        if (b.alpha >= one) {
            for (std::uint32_t p : b.p_set) cover.vertices.push_back({Side::P, p});
        } else {
            for (std::uint32_t q : b.q_set) cover.vertices.push_back({Side::Q, q});
        }
    }
    std::sort(cover.vertices.begin(), cover.vertices.end());
    return cover;
}

nlohmann::json decomposition_report(const BipartiteGraph& g, const BlockDecomposition& d) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const Block& b : d.blocks()) {
        blocks.push_back({{"alpha", b.alpha.to_string()}, {"p", b.p_set}, {"q", b.q_set}});
    }
    const VertexCover cover = canonical_vertex_cover(g, d);
    std::vector<std::uint32_t> cover_p, cover_q;
    for (const VertexRef& v : cover.vertices) {
        (v.side == Side::P ? cover_p : cover_q).push_back(v.index);
    }
    return {{"blocks", std::move(blocks)},
            {"leftover_q", d.leftover_q()},
            {"canonical_cover", {{"p", std::move(cover_p)}, {"q", std::move(cover_q)}}}};
}

}  // namespace mskel
