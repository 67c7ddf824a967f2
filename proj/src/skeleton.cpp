#include "mskel/skeleton.hpp"

#include <algorithm>
#include <stdexcept>

#include "mskel/maxflow.hpp"

namespace mskel {

namespace {

std::string edge_text(Edge e) {
    return "(" + std::to_string(e.p) + "," + std::to_string(e.q) + ")";
}

}  // namespace

std::vector<Edge> Skeleton::support() const {
    std::vector<Edge> edges;
    edges.reserve(weights.support_size());
    for (const auto& [e, w] : weights.weights()) edges.push_back(e);
    return edges;
}

FractionalMatching block_alpha_matching(const BipartiteGraph& g, const Block& block) {
    FractionalMatching x;
    if (block.p_set.empty()) {
        throw std::invalid_argument("block_alpha_matching: empty block P set");
    }
    if (block.alpha.is_zero()) {
        return x;  // isolated-vertex block, the 0-matching is empty
    }

    const auto np = static_cast<std::uint32_t>(block.p_set.size());
    const auto nq = static_cast<std::uint32_t>(block.q_set.size());
    std::vector<std::uint32_t> p_slot(g.p_count(), UINT32_MAX), q_slot(g.q_count(), UINT32_MAX);
    for (std::uint32_t i = 0; i < np; ++i) p_slot[block.p_set[i]] = i;
    for (std::uint32_t j = 0; j < nq; ++j) q_slot[block.q_set[j]] = j;

    const std::int64_t a = block.alpha.num();
    const std::int64_t b = block.alpha.den();
    MaxFlowNetwork net(2 + np + nq);
    const std::uint32_t source = 0;
    const std::uint32_t sink = 1 + np + nq;
    for (std::uint32_t i = 0; i < np; ++i) net.add_arc(source, 1 + i, a);

    std::vector<std::pair<Edge, std::size_t>> block_arcs;
    for (const Edge& e : g.edges()) {
        if (p_slot[e.p] == UINT32_MAX || q_slot[e.q] == UINT32_MAX) continue;
        block_arcs.emplace_back(
            e, net.add_arc(1 + p_slot[e.p], 1 + np + q_slot[e.q], a * np + 1));
    }
    for (std::uint32_t j = 0; j < nq; ++j) net.add_arc(1 + np + j, sink, b);

    if (net.max_flow(source, sink) != a * static_cast<std::int64_t>(np)) {
        throw std::logic_error("block_alpha_matching: block admits no " +
                               block.alpha.to_string() + "-matching");
    }
    for (const auto& [e, arc] : block_arcs) {
        const std::int64_t f = net.flow_on(arc);
        if (f > 0) x.set(e, Rational(f, b));
    }
    return x;
}

namespace {

/// Forest bookkeeping for cycle elimination. Nodes are the support's
/// endpoints, compressed; the union-find only ever over-connects (it is not
/// informed of splits), so a disagreeing find() is proof of disconnection
/// while an agreeing one is confirmed by the path search.
struct CycleResolver {
    std::vector<Edge> edges;
    std::vector<Rational> weight;
    std::vector<char> alive;

    std::vector<std::uint64_t> node_keys;  // sorted: p -> key<<1, q -> key<<1|1
    std::vector<std::vector<std::uint32_t>> forest;  // node -> incident alive slots
    std::vector<std::uint32_t> uf_parent;

    std::vector<int> visit_stamp;
    std::vector<std::uint32_t> bfs_parent_node;
    std::vector<std::uint32_t> bfs_parent_slot;
    int stamp = 0;

    std::uint32_t node_of(std::uint64_t key) const {
        const auto it = std::lower_bound(node_keys.begin(), node_keys.end(), key);
        return static_cast<std::uint32_t>(it - node_keys.begin());
    }
    std::uint32_t p_node(const Edge& e) const { return node_of(std::uint64_t{e.p} << 1); }
    std::uint32_t q_node(const Edge& e) const {
        return node_of((std::uint64_t{e.q} << 1) | 1);
    }

    std::uint32_t uf_find(std::uint32_t v) {
        while (uf_parent[v] != v) {
            uf_parent[v] = uf_parent[uf_parent[v]];
            v = uf_parent[v];
        }
        return v;
    }

    void link(std::uint32_t slot) {
        const std::uint32_t u = p_node(edges[slot]);
        const std::uint32_t v = q_node(edges[slot]);
        forest[u].push_back(slot);
        forest[v].push_back(slot);
        uf_parent[uf_find(u)] = uf_find(v);
    }

    void unlink(std::uint32_t slot) {
        for (std::uint32_t node : {p_node(edges[slot]), q_node(edges[slot])}) {
            auto& list = forest[node];
            list.erase(std::find(list.begin(), list.end(), slot));
        }
    }

    /// Forest path from u to v as edge slots, empty when disconnected.
    std::vector<std::uint32_t> path(std::uint32_t u, std::uint32_t v) {
        ++stamp;
        visit_stamp[u] = stamp;
        std::vector<std::uint32_t> queue{u};
        bool found = false;
        for (std::size_t head = 0; head < queue.size() && !found; ++head) {
            const std::uint32_t cur = queue[head];
            for (std::uint32_t slot : forest[cur]) {
                const std::uint32_t pn = p_node(edges[slot]);
                const std::uint32_t next = (pn == cur) ? q_node(edges[slot]) : pn;
                if (visit_stamp[next] == stamp) continue;
                visit_stamp[next] = stamp;
                bfs_parent_node[next] = cur;
                bfs_parent_slot[next] = slot;
                queue.push_back(next);
                if (next == v) {
                    found = true;
                    break;
                }
            }
        }
        std::vector<std::uint32_t> slots;
        if (!found) return slots;
        for (std::uint32_t cur = v; cur != u; cur = bfs_parent_node[cur]) {
            slots.push_back(bfs_parent_slot[cur]);
        }
        std::reverse(slots.begin(), slots.end());  // now ordered u -> v
        return slots;
    }
};

}  // namespace

FractionalMatching eliminate_cycles(const FractionalMatching& x) {
    CycleResolver r;
    r.edges.reserve(x.support_size());
    r.weight.reserve(x.support_size());
    for (const auto& [e, w] : x.weights()) {
        r.edges.push_back(e);
        r.weight.push_back(w);
        r.node_keys.push_back(std::uint64_t{e.p} << 1);
        r.node_keys.push_back((std::uint64_t{e.q} << 1) | 1);
    }
    std::sort(r.node_keys.begin(), r.node_keys.end());
    r.node_keys.erase(std::unique(r.node_keys.begin(), r.node_keys.end()),
                      r.node_keys.end());

    // The alternation bound below needs unit Q saturation; reject inputs
    // that are not alpha-matchings.
    {
        std::vector<Rational> q_sum(r.node_keys.size());
        for (std::size_t i = 0; i < r.edges.size(); ++i) {
            q_sum[r.q_node(r.edges[i])] += r.weight[i];
        }
        const Rational one(1);
        for (const Rational& s : q_sum) {
            if (s > one) {
                throw std::invalid_argument(
                    "eliminate_cycles: a Q vertex carries more than unit weight");
            }
        }
    }

    const auto n_nodes = r.node_keys.size();
    const auto n_edges = static_cast<std::uint32_t>(r.edges.size());
    r.alive.assign(n_edges, 1);
    r.forest.resize(n_nodes);
    r.uf_parent.resize(n_nodes);
    for (std::uint32_t v = 0; v < n_nodes; ++v) r.uf_parent[v] = v;
    r.visit_stamp.assign(n_nodes, 0);
    r.bfs_parent_node.resize(n_nodes);
    r.bfs_parent_slot.resize(n_nodes);

    for (std::uint32_t slot = 0; slot < n_edges; ++slot) {
        const std::uint32_t u = r.p_node(r.edges[slot]);
        const std::uint32_t v = r.q_node(r.edges[slot]);
        if (r.uf_find(u) != r.uf_find(v)) {
            r.link(slot);
            continue;
        }
        const std::vector<std::uint32_t> path = r.path(u, v);
        if (path.empty()) {
            // Union-find was stale after an earlier split; genuinely disconnected.
            r.link(slot);
            continue;
        }

        // Cycle = path(u..v) + this edge. Path edges at odd positions (1-based)
        // form one alternation class, even positions plus the new edge the
        // other. Shift weight from the class with the smaller minimum.
        std::vector<std::uint32_t> class_a, class_b;
        for (std::size_t i = 0; i < path.size(); ++i) {
            (i % 2 == 0 ? class_a : class_b).push_back(path[i]);
        }
        class_b.push_back(slot);

        auto class_min = [&](const std::vector<std::uint32_t>& cls) {
            Rational m = r.weight[cls.front()];
            for (std::uint32_t s : cls) m = std::min(m, r.weight[s]);
            return m;
        };
        const Rational min_a = class_min(class_a);
        const Rational min_b = class_min(class_b);
        const bool decrease_a = min_a <= min_b;
        const auto& dec = decrease_a ? class_a : class_b;
        const auto& inc = decrease_a ? class_b : class_a;
        const Rational eps = decrease_a ? min_a : min_b;

        for (std::uint32_t s : dec) r.weight[s] -= eps;
        for (std::uint32_t s : inc) {
            r.weight[s] += eps;
            if (r.weight[s] > Rational(1)) {
                throw std::logic_error("eliminate_cycles: alternation exceeded unit weight");
            }
        }
        for (std::uint32_t s : dec) {
            if (!r.weight[s].is_zero()) continue;
            r.alive[s] = 0;
            if (s != slot) r.unlink(s);
        }
        if (r.alive[slot]) r.link(slot);
    }

    FractionalMatching out;
    for (std::uint32_t slot = 0; slot < n_edges; ++slot) {
        if (r.alive[slot]) out.set(r.edges[slot], r.weight[slot]);
    }
    return out;
}

Skeleton matching_skeleton(const BipartiteGraph& g) {
    return matching_skeleton(g, block_decomposition(g));
}

Skeleton matching_skeleton(const BipartiteGraph& g, BlockDecomposition decomposition) {
    Skeleton sk;
    sk.decomposition = std::move(decomposition);
    for (const Block& block : sk.decomposition.blocks()) {
        const FractionalMatching acyclic = eliminate_cycles(block_alpha_matching(g, block));
        for (const auto& [e, w] : acyclic.weights()) sk.weights.set(e, w);
    }
    return sk;
}

AvoidOutcome skeleton_avoiding(const BipartiteGraph& g, std::span<const Edge> forbidden) {
    std::vector<Edge> sorted_forbidden(forbidden.begin(), forbidden.end());
    std::sort(sorted_forbidden.begin(), sorted_forbidden.end());
    sorted_forbidden.erase(std::unique(sorted_forbidden.begin(), sorted_forbidden.end()),
                           sorted_forbidden.end());
    const auto is_forbidden = [&](const Edge& e) {
        return std::binary_search(sorted_forbidden.begin(), sorted_forbidden.end(), e);
    };

    std::vector<Edge> kept;
    std::vector<Edge> withheld;
    kept.reserve(g.edge_count());
    for (const Edge& e : g.edges()) {
        (is_forbidden(e) ? withheld : kept).push_back(e);
    }

    Skeleton sk = matching_skeleton(BipartiteGraph(g.p_count(), g.q_count(), std::move(kept)));
    for (const Edge& e : withheld) {
        const Expansion ap = sk.decomposition.expansion_of({Side::P, e.p});
        const Expansion aq = sk.decomposition.expansion_of({Side::Q, e.q});
        if (!(ap >= aq)) {
            return {std::nullopt, e};
        }
    }
    // Adding the withheld edges back cannot change the decomposition, so the
    // skeleton is valid for g as-is.
    return {std::move(sk), std::nullopt};
}

RobustnessResult check_robustness(const BipartiteGraph& g, const BlockDecomposition& d,
                                  std::span<const Edge> added,
                                  std::span<const Edge> removed,
                                  const Skeleton& skeleton) {
    const std::vector<Edge> support = skeleton.support();
    for (const Edge& e : removed) {
        if (std::binary_search(support.begin(), support.end(), e)) {
            throw std::invalid_argument("check_robustness: removed edge " + edge_text(e) +
                                        " lies in the skeleton support");
        }
    }
    for (const Edge& e : added) {
        const Expansion ap = d.expansion_of({Side::P, e.p});
        const Expansion aq = d.expansion_of({Side::Q, e.q});
        if (!(ap >= aq)) {
            throw std::invalid_argument("check_robustness: expansion ordering violated for "
                                        "added edge " + edge_text(e));
        }
    }

    std::vector<Edge> combined = g.edges();
    combined.insert(combined.end(), added.begin(), added.end());
    std::sort(combined.begin(), combined.end());
    combined.erase(std::unique(combined.begin(), combined.end()), combined.end());
    std::vector<Edge> removed_sorted(removed.begin(), removed.end());
    std::sort(removed_sorted.begin(), removed_sorted.end());
    std::erase_if(combined, [&](const Edge& e) {
        return std::binary_search(removed_sorted.begin(), removed_sorted.end(), e);
    });

    const BlockDecomposition again =
        block_decomposition(BipartiteGraph(g.p_count(), g.q_count(), std::move(combined)));
    if (again == d) {
        return {true, ""};
    }
    const std::size_t limit = std::min(again.blocks().size(), d.blocks().size());
    std::size_t at = limit;
    for (std::size_t i = 0; i < limit; ++i) {
        if (!(again.blocks()[i] == d.blocks()[i])) {
            at = i;
            break;
        }
    }
    return {false, "decompositions diverge at block " + std::to_string(at)};
}

}  // namespace mskel
