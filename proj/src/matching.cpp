#include "mskel/matching.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mskel {

namespace {

constexpr std::uint32_t kUnmatched = std::numeric_limits<std::uint32_t>::max();

struct HopcroftKarp {
    const std::vector<std::vector<std::uint32_t>> adj;
    const std::uint32_t np;
    const std::uint32_t nq;
    std::vector<std::uint32_t> match_p, match_q, dist;

    explicit HopcroftKarp(const BipartiteGraph& g)
        : adj(g.adjacency_p()),
          np(g.p_count()),
          nq(g.q_count()),
          match_p(np, kUnmatched),
          match_q(nq, kUnmatched),
          dist(np) {}

    bool bfs() {
        constexpr std::uint32_t inf = std::numeric_limits<std::uint32_t>::max();
        std::vector<std::uint32_t> queue;
        queue.reserve(np);
        for (std::uint32_t p = 0; p < np; ++p) {
            if (match_p[p] == kUnmatched) {
                dist[p] = 0;
                queue.push_back(p);
            } else {
                dist[p] = inf;
            }
        }
        std::uint32_t found = inf;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::uint32_t p = queue[head];
            if (dist[p] >= found) continue;
            for (std::uint32_t q : adj[p]) {
                const std::uint32_t p2 = match_q[q];
                if (p2 == kUnmatched) {
                    found = std::min(found, dist[p] + 1);
                } else if (dist[p2] == inf) {
                    dist[p2] = dist[p] + 1;
                    queue.push_back(p2);
                }
            }
        }
        return found != inf;
    }

    bool dfs(std::uint32_t p) {
        for (std::uint32_t q : adj[p]) {
            const std::uint32_t p2 = match_q[q];
            if (p2 == kUnmatched || (dist[p2] == dist[p] + 1 && dfs(p2))) {
                match_p[p] = q;
                match_q[q] = p;
                return true;
            }
        }
        dist[p] = std::numeric_limits<std::uint32_t>::max();
        return false;
    }

    void run() {
        while (bfs()) {
            for (std::uint32_t p = 0; p < np; ++p) {
                if (match_p[p] == kUnmatched) dfs(p);
            }
        }
    }
};

}  // namespace

Matching maximum_matching(const BipartiteGraph& g) {
    HopcroftKarp hk(g);
    hk.run();
    Matching m;
    for (std::uint32_t p = 0; p < g.p_count(); ++p) {
        if (hk.match_p[p] != kUnmatched) m.pairs.push_back({p, hk.match_p[p]});
    }
    return m;
}

bool is_matching(const BipartiteGraph& g, const Matching& m) {
    std::vector<char> used_p(g.p_count(), 0), used_q(g.q_count(), 0);
    for (const Edge& e : m.pairs) {
        if (e.p >= g.p_count() || e.q >= g.q_count()) return false;
        if (!g.has_edge(e)) return false;
        if (used_p[e.p] || used_q[e.q]) return false;
        used_p[e.p] = used_q[e.q] = 1;
    }
    return true;
}

bool is_vertex_cover(const BipartiteGraph& g, const VertexCover& cover) {
    std::vector<char> in_p(g.p_count(), 0), in_q(g.q_count(), 0);
    for (const VertexRef& v : cover.vertices) {
        if (v.side == Side::P) {
            if (v.index >= g.p_count()) return false;
            in_p[v.index] = 1;
        } else {
            if (v.index >= g.q_count()) return false;
            in_q[v.index] = 1;
        }
    }
    for (const Edge& e : g.edges()) {
        if (!in_p[e.p] && !in_q[e.q]) return false;
    }
    return true;
}

VertexCover minimum_vertex_cover(const BipartiteGraph& g, const Matching& m) {
    if (!is_matching(g, m)) {
        throw std::invalid_argument("minimum_vertex_cover: not a matching of the graph");
    }
    std::vector<std::uint32_t> match_p(g.p_count(), kUnmatched);
    std::vector<std::uint32_t> match_q(g.q_count(), kUnmatched);
    for (const Edge& e : m.pairs) {
        match_p[e.p] = e.q;
        match_q[e.q] = e.p;
    }
    const auto adj = g.adjacency_p();

    // Alternating BFS from unmatched P vertices: unmatched edges P->Q,
    // matched edges Q->P.
    std::vector<char> visited_p(g.p_count(), 0), visited_q(g.q_count(), 0);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t p = 0; p < g.p_count(); ++p) {
        if (match_p[p] == kUnmatched) {
            visited_p[p] = 1;
            queue.push_back(p);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t p = queue[head];
        for (std::uint32_t q : adj[p]) {
            if (match_p[p] == q || visited_q[q]) continue;
            visited_q[q] = 1;
            const std::uint32_t p2 = match_q[q];
            if (p2 != kUnmatched && !visited_p[p2]) {
                visited_p[p2] = 1;
                queue.push_back(p2);
            }
        }
    }

    VertexCover cover;
    for (std::uint32_t p = 0; p < g.p_count(); ++p) {
        if (!visited_p[p]) cover.vertices.push_back({Side::P, p});
    }
    for (std::uint32_t q = 0; q < g.q_count(); ++q) {
        if (visited_q[q]) cover.vertices.push_back({Side::Q, q});
    }
    return cover;
}

Matching brute_force_matching(const BipartiteGraph& g) {
    if (g.edge_count() > 25) {
        throw std::invalid_argument("brute_force_matching: guard m <= 25 violated (m = " +
                                    std::to_string(g.edge_count()) + ")");
    }
    const auto& edges = g.edges();
    std::vector<char> used_p(g.p_count(), 0), used_q(g.q_count(), 0);
    std::vector<Edge> current, best;

    auto search = [&](auto&& self, std::size_t idx) -> void {
        if (current.size() + (edges.size() - idx) <= best.size()) return;
        if (idx == edges.size()) {
            if (current.size() > best.size()) best = current;
            return;
        }
        const Edge& e = edges[idx];
        if (!used_p[e.p] && !used_q[e.q]) {
            used_p[e.p] = used_q[e.q] = 1;
            current.push_back(e);
            self(self, idx + 1);
            current.pop_back();
            used_p[e.p] = used_q[e.q] = 0;
        }
        self(self, idx + 1);
    };
    search(search, 0);
    std::sort(best.begin(), best.end());
    return Matching{std::move(best)};
}

void FractionalMatching::set(Edge e, const Rational& w) {
    if (w < Rational(0)) {
        throw std::invalid_argument("FractionalMatching: negative weight");
    }
    if (w.is_zero()) {
        weights_.erase(e);
    } else {
        weights_[e] = w;
    }
}

const Rational* FractionalMatching::find(Edge e) const {
    const auto it = weights_.find(e);
    return it == weights_.end() ? nullptr : &it->second;
}

Rational FractionalMatching::total_weight() const {
    Rational sum;
    for (const auto& [e, w] : weights_) sum += w;
    return sum;
}

void VerifyReport::fail(std::string reason) {
    ok = false;
    violations.push_back(std::move(reason));
}

namespace {

std::string vertex_text(Side side, std::uint32_t index) {
    return std::string(side == Side::P ? "P" : "Q") + std::to_string(index);
}

struct IncidentSums {
    std::vector<Rational> p_sum, q_sum;
};

IncidentSums incident_sums(const BipartiteGraph& g, const FractionalMatching& x,
                           VerifyReport& report) {
    IncidentSums sums{std::vector<Rational>(g.p_count()), std::vector<Rational>(g.q_count())};
    const Rational one(1);
    for (const auto& [e, w] : x.weights()) {
        if (e.p >= g.p_count() || e.q >= g.q_count() || !g.has_edge(e)) {
            report.fail("weighted edge (" + std::to_string(e.p) + "," + std::to_string(e.q) +
                        ") is not an edge of the host graph");
            continue;
        }
        if (w > one) {
            report.fail("edge (" + std::to_string(e.p) + "," + std::to_string(e.q) +
                        ") has weight " + w.to_string() + " outside [0,1]");
        }
        sums.p_sum[e.p] += w;
        sums.q_sum[e.q] += w;
    }
    return sums;
}

}  // namespace

VerifyReport verify_fractional_matching(const BipartiteGraph& g,
                                        const FractionalMatching& x) {
    VerifyReport report;
    const IncidentSums sums = incident_sums(g, x, report);
    const Rational one(1);
    for (std::uint32_t p = 0; p < g.p_count(); ++p) {
        if (sums.p_sum[p] > one) {
            report.fail(vertex_text(Side::P, p) + " has incident weight " +
                        sums.p_sum[p].to_string() + " > 1");
        }
    }
    for (std::uint32_t q = 0; q < g.q_count(); ++q) {
        if (sums.q_sum[q] > one) {
            report.fail(vertex_text(Side::Q, q) + " has incident weight " +
                        sums.q_sum[q].to_string() + " > 1");
        }
    }
    return report;
}

VerifyReport verify_alpha_matching(const BipartiteGraph& g, const FractionalMatching& x,
                                   const Rational& alpha,
                                   std::span<const std::uint32_t> p_set) {
    VerifyReport report;
    const IncidentSums sums = incident_sums(g, x, report);
    for (std::uint32_t p : p_set) {
        if (p >= g.p_count()) {
            report.fail("P index " + std::to_string(p) + " out of range");
            continue;
        }
        if (sums.p_sum[p] != alpha) {
            report.fail(vertex_text(Side::P, p) + " saturates " + sums.p_sum[p].to_string() +
                        ", expected exactly " + alpha.to_string());
        }
    }
    const Rational one(1);
    for (std::uint32_t q = 0; q < g.q_count(); ++q) {
        if (sums.q_sum[q] > one) {
            report.fail(vertex_text(Side::Q, q) + " has incident weight " +
                        sums.q_sum[q].to_string() + " > 1");
        }
    }
    return report;
}

}  // namespace mskel
