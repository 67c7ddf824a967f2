#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mskel/graph.hpp"
#include "mskel/rational.hpp"

namespace mskel {

/// A set of host-graph edges, no two sharing an endpoint. Kept sorted.
struct Matching {
    std::vector<Edge> pairs;
    std::size_t size() const { return pairs.size(); }
};

struct VertexCover {
    std::vector<VertexRef> vertices;
    std::size_t size() const { return vertices.size(); }
};

/// Hopcroft-Karp. Ties are broken by ascending vertex index, so the result
/// is a pure function of the graph.
Matching maximum_matching(const BipartiteGraph& g);

/// Alternating-reachability cover from a maximum matching; |cover| == |m|,
/// which certifies both optimal. M must be a matching of g (validated);
/// maximality is the caller's contract and is not checked.
VertexCover minimum_vertex_cover(const BipartiteGraph& g, const Matching& m);

bool is_matching(const BipartiteGraph& g, const Matching& m);
bool is_vertex_cover(const BipartiteGraph& g, const VertexCover& cover);

/// Exhaustive-search maximum matching, usable as an oracle. Guarded to
/// m <= 25 edges; larger inputs are rejected.
Matching brute_force_matching(const BipartiteGraph& g);

/// Nonnegative edge weights; zero-weight entries are never stored. Range
/// and per-vertex constraints are checked by the verifiers below, not
/// enforced by the container (saturation targets differ between plain and
/// alpha-matchings).
class FractionalMatching {
public:
    /// Sets the weight of an edge; negative w throws, w == 0 erases.
    void set(Edge e, const Rational& w);
    const Rational* find(Edge e) const;
    const std::map<Edge, Rational>& weights() const { return weights_; }
    std::size_t support_size() const { return weights_.size(); }
    Rational total_weight() const;

    friend bool operator==(const FractionalMatching&, const FractionalMatching&) = default;

private:
    std::map<Edge, Rational> weights_;
};

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> violations;
    explicit operator bool() const { return ok; }
    void fail(std::string reason);
};

/// Checks the fractional-matching conditions against g: every keyed edge
/// exists in g and every vertex has incident weight at most 1 (exact).
VerifyReport verify_fractional_matching(const BipartiteGraph& g,
                                        const FractionalMatching& x);

/// Checks that x saturates every vertex of p_set exactly `alpha` times and
/// every Q vertex at most once, with support inside g.
VerifyReport verify_alpha_matching(const BipartiteGraph& g, const FractionalMatching& x,
                                   const Rational& alpha,
                                   std::span<const std::uint32_t> p_set);

}  // namespace mskel
