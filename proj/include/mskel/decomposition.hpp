#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mskel/graph.hpp"
#include "mskel/matching.hpp"
#include "mskel/rational.hpp"

#include "json.hpp"

namespace mskel {

/// Expansion level of a vertex: a nonnegative rational, or infinite for
/// Q vertices never absorbed into a block. Infinity compares greater than
/// every finite level.
class Expansion {
public:
    Expansion(Rational value) : value_(std::move(value)), infinite_(false) {}
    static Expansion infinite() { return Expansion(); }

    bool is_infinite() const { return infinite_; }
    const Rational& value() const;

    friend bool operator==(const Expansion& a, const Expansion& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend bool operator<(const Expansion& a, const Expansion& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator>(const Expansion& a, const Expansion& b) { return b < a; }
    friend bool operator<=(const Expansion& a, const Expansion& b) { return !(b < a); }
    friend bool operator>=(const Expansion& a, const Expansion& b) { return !(a < b); }

private:
    Expansion() : infinite_(true) {}
    Rational value_;
    bool infinite_;
};

/// One extracted block: a P set, its residual neighborhood, and the exact
/// expansion level alpha = |q_set| / |p_set|.
struct Block {
    std::vector<std::uint32_t> p_set;
    std::vector<std::uint32_t> q_set;
    Rational alpha;
    friend bool operator==(const Block&, const Block&) = default;
};

/// Ordered blocks with strictly increasing alphas; Q vertices outside every
/// block (only isolated ones can be) are leftover with infinite level.
class BlockDecomposition {
public:
    BlockDecomposition() = default;
    BlockDecomposition(std::uint32_t p_count, std::uint32_t q_count,
                       std::vector<Block> blocks);

    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<std::uint32_t>& leftover_q() const { return leftover_q_; }
    std::uint32_t p_count() const { return p_count_; }
    std::uint32_t q_count() const { return q_count_; }

    /// Block index holding the vertex, or -1 for leftover Q vertices.
    /// Throws for out-of-range vertices.
    int block_of(VertexRef v) const;

    /// Block alpha, or the infinite sentinel for leftover Q vertices.
    Expansion expansion_of(VertexRef v) const;

    friend bool operator==(const BlockDecomposition& a, const BlockDecomposition& b) {
        return a.p_count_ == b.p_count_ && a.q_count_ == b.q_count_ &&
               a.blocks_ == b.blocks_;
    }

private:
    std::uint32_t p_count_ = 0;
    std::uint32_t q_count_ = 0;
    std::vector<Block> blocks_;
    std::vector<std::uint32_t> leftover_q_;
    std::vector<int> block_of_p_, block_of_q_;
};

inline Expansion expansion_of(const BlockDecomposition& d, VertexRef v) {
    return d.expansion_of(v);
}

/// True iff an alpha-matching with respect to p_set exists in g, decided by
/// a max-flow on the scaled network (source->p capacity num, p->q capacity
/// num*|p_set|+1, q->sink capacity den) reaching value num*|p_set|.
bool alpha_feasible(const BipartiteGraph& g, const Rational& alpha,
                    std::span<const std::uint32_t> p_set);

struct MinExpansionResult {
    Rational alpha;
    std::vector<std::uint32_t> s_max;
    friend bool operator==(const MinExpansionResult&, const MinExpansionResult&) = default;
};

/// Exact minimum of |Gamma(S)|/|S| over nonempty S within p_set together
/// with the inclusion-maximal minimizer. Found by bisecting the feasibility
/// threshold to resolution below 1/(2|p_set|^2), snapping to the unique
/// rational with denominator <= |p_set| by continued fractions, and reading
/// the maximal tight set off the source-side-maximal minimum cut at that
/// exact level. Isolated members yield alpha = 0 with the isolated set.
MinExpansionResult min_expansion(const BipartiteGraph& g,
                                 std::span<const std::uint32_t> p_set);

/// Oracle: exhaustive enumeration of all nonempty subsets (|p_set| <= 16),
/// returning the minimum ratio and the union of all minimizers.
MinExpansionResult brute_force_min_expansion(const BipartiteGraph& g,
                                             std::span<const std::uint32_t> p_set);

/// Repeatedly extracts the largest minimum-expansion set from the residual
/// graph until no P vertices remain.
BlockDecomposition block_decomposition(const BipartiteGraph& g);

/// Checks every structural invariant of d against g, plus per-block
/// feasibility at alpha_i and brute-force agreement where the residual P
/// set is small enough for the oracle.
VerifyReport verify_decomposition(const BipartiteGraph& g, const BlockDecomposition& d);

/// The smaller side of each block: Q vertices with alpha < 1 and P vertices
/// with alpha >= 1. Always a minimum vertex cover.
VertexCover canonical_vertex_cover(const BipartiteGraph& g, const BlockDecomposition& d);

/// JSON form used by the decompose command: blocks with "num/den" alphas,
/// leftover Q vertices, and the canonical cover.
nlohmann::json decomposition_report(const BipartiteGraph& g, const BlockDecomposition& d);

}  // namespace mskel
