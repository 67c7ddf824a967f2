#pragma once

#include <optional>
#include <span>
#include <string>

#include "mskel/decomposition.hpp"
#include "mskel/graph.hpp"
#include "mskel/matching.hpp"

namespace mskel {

/// Forest-supported union of per-block alpha-matchings together with the
/// decomposition it was built from. The support never crosses blocks, every
/// block P vertex is saturated exactly to its level, every Q vertex at most
/// once, and the support retains a maximum matching of the host graph.
struct Skeleton {
    FractionalMatching weights;
    BlockDecomposition decomposition;

    /// Support edges (weight > 0), ascending.
    std::vector<Edge> support() const;
};

/// Exact alpha_i-matching of one block, supported on (P_i x Q_i) edges of g:
/// an integral max-flow on the scaled network divided by den(alpha_i).
/// Blocks produced by block_decomposition are always feasible; anything else
/// raises an internal-inconsistency error.
FractionalMatching block_alpha_matching(const BipartiteGraph& g, const Block& block);

/// Removes support cycles while preserving every per-vertex incident sum
/// exactly: each cycle is resolved by alternately shifting the largest
/// weight step that zeroes some edge, keeping all weights in [0,1]. Cycles
/// are found lowest-index-edge-first, so the result is deterministic.
FractionalMatching eliminate_cycles(const FractionalMatching& x);

/// block_decomposition, per-block alpha-matchings, cycle elimination, union.
Skeleton matching_skeleton(const BipartiteGraph& g);

/// Same construction over an already-computed decomposition of g.
Skeleton matching_skeleton(const BipartiteGraph& g, BlockDecomposition decomposition);

/// Outcome of the adversarial selection policy: either a skeleton of g that
/// avoids the forbidden edges entirely, or a refusal naming an edge whose
/// expansion ordering makes avoidance invalid.
struct AvoidOutcome {
    std::optional<Skeleton> skeleton;
    std::optional<Edge> violating_edge;
    bool refused() const { return !skeleton.has_value(); }
};

/// Decomposes g minus the forbidden edges; if every forbidden edge {p,q}
/// present in g satisfies alpha(p) >= alpha(q) under that decomposition, the
/// withheld-edge skeleton is also a skeleton of g (robustness under edge
/// additions) and is returned re-hosted. Otherwise refuses. Refusal is a
/// normal outcome, not an error.
AvoidOutcome skeleton_avoiding(const BipartiteGraph& g, std::span<const Edge> forbidden);

struct RobustnessResult {
    bool ok = false;
    std::string detail;
};

/// Builds g' = (E + added) - removed and reports whether its block
/// decomposition equals d block-for-block. Preconditions (removed edges
/// outside the skeleton support; every added {p,q} with alpha(p) >= alpha(q))
/// are rejected with distinct reasons.
RobustnessResult check_robustness(const BipartiteGraph& g, const BlockDecomposition& d,
                                  std::span<const Edge> added,
                                  std::span<const Edge> removed, const Skeleton& skeleton);

}  // namespace mskel
