#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mskel/graph.hpp"

namespace mskel {

/// Perfect matching on t+t vertices: edges (i, i).
BipartiteGraph gen_perfect(std::uint32_t t);

/// Each of the p_count*q_count pairs appears independently with probability
/// `prob`, addressed by (seed, pair ordinal) so the result is reproducible
/// and thread-schedule independent. Rejects prob outside [0,1].
BipartiteGraph gen_random_bipartite(std::uint32_t p_count, std::uint32_t q_count,
                                    double prob, std::uint64_t seed);

/// Index layout of the six vertex groups in the adversarial generator.
/// Groups are contiguous half-open ranges in each side's index space:
///   P side: p1 = [0,r), p2 = [r,2r), p3 = [2r, 3r+2r/k)
///   Q side: q1 = [0, r+2r/k), q2 = [r+2r/k, 2r+2r/k), q3 = [2r+2r/k, 3r+2r/k)
struct PathologicalLayout {
    std::uint32_t r = 0;
    std::uint32_t k = 0;
    std::pair<std::uint32_t, std::uint32_t> p1, p2, p3;
    std::pair<std::uint32_t, std::uint32_t> q1, q2, q3;

    /// Validates r >= 1, k >= 1, and k | 2r.
    static PathologicalLayout for_params(std::uint32_t r, std::uint32_t k);

    /// All p2 x q2 pairs, the edge group the avoid policy withholds.
    std::vector<Edge> middle_pairs() const;
};

/// Six-group adversarial graph: p1 matched to the first r vertices of q1,
/// complete q1 x p2, a perfect matching p2-q2, complete q2 x p3, and the
/// first r vertices of p3 matched to all of q3. Deterministic; rejects
/// parameters where 2r is not divisible by k.
BipartiteGraph gen_pathological(std::uint32_t r, std::uint32_t k);

}  // namespace mskel
