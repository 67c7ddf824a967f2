#pragma once

#include <cstdint>
#include <vector>

#include "mskel/graph.hpp"

namespace mskel {

/// Result of a random k-partition: edge-disjoint parts over the parent's
/// vertex sets whose union restores the parent exactly.
struct PartitionResult {
    std::vector<BipartiteGraph> parts;
    std::uint64_t seed = 0;
};

/// Sends each edge independently and uniformly to one of k parts. The
/// destination is a pure function of (seed, edge ordinal in the canonical
/// sorted edge list), so the partition is reproducible and independent of
/// thread count. Rejects k = 0.
PartitionResult random_k_partition(const BipartiteGraph& g, std::uint32_t k,
                                   std::uint64_t seed);

}  // namespace mskel
