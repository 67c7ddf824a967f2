#include "mskel/partition.hpp"

#include <stdexcept>

#include "mskel/rng.hpp"

namespace mskel {

PartitionResult random_k_partition(const BipartiteGraph& g, std::uint32_t k,
                                   std::uint64_t seed) {
    if (k == 0) {
        throw std::invalid_argument("random_k_partition: k must be >= 1");
    }
    const auto& edges = g.edges();
    const auto m = static_cast<std::int64_t>(edges.size());
    std::vector<std::uint32_t> dest(edges.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) {
        dest[static_cast<std::size_t>(i)] =
            k == 1 ? 0 : uniform_below(seed, static_cast<std::uint64_t>(i), k);
    }

    std::vector<std::vector<Edge>> buckets(k);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        buckets[dest[i]].push_back(edges[i]);
    }

    PartitionResult result;
    result.seed = seed;
    result.parts.reserve(k);
    for (auto& bucket : buckets) {
        result.parts.emplace_back(g.p_count(), g.q_count(), std::move(bucket));
    }
    return result;
}

}  // namespace mskel
