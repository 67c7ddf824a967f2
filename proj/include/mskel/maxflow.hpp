#pragma once

#include <cstdint>
#include <vector>

namespace mskel {

/// Dinic max-flow over a fixed node set with int64 capacities. Arc insertion
/// order is part of the interface: given the same arcs in the same order the
/// computed flow is identical, which the callers rely on for reproducible
/// outputs.
class MaxFlowNetwork {
public:
    explicit MaxFlowNetwork(std::uint32_t node_count);

    /// Adds arc from->to with the given capacity and its zero-capacity
    /// reverse; returns the arc id for flow_on().
    std::size_t add_arc(std::uint32_t from, std::uint32_t to, std::int64_t capacity);

    std::int64_t max_flow(std::uint32_t source, std::uint32_t sink);

    /// Flow currently on the arc with the given id.
    std::int64_t flow_on(std::size_t arc_id) const;

    /// After max_flow: marks the nodes with no residual path to `sink`.
    /// This is the source side of the sink-side-minimal (equivalently
    /// source-side-maximal) minimum cut.
    std::vector<char> max_source_side(std::uint32_t sink) const;

private:
    struct Arc {
        std::uint32_t to;
        std::size_t rev;        // index of the paired arc in adj_[to]
        std::int64_t remaining; // residual capacity
        std::int64_t original;
    };

    bool build_levels(std::uint32_t source, std::uint32_t sink);
    std::int64_t push(std::uint32_t v, std::uint32_t sink, std::int64_t limit);

    std::vector<std::vector<Arc>> adj_;
    std::vector<std::pair<std::uint32_t, std::size_t>> arc_index_; // id -> (node, slot)
    std::vector<int> level_;
    std::vector<std::size_t> iter_;
    std::vector<std::uint32_t> queue_;
};

}  // namespace mskel
