#include "mskel/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mskel {

MaxFlowNetwork::MaxFlowNetwork(std::uint32_t node_count)
    : adj_(node_count), level_(node_count), iter_(node_count) {
    queue_.reserve(node_count);
}

std::size_t MaxFlowNetwork::add_arc(std::uint32_t from, std::uint32_t to,
                                    std::int64_t capacity) {
    if (from >= adj_.size() || to >= adj_.size()) {
        throw std::invalid_argument("MaxFlowNetwork: node out of range");
    }
    if (capacity < 0) {
        throw std::invalid_argument("MaxFlowNetwork: negative capacity");
    }
    adj_[from].push_back({to, adj_[to].size(), capacity, capacity});
    adj_[to].push_back({from, adj_[from].size() - 1, 0, 0});
    arc_index_.emplace_back(from, adj_[from].size() - 1);
    return arc_index_.size() - 1;
}

bool MaxFlowNetwork::build_levels(std::uint32_t source, std::uint32_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    queue_.clear();
    queue_.push_back(source);
    level_[source] = 0;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
        const std::uint32_t v = queue_[head];
        for (const Arc& a : adj_[v]) {
            if (a.remaining > 0 && level_[a.to] < 0) {
                level_[a.to] = level_[v] + 1;
                queue_.push_back(a.to);
            }
        }
    }
    return level_[sink] >= 0;
}

std::int64_t MaxFlowNetwork::push(std::uint32_t v, std::uint32_t sink, std::int64_t limit) {
    if (v == sink) return limit;
    for (std::size_t& i = iter_[v]; i < adj_[v].size(); ++i) {
        Arc& a = adj_[v][i];
        if (a.remaining <= 0 || level_[a.to] != level_[v] + 1) continue;
        const std::int64_t got = push(a.to, sink, std::min(limit, a.remaining));
        if (got > 0) {
            a.remaining -= got;
            adj_[a.to][a.rev].remaining += got;
            return got;
        }
    }
    return 0;
}

std::int64_t MaxFlowNetwork::max_flow(std::uint32_t source, std::uint32_t sink) {
    if (source == sink) {
        throw std::invalid_argument("MaxFlowNetwork: source equals sink");
    }
    std::int64_t total = 0;
    while (build_levels(source, sink)) {
        std::fill(iter_.begin(), iter_.end(), 0);
        while (true) {
            const std::int64_t got =
                push(source, sink, std::numeric_limits<std::int64_t>::max());
            if (got == 0) break;
            total += got;
        }
    }
    return total;
}

std::int64_t MaxFlowNetwork::flow_on(std::size_t arc_id) const {
    const auto& [node, slot] = arc_index_.at(arc_id);
    const Arc& a = adj_[node][slot];
    return a.original - a.remaining;
}

std::vector<char> MaxFlowNetwork::max_source_side(std::uint32_t sink) const {
    // Reverse reachability to the sink along residual arcs: for an arc
    // stored at w pointing to u, the residual arc u->w has the remaining
    // capacity of its paired arc.
    std::vector<char> reaches_sink(adj_.size(), 0);
    std::vector<std::uint32_t> stack{sink};
    reaches_sink[sink] = 1;
    while (!stack.empty()) {
        const std::uint32_t w = stack.back();
        stack.pop_back();
        for (const Arc& a : adj_[w]) {
            const std::uint32_t u = a.to;
            if (reaches_sink[u]) continue;
            if (adj_[u][a.rev].remaining > 0) {
                reaches_sink[u] = 1;
                stack.push_back(u);
            }
        }
    }
    std::vector<char> source_side(adj_.size(), 0);
    for (std::size_t v = 0; v < adj_.size(); ++v) {
        source_side[v] = reaches_sink[v] ? 0 : 1;
    }
    return source_side;
}

}  // namespace mskel
