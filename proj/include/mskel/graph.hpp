#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace mskel {

/// An edge between P-side index `p` and Q-side index `q`.
struct Edge {
    std::uint32_t p = 0;
    std::uint32_t q = 0;
    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

enum class Side : std::uint8_t { P, Q };

/// Uniform vertex addressing across both sides of the bipartition.
struct VertexRef {
    Side side = Side::P;
    std::uint32_t index = 0;
    friend constexpr auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

/// Immutable simple bipartite graph. Edges are kept sorted and duplicate-free;
/// construction validates index bounds. Values are safe to share across
/// threads once built.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    /// Collapses duplicate edges; throws std::invalid_argument naming the
    /// first out-of-range edge.
    BipartiteGraph(std::uint32_t p_count, std::uint32_t q_count, std::vector<Edge> edges);

    std::uint32_t p_count() const { return p_count_; }
    std::uint32_t q_count() const { return q_count_; }
    std::size_t vertex_count() const { return std::size_t{p_count_} + q_count_; }
    std::size_t edge_count() const { return edges_.size(); }

    /// Sorted, duplicate-free edge list.
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(Edge e) const;

    /// Adjacency of each P vertex as ascending Q indices.
    std::vector<std::vector<std::uint32_t>> adjacency_p() const;
    /// Adjacency of each Q vertex as ascending P indices.
    std::vector<std::vector<std::uint32_t>> adjacency_q() const;

    friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

private:
    std::uint32_t p_count_ = 0;
    std::uint32_t q_count_ = 0;
    std::vector<Edge> edges_;
};

BipartiteGraph build_graph(std::uint32_t p_count, std::uint32_t q_count,
                           std::span<const Edge> edges);

/// Union of adjacency sets of the P-side vertices in `p_set`, ascending.
/// Indices out of range throw std::invalid_argument.
std::vector<std::uint32_t> neighbors(const BipartiteGraph& g,
                                     std::span<const std::uint32_t> p_set);

/// Deduplicated edge union; all parts must share vertex counts.
BipartiteGraph union_graphs(std::span<const BipartiteGraph> parts);

// --- Edge-list text format -------------------------------------------------
//
//   p <p_count> <q_count> <m>
//   e <p_index> <q_index>      (m lines, 0-based)
//
// Lines starting with '#' are comments. Writers always emit edges in
// canonical sorted order.

enum class DuplicatePolicy { Warn, Error };

/// Parses the edge-list format. Duplicate edges are collapsed with a note on
/// `diagnostics` under DuplicatePolicy::Warn, or rejected under Error.
BipartiteGraph read_edge_list(std::istream& in, DuplicatePolicy policy,
                              std::ostream* diagnostics = nullptr);
void write_edge_list(const BipartiteGraph& g, std::ostream& out);

BipartiteGraph load_edge_list(const std::filesystem::path& path, DuplicatePolicy policy,
                              std::ostream* diagnostics = nullptr);
void save_edge_list(const BipartiteGraph& g, const std::filesystem::path& path);

}  // namespace mskel
