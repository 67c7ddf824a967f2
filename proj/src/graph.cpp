#include "mskel/graph.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mskel {

namespace {

std::string edge_text(Edge e) {
    return "(" + std::to_string(e.p) + "," + std::to_string(e.q) + ")";
}

}  // namespace

BipartiteGraph::BipartiteGraph(std::uint32_t p_count, std::uint32_t q_count,
                               std::vector<Edge> edges)
    : p_count_(p_count), q_count_(q_count), edges_(std::move(edges)) {
    for (const Edge& e : edges_) {
        if (e.p >= p_count_ || e.q >= q_count_) {
            throw std::invalid_argument("edge " + edge_text(e) + " out of range for " +
                                        std::to_string(p_count_) + "+" +
                                        std::to_string(q_count_) + " graph");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool BipartiteGraph::has_edge(Edge e) const {
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<std::vector<std::uint32_t>> BipartiteGraph::adjacency_p() const {
    std::vector<std::vector<std::uint32_t>> adj(p_count_);
    for (const Edge& e : edges_) adj[e.p].push_back(e.q);
    return adj;
}

std::vector<std::vector<std::uint32_t>> BipartiteGraph::adjacency_q() const {
    std::vector<std::vector<std::uint32_t>> adj(q_count_);
    for (const Edge& e : edges_) adj[e.q].push_back(e.p);
    return adj;
}

BipartiteGraph build_graph(std::uint32_t p_count, std::uint32_t q_count,
                           std::span<const Edge> edges) {
    return BipartiteGraph(p_count, q_count, std::vector<Edge>(edges.begin(), edges.end()));
}

std::vector<std::uint32_t> neighbors(const BipartiteGraph& g,
                                     std::span<const std::uint32_t> p_set) {
    std::vector<char> in_set(g.p_count(), 0);
    for (std::uint32_t p : p_set) {
        if (p >= g.p_count()) {
            throw std::invalid_argument("neighbors: P index " + std::to_string(p) +
                                        " out of range");
        }
        in_set[p] = 1;
    }
    std::vector<char> seen(g.q_count(), 0);
    std::vector<std::uint32_t> out;
    for (const Edge& e : g.edges()) {
        if (in_set[e.p] && !seen[e.q]) {
            seen[e.q] = 1;
            out.push_back(e.q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

BipartiteGraph union_graphs(std::span<const BipartiteGraph> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("union_graphs: empty part list");
    }
    const std::uint32_t p_count = parts.front().p_count();
    const std::uint32_t q_count = parts.front().q_count();
    std::size_t total = 0;
    for (const BipartiteGraph& part : parts) {
        if (part.p_count() != p_count || part.q_count() != q_count) {
            throw std::invalid_argument("union_graphs: mismatched vertex counts");
        }
        total += part.edge_count();
    }
    std::vector<Edge> all;
    all.reserve(total);
    for (const BipartiteGraph& part : parts) {
        all.insert(all.end(), part.edges().begin(), part.edges().end());
    }
    return BipartiteGraph(p_count, q_count, std::move(all));
}

BipartiteGraph read_edge_list(std::istream& in, DuplicatePolicy policy,
                              std::ostream* diagnostics) {
    std::string line;
    std::uint32_t p_count = 0;
    std::uint32_t q_count = 0;
    std::size_t declared_m = 0;
    bool header_seen = false;
    std::vector<Edge> edges;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        char tag = 0;
        ls >> tag;
        if (tag == 'p') {
            if (header_seen) {
                throw std::runtime_error("edge list: duplicate header at line " +
                                         std::to_string(line_no));
            }
            if (!(ls >> p_count >> q_count >> declared_m)) {
                throw std::runtime_error("edge list: malformed header at line " +
                                         std::to_string(line_no));
            }
            header_seen = true;
            edges.reserve(declared_m);
        } else if (tag == 'e') {
            if (!header_seen) {
                throw std::runtime_error("edge list: edge before header at line " +
                                         std::to_string(line_no));
            }
            Edge e;
            if (!(ls >> e.p >> e.q)) {
                throw std::runtime_error("edge list: malformed edge at line " +
                                         std::to_string(line_no));
            }
            edges.push_back(e);
        } else {
            throw std::runtime_error("edge list: unknown record '" + std::string(1, tag) +
                                     "' at line " + std::to_string(line_no));
        }
    }
    if (!header_seen) {
        throw std::runtime_error("edge list: missing header line");
    }
    if (edges.size() != declared_m) {
        throw std::runtime_error("edge list: header declares " + std::to_string(declared_m) +
                                 " edges, found " + std::to_string(edges.size()));
    }

    std::vector<Edge> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) {
        if (policy == DuplicatePolicy::Error) {
            throw std::runtime_error("edge list: duplicate edge " + edge_text(*dup));
        }
        if (diagnostics != nullptr) {
            *diagnostics << "warning: duplicate edge " << edge_text(*dup)
                         << " collapsed\n";
        }
    }
    return BipartiteGraph(p_count, q_count, std::move(edges));
}

void write_edge_list(const BipartiteGraph& g, std::ostream& out) {
    out << "p " << g.p_count() << ' ' << g.q_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) {
        out << "e " << e.p << ' ' << e.q << '\n';
    }
}

BipartiteGraph load_edge_list(const std::filesystem::path& path, DuplicatePolicy policy,
                              std::ostream* diagnostics) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_edge_list(in, policy, diagnostics);
}

void save_edge_list(const BipartiteGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_edge_list(g, out);
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

}  // namespace mskel
