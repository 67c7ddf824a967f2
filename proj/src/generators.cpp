#include "mskel/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "mskel/rng.hpp"

namespace mskel {

BipartiteGraph gen_perfect(std::uint32_t t) {
    std::vector<Edge> edges;
    edges.reserve(t);
    for (std::uint32_t i = 0; i < t; ++i) edges.push_back({i, i});
    return BipartiteGraph(t, t, std::move(edges));
}

BipartiteGraph gen_random_bipartite(std::uint32_t p_count, std::uint32_t q_count,
                                    double prob, std::uint64_t seed) {
    if (std::isnan(prob) || prob < 0.0 || prob > 1.0) {
        throw std::invalid_argument("gen_random_bipartite: prob must lie in [0,1]");
    }
    std::vector<std::vector<Edge>> rows(p_count);
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(p_count); ++p) {
        auto& row = rows[static_cast<std::size_t>(p)];
        const std::uint64_t base = static_cast<std::uint64_t>(p) * q_count;
        for (std::uint32_t q = 0; q < q_count; ++q) {
            if (bernoulli(seed, base + q, prob)) {
                row.push_back({static_cast<std::uint32_t>(p), q});
            }
        }
    }
    std::vector<Edge> edges;
    for (const auto& row : rows) edges.insert(edges.end(), row.begin(), row.end());
    return BipartiteGraph(p_count, q_count, std::move(edges));
}

PathologicalLayout PathologicalLayout::for_params(std::uint32_t r, std::uint32_t k) {
    if (r < 1 || k < 1) {
        throw std::invalid_argument("pathological layout: r and k must be >= 1");
    }
    if ((2ull * r) % k != 0) {
        throw std::invalid_argument("pathological layout: 2r = " + std::to_string(2ull * r) +
                                    " is not divisible by k = " + std::to_string(k));
    }
    const auto pad = static_cast<std::uint32_t>(2ull * r / k);
    PathologicalLayout l;
    l.r = r;
    l.k = k;
    l.p1 = {0, r};
    l.p2 = {r, 2 * r};
    l.p3 = {2 * r, 3 * r + pad};
    l.q1 = {0, r + pad};
    l.q2 = {r + pad, 2 * r + pad};
    l.q3 = {2 * r + pad, 3 * r + pad};
    return l;
}

std::vector<Edge> PathologicalLayout::middle_pairs() const {
    std::vector<Edge> pairs;
    pairs.reserve(static_cast<std::size_t>(p2.second - p2.first) * (q2.second - q2.first));
    for (std::uint32_t p = p2.first; p < p2.second; ++p) {
        for (std::uint32_t q = q2.first; q < q2.second; ++q) {
            pairs.push_back({p, q});
        }
    }
    return pairs;
}

BipartiteGraph gen_pathological(std::uint32_t r, std::uint32_t k) {
    const PathologicalLayout l = PathologicalLayout::for_params(r, k);
    std::vector<Edge> edges;
    const std::size_t q1_size = l.q1.second - l.q1.first;
    edges.reserve(2 * q1_size * r + 3ull * r);

    // p1 matched to the first r vertices of q1.
    for (std::uint32_t i = 0; i < r; ++i) {
        edges.push_back({l.p1.first + i, l.q1.first + i});
    }
    // Complete q1 x p2.
    for (std::uint32_t p = l.p2.first; p < l.p2.second; ++p) {
        for (std::uint32_t q = l.q1.first; q < l.q1.second; ++q) {
            edges.push_back({p, q});
        }
    }
    // Perfect matching p2-q2.
    for (std::uint32_t i = 0; i < r; ++i) {
        edges.push_back({l.p2.first + i, l.q2.first + i});
    }
    // Complete q2 x p3.
    for (std::uint32_t p = l.p3.first; p < l.p3.second; ++p) {
        for (std::uint32_t q = l.q2.first; q < l.q2.second; ++q) {
            edges.push_back({p, q});
        }
    }
    // First r vertices of p3 matched to all of q3.
    for (std::uint32_t i = 0; i < r; ++i) {
        edges.push_back({l.p3.first + i, l.q3.first + i});
    }

    const auto p_total = l.p3.second;
    const auto q_total = l.q3.second;
    return BipartiteGraph(p_total, q_total, std::move(edges));
}

}  // namespace mskel
