#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>

#include "mskel/generators.hpp"
#include "mskel/matching.hpp"
#include "mskel/partition.hpp"
#include "mskel/rng.hpp"
#include "mskel/skeleton.hpp"
#include "mskel/union_find.hpp"

using namespace mskel;

namespace {

BipartiteGraph medium_random(std::uint64_t seed) {
    const std::uint32_t p = 2 + derive_u64(seed, 0) % 30;
    const std::uint32_t q = 2 + derive_u64(seed, 1) % 30;
    const double prob = 0.03 + 0.4 * (derive_u64(seed, 2) % 100) / 100.0;
    return gen_random_bipartite(p, q, prob, derive_u64(seed, 3));
}

bool support_is_acyclic(const BipartiteGraph& g, const std::vector<Edge>& support) {
    UnionFind uf(g.p_count() + g.q_count());
    for (const Edge& e : support) {
        if (!uf.unite(e.p, g.p_count() + e.q)) return false;
    }
    return true;
}

std::map<std::uint32_t, Rational> side_sums(const FractionalMatching& x, Side side) {
    std::map<std::uint32_t, Rational> sums;
    for (const auto& [e, w] : x.weights()) {
        sums[side == Side::P ? e.p : e.q] += w;
    }
    return sums;
}

void check_skeleton_invariants(const BipartiteGraph& g, const Skeleton& sk) {
    const std::vector<Edge> support = sk.support();
    if (g.vertex_count() > 0) {
        CHECK(support.size() <= g.vertex_count() - 1);
    } else {
        CHECK(support.empty());
    }
    CHECK(support_is_acyclic(g, support));

    // Exact saturation: every block P vertex at its level, every Q vertex in
    // a block saturated exactly once, leftovers untouched.
    const auto p_sums = side_sums(sk.weights, Side::P);
    const auto q_sums = side_sums(sk.weights, Side::Q);
    for (const Block& b : sk.decomposition.blocks()) {
        for (std::uint32_t p : b.p_set) {
            const auto it = p_sums.find(p);
            const Rational sum = it == p_sums.end() ? Rational(0) : it->second;
            CHECK(sum == b.alpha);
        }
        for (std::uint32_t q : b.q_set) {
            const auto it = q_sums.find(q);
            REQUIRE(it != q_sums.end());
            CHECK(it->second == Rational(1));
        }
    }
    for (std::uint32_t q : sk.decomposition.leftover_q()) {
        CHECK(q_sums.find(q) == q_sums.end());
    }

    // Block purity: no support edge joins two blocks.
    for (const Edge& e : support) {
        CHECK(sk.decomposition.block_of({Side::P, e.p}) ==
              sk.decomposition.block_of({Side::Q, e.q}));
    }

    // The support preserves the maximum matching size.
    const BipartiteGraph support_graph(g.p_count(), g.q_count(), support);
    CHECK(maximum_matching(support_graph).size() == maximum_matching(g).size());
}

}  // namespace

TEST_CASE("block_alpha_matching on fixed blocks") {
    const BipartiteGraph perfect = gen_perfect(3);
    const BlockDecomposition d1 = block_decomposition(perfect);
    const FractionalMatching x1 = block_alpha_matching(perfect, d1.blocks().at(0));
    CHECK(x1.support_size() == 3);
    for (const auto& [e, w] : x1.weights()) CHECK(w == Rational(1));

    const BipartiteGraph star = build_graph(1, 2, std::vector<Edge>{{0, 0}, {0, 1}});
    const FractionalMatching x2 =
        block_alpha_matching(star, block_decomposition(star).blocks().at(0));
    CHECK(x2.support_size() == 2);
    for (const auto& [e, w] : x2.weights()) CHECK(w == Rational(1));

    const BipartiteGraph shared = build_graph(2, 1, std::vector<Edge>{{0, 0}, {1, 0}});
    const FractionalMatching x3 =
        block_alpha_matching(shared, block_decomposition(shared).blocks().at(0));
    CHECK(x3.support_size() == 2);
    for (const auto& [e, w] : x3.weights()) CHECK(w == Rational(1, 2));

    // A block claiming an unachievable level is an internal inconsistency.
    Block bogus{{0, 1}, {0}, Rational(1)};
    CHECK_THROWS_AS(block_alpha_matching(shared, bogus), std::logic_error);
}

TEST_CASE("eliminate_cycles leaves forests unchanged") {
    FractionalMatching path;
    path.set({0, 0}, Rational(1, 2));
    path.set({1, 0}, Rational(1, 2));
    path.set({1, 1}, Rational(1, 2));
    CHECK(eliminate_cycles(path) == path);
}

TEST_CASE("eliminate_cycles resolves C4 into two opposite edges") {
    FractionalMatching c4;
    c4.set({0, 0}, Rational(1, 2));
    c4.set({0, 1}, Rational(1, 2));
    c4.set({1, 0}, Rational(1, 2));
    c4.set({1, 1}, Rational(1, 2));
    const FractionalMatching out = eliminate_cycles(c4);
    REQUIRE(out.support_size() == 2);
    std::vector<Edge> support;
    for (const auto& [e, w] : out.weights()) {
        CHECK(w == Rational(1));
        support.push_back(e);
    }
    CHECK(support[0].p != support[1].p);
    CHECK(support[0].q != support[1].q);
}

TEST_CASE("eliminate_cycles resolves C6 into three alternating unit edges") {
    // Cycle p0-q0-p1-q1-p2-q2-p0 at weight 1/2 everywhere.
    FractionalMatching c6;
    c6.set({0, 0}, Rational(1, 2));
    c6.set({1, 0}, Rational(1, 2));
    c6.set({1, 1}, Rational(1, 2));
    c6.set({2, 1}, Rational(1, 2));
    c6.set({2, 2}, Rational(1, 2));
    c6.set({0, 2}, Rational(1, 2));
    const FractionalMatching out = eliminate_cycles(c6);
    REQUIRE(out.support_size() == 3);
    std::vector<char> p_used(3, 0), q_used(3, 0);
    for (const auto& [e, w] : out.weights()) {
        CHECK(w == Rational(1));
        CHECK_FALSE(p_used[e.p]);
        CHECK_FALSE(q_used[e.q]);
        p_used[e.p] = q_used[e.q] = 1;
    }
}

TEST_CASE("eliminate_cycles preserves per-vertex sums on messy inputs") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const BipartiteGraph g = medium_random(seed);
        // Random per-Q distribution: weight 1/deg on each incident edge,
        // thinned at random. Q sums stay <= 1.
        FractionalMatching x;
        const auto adj_q = g.adjacency_q();
        for (std::uint32_t q = 0; q < g.q_count(); ++q) {
            const auto deg = static_cast<std::int64_t>(adj_q[q].size());
            std::uint64_t c = 0;
            for (std::uint32_t p : adj_q[q]) {
                if (derive_u64(seed ^ 0xabc, q * 100 + c++) % 4 != 0) {
                    x.set({p, q}, Rational(1, deg));
                }
            }
        }
        const auto before_p = side_sums(x, Side::P);
        const auto before_q = side_sums(x, Side::Q);
        const FractionalMatching out = eliminate_cycles(x);
        CHECK(support_is_acyclic(g, [&] {
            std::vector<Edge> support;
            for (const auto& [e, w] : out.weights()) support.push_back(e);
            return support;
        }()));
        CHECK(side_sums(out, Side::P) == before_p);
        CHECK(side_sums(out, Side::Q) == before_q);
        CHECK(out.support_size() <= x.support_size());
    }
}

TEST_CASE("eliminate_cycles rejects overweight Q vertices") {
    FractionalMatching bad;
    bad.set({0, 0}, Rational(1));
    bad.set({1, 0}, Rational(1));
    CHECK_THROWS_AS(eliminate_cycles(bad), std::invalid_argument);
}

TEST_CASE("matching_skeleton on fixed shapes") {
    CHECK(matching_skeleton(BipartiteGraph(0, 0, {})).support().empty());
    CHECK(matching_skeleton(BipartiteGraph(3, 2, {})).support().empty());

    const BipartiteGraph perfect = gen_perfect(5);
    const Skeleton sk = matching_skeleton(perfect);
    CHECK(sk.support() == perfect.edges());
    check_skeleton_invariants(perfect, sk);
}

TEST_CASE("matching_skeleton of the two-block example keeps 6+4 support edges") {
    const BipartiteGraph g = build_graph(6, 6,
                                         std::vector<Edge>{{0, 0},
                                                           {1, 0},
                                                           {1, 1},
                                                           {2, 1},
                                                           {2, 2},
                                                           {3, 2},
                                                           {0, 1},
                                                           {3, 1},
                                                           {4, 3},
                                                           {5, 3},
                                                           {4, 4},
                                                           {5, 5},
                                                           {4, 1},
                                                           {5, 2}});
    const Skeleton sk = matching_skeleton(g);
    check_skeleton_invariants(g, sk);
    REQUIRE(sk.decomposition.blocks().size() == 2);
    std::size_t low = 0, high = 0;
    for (const Edge& e : sk.support()) {
        if (sk.decomposition.block_of({Side::P, e.p}) == 0) {
            ++low;
        } else {
            ++high;
        }
    }
    CHECK(low == 6);   // alpha = 3/4 block: forest spanning 4P+3Q
    CHECK(high == 4);  // alpha = 3/2 block: forest spanning 2P+3Q
    CHECK(sk.support().size() <= g.vertex_count() - 1);
}

TEST_CASE("skeleton invariants hold on random graphs") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const BipartiteGraph g = medium_random(seed + 300);
        check_skeleton_invariants(g, matching_skeleton(g));
    }
}

TEST_CASE("per-block weights scaled by max(1, alpha) certify the canonical cover") {
    // Scaling the high blocks down turns the skeleton into a plain
    // fractional matching whose total weight is the canonical cover size,
    // which certifies the cover minimum.
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const BipartiteGraph g = medium_random(seed + 950);
        const Skeleton sk = matching_skeleton(g);

        FractionalMatching scaled;
        for (const auto& [e, w] : sk.weights.weights()) {
            const Block& b = sk.decomposition.blocks().at(
                static_cast<std::size_t>(sk.decomposition.block_of({Side::P, e.p})));
            scaled.set(e, b.alpha > Rational(1) ? w / b.alpha : w);
        }
        CHECK(verify_fractional_matching(g, scaled).ok);

        const VertexCover cover = canonical_vertex_cover(g, sk.decomposition);
        CHECK(scaled.total_weight() ==
              Rational(static_cast<std::int64_t>(cover.size())));
    }
}

TEST_CASE("skeleton_avoiding with an empty forbidden set is the plain skeleton") {
    const BipartiteGraph g = medium_random(17);
    const AvoidOutcome out = skeleton_avoiding(g, {});
    REQUIRE_FALSE(out.refused());
    CHECK(out.skeleton->weights == matching_skeleton(g).weights);
}

TEST_CASE("skeleton_avoiding refuses when removal inverts the ordering") {
    const BipartiteGraph single = build_graph(1, 1, std::vector<Edge>{{0, 0}});
    const std::vector<Edge> forbidden{{0, 0}};
    const AvoidOutcome out = skeleton_avoiding(single, forbidden);
    REQUIRE(out.refused());
    CHECK(*out.violating_edge == Edge{0, 0});
}

TEST_CASE("skeleton_avoiding withholds the middle group of a pathological part") {
    const BipartiteGraph g = gen_pathological(60, 6);
    const PathologicalLayout layout = PathologicalLayout::for_params(60, 6);
    const std::vector<Edge> forbidden = layout.middle_pairs();
    const BipartiteGraph part = random_k_partition(g, 6, 5).parts.at(0);

    const AvoidOutcome out = skeleton_avoiding(part, forbidden);
    REQUIRE_FALSE(out.refused());
    for (const Edge& e : out.skeleton->support()) {
        const bool in_middle = e.p >= layout.p2.first && e.p < layout.p2.second &&
                               e.q >= layout.q2.first && e.q < layout.q2.second;
        CHECK_FALSE(in_middle);
    }

    // The withheld edges can be added back without changing the blocks.
    std::vector<Edge> present;
    for (const Edge& e : part.edges()) {
        if (std::binary_search(forbidden.begin(), forbidden.end(), e)) present.push_back(e);
    }
    std::vector<Edge> kept;
    for (const Edge& e : part.edges()) {
        if (!std::binary_search(forbidden.begin(), forbidden.end(), e)) kept.push_back(e);
    }
    const BipartiteGraph part_minus(part.p_count(), part.q_count(), kept);
    const RobustnessResult rr = check_robustness(part_minus, out.skeleton->decomposition,
                                                 present, {}, *out.skeleton);
    CHECK(rr.ok);
}

TEST_CASE("check_robustness identity and perturbations") {
    const BipartiteGraph g = medium_random(23);
    const Skeleton sk = matching_skeleton(g);
    CHECK(check_robustness(g, sk.decomposition, {}, {}, sk).ok);

    // Perfect matching: all levels equal 1, every extra edge keeps them.
    const BipartiteGraph perfect = gen_perfect(4);
    const Skeleton psk = matching_skeleton(perfect);
    const std::vector<Edge> extra{{0, 1}};
    CHECK(check_robustness(perfect, psk.decomposition, extra, {}, psk).ok);

    // Removing a support edge violates the precondition.
    const std::vector<Edge> in_support{psk.support().front()};
    CHECK_THROWS_AS(check_robustness(perfect, psk.decomposition, {}, in_support, psk),
                    std::invalid_argument);

    // Adding an edge against the expansion ordering violates the other one.
    const BipartiteGraph two =
        build_graph(2, 3, std::vector<Edge>{{0, 0}, {0, 1}, {1, 2}});
    const Skeleton tsk = matching_skeleton(two);
    // alpha(p1) = 1 < alpha(q0) = 2: adding p1-q0 breaks the ordering.
    const std::vector<Edge> bad{{1, 0}};
    CHECK_THROWS_AS(check_robustness(two, tsk.decomposition, bad, {}, tsk),
                    std::invalid_argument);
}

TEST_CASE("check_robustness fuzzing on random graphs") {
    int accepted = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const BipartiteGraph g = medium_random(seed + 700);
        const Skeleton sk = matching_skeleton(g);
        const std::vector<Edge> support = sk.support();

        std::vector<Edge> removable;
        for (const Edge& e : g.edges()) {
            if (!std::binary_search(support.begin(), support.end(), e) &&
                derive_u64(seed, e.p * 1000 + e.q) % 3 == 0) {
                removable.push_back(e);
            }
        }
        std::vector<Edge> addable;
        for (std::uint32_t p = 0; p < g.p_count() && addable.size() < 10; ++p) {
            for (std::uint32_t q = 0; q < g.q_count() && addable.size() < 10; ++q) {
                const Edge e{p, q};
                if (g.has_edge(e)) continue;
                if (derive_u64(seed ^ 0x777, p * 1000 + q) % 5 != 0) continue;
                const Expansion ap = sk.decomposition.expansion_of({Side::P, p});
                const Expansion aq = sk.decomposition.expansion_of({Side::Q, q});
                if (ap >= aq) addable.push_back(e);
            }
        }
        const RobustnessResult rr =
            check_robustness(g, sk.decomposition, addable, removable, sk);
        CHECK(rr.ok);
        ++accepted;
    }
    CHECK(accepted == 40);
}
