#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dse/forest.hpp"
#include "dse/rational.hpp"
#include "dse/tree.hpp"

namespace dse {

// One admissible cut: the pruned forest, the trunk (nullopt for the total
// cut, where the root itself is cut away), and the number of cut edges.
struct CutResult {
    Forest pruned;              // P^c
    std::optional<TreeId> trunk;  // R^c; nullopt encodes the unit
    int num_cut_edges = 0;
};

namespace detail {

struct PartialCut {
    std::vector<TreeId> pruned;
    std::vector<TreeId> trunk_children;
    int edges = 0;
};

// Admissible non-total cuts of t. An edge subset is admissible iff no edge
// lies below another, so cutting the edge above a child freezes that whole
// subtree; otherwise recurse with the child's trunk staying attached.
inline void admissible_nontotal(TreeArena& a, TreeId t, std::vector<CutResult>& out) {
    std::vector<PartialCut> acc;
    acc.push_back({});
    auto span = a.children(t);
    std::vector<TreeId> kids(span.begin(), span.end());  // interning may grow the arena
    for (TreeId child : kids) {
        std::vector<CutResult> child_cuts;
        admissible_nontotal(a, child, child_cuts);
        std::vector<PartialCut> next;
        for (const auto& p : acc) {
            // cut the edge above this child
            PartialCut q = p;
            q.pruned.push_back(child);
            q.edges += 1;
            next.push_back(std::move(q));
            // keep the edge, apply an admissible cut inside the child
            for (const auto& cc : child_cuts) {
                PartialCut r = p;
                r.pruned.insert(r.pruned.end(), cc.pruned.trees.begin(), cc.pruned.trees.end());
                r.trunk_children.push_back(*cc.trunk);
                r.edges += cc.num_cut_edges;
                next.push_back(std::move(r));
            }
        }
        acc = std::move(next);
    }
    for (auto& p : acc)
        out.push_back(CutResult{Forest(std::move(p.pruned)),
                                a.make(a.root(t), std::move(p.trunk_children)), p.edges});
}

}  // namespace detail

// All admissible cuts of t, including the empty and the total cut.
inline std::vector<CutResult> admissible_cuts(TreeArena& a, TreeId t) {
    std::vector<CutResult> out;
    detail::admissible_nontotal(a, t, out);
    out.push_back(CutResult{Forest::single(t), std::nullopt, 0});  // total
    return out;
}

inline TensorPoly coproduct_tree(TreeArena& a, TreeId t) {
    TensorPoly r;
    for (const auto& c : admissible_cuts(a, t))
        r.add_term(c.pruned, c.trunk ? Forest::single(*c.trunk) : Forest::unit(), 1);
    return r;
}

// Multiplicative and linear extension of the cut formula.
inline TensorPoly coproduct(TreeArena& a, const TreePoly& x) {
    TensorPoly out;
    for (const auto& [f, c] : x.terms) {
        TensorPoly prod;
        prod.add_term(Forest::unit(), Forest::unit(), c);
        for (TreeId t : f.trees) prod = prod.mul(coproduct_tree(a, t));
        out += prod;
    }
    return out;
}

namespace detail {

// (trunk component containing the root, detached components, edges cut) over
// all edge subsets, admissible or not.
inline std::vector<std::tuple<TreeId, Forest, int>> all_cuts(TreeArena& a, TreeId t) {
    struct P {
        std::vector<TreeId> trunk_children;
        std::vector<TreeId> detached;
        int edges = 0;
    };
    std::vector<P> ps;
    ps.push_back({});
    auto span = a.children(t);
    std::vector<TreeId> kids(span.begin(), span.end());
    for (TreeId child : kids) {
        auto sub = all_cuts(a, child);
        std::vector<P> next;
        for (const auto& p : ps) {
            for (const auto& [ctrunk, cdet, ce] : sub) {
                // edge kept
                P q = p;
                q.trunk_children.push_back(ctrunk);
                q.detached.insert(q.detached.end(), cdet.trees.begin(), cdet.trees.end());
                q.edges += ce;
                next.push_back(std::move(q));
                // edge cut: child trunk joins the detached part
                P r = p;
                r.detached.insert(r.detached.end(), cdet.trees.begin(), cdet.trees.end());
                r.detached.push_back(ctrunk);
                r.edges += ce + 1;
                next.push_back(std::move(r));
            }
        }
        ps = std::move(next);
    }
    std::vector<std::tuple<TreeId, Forest, int>> out;
    out.reserve(ps.size());
    for (auto& p : ps)
        out.emplace_back(a.make(a.root(t), std::move(p.trunk_children)),
                         Forest(std::move(p.detached)), p.edges);
    return out;
}

}  // namespace detail

// Antipode by the explicit signed sum over all cuts, extended as an algebra
// morphism; the convolution identity is left to the tests.
inline TreePoly antipode(TreeArena& a, const TreePoly& x) {
    TreePoly out;
    for (const auto& [f, c] : x.terms) {
        TreePoly prod = TreePoly::unit(c);
        for (TreeId t : f.trees) {
            TreePoly st;
            for (const auto& [trunk, det, edges] : detail::all_cuts(a, t)) {
                Rational sign = (edges % 2 == 0) ? -1 : 1;  // -(-1)^{n_c}
                st.add_term(det.mul(Forest::single(trunk)), sign);
            }
            prod = prod.mul(a, st);
        }
        out += prod;
    }
    return out;
}

// Deleting one leaf: map (leaf decoration, remaining tree) -> number of leaf
// positions. Counts positions, so symmetric leaves contribute multiplicity.
using LeafDeletions = std::vector<std::tuple<std::uint32_t, TreeId, long>>;

// Optional memo for scans that walk many trees with shared subtrees.
using LeafDeletionCache = std::unordered_map<TreeId, LeafDeletions>;

inline const LeafDeletions& leaf_deletions(TreeArena& a, TreeId t, LeafDeletionCache& cache) {
    if (auto it = cache.find(t); it != cache.end()) return it->second;
    std::map<std::pair<std::uint32_t, TreeId>, long> acc;
    auto span = a.children(t);
    std::vector<TreeId> kids(span.begin(), span.end());
    for (std::size_t pos = 0; pos < kids.size();) {
        TreeId c = kids[pos];
        std::size_t mult = 1;
        while (pos + mult < kids.size() && kids[pos + mult] == c) ++mult;
        if (a.is_leaf(c)) {
            acc[{a.root(c), a.remove_child(t, pos)}] += static_cast<long>(mult);
        } else {
            LeafDeletions sub = leaf_deletions(a, c, cache);  // copy: recursion refills the cache
            for (const auto& [dec, rep, cnt] : sub)
                acc[{dec, a.replace_child(t, pos, rep)}] += cnt * static_cast<long>(mult);
        }
        pos += mult;
    }
    LeafDeletions out;
    out.reserve(acc.size());
    for (const auto& [k, v] : acc) out.emplace_back(k.first, k.second, v);
    return cache.emplace(t, std::move(out)).first->second;
}

inline LeafDeletions leaf_deletions(TreeArena& a, TreeId t) {
    LeafDeletionCache cache;
    return leaf_deletions(a, t, cache);
}

// Number of leaves of t decorated j whose deletion yields t_prime.
inline long leaf_cut_count(TreeArena& a, TreeId t, TreeId t_prime, std::uint32_t j) {
    if (a.weight(t) != a.weight(t_prime) + 1)
        throw std::invalid_argument("leaf_cut_count: weight(t) must be weight(t') + 1");
    long n = 0;
    for (const auto& [dec, rep, cnt] : leaf_deletions(a, t))
        if (dec == j && rep == t_prime) n += cnt;
    return n;
}

// Number of admissible cuts of t with pruned part exactly the single tree
// t_prime and trunk t_second.
inline long pair_cut_count(TreeArena& a, TreeId t_prime, TreeId t_second, TreeId t) {
    if (a.weight(t_prime) + a.weight(t_second) != a.weight(t))
        throw std::invalid_argument("pair_cut_count: weights must add up");
    long n = 0;
    for (const auto& c : admissible_cuts(a, t))
        if (c.trunk && *c.trunk == t_second && c.pruned.trees.size() == 1 &&
            c.pruned.trees[0] == t_prime)
            ++n;
    return n;
}

// Free pre-Lie product on tree functionals: graft t at every vertex of
// t_prime, with multiplicity, as a map result tree -> count.
inline std::map<TreeId, long> graft_product(TreeArena& a, TreeId t, TreeId t_prime) {
    std::map<TreeId, long> acc;
    acc[a.add_child(t_prime, t)] += 1;  // graft at the root
    auto span = a.children(t_prime);
    std::vector<TreeId> kids(span.begin(), span.end());
    for (std::size_t pos = 0; pos < kids.size();) {
        TreeId c = kids[pos];
        std::size_t mult = 1;
        while (pos + mult < kids.size() && kids[pos + mult] == c) ++mult;
        for (const auto& [sub, cnt] : graft_product(a, t, c))
            acc[a.replace_child(t_prime, pos, sub)] += cnt * static_cast<long>(mult);
        pos += mult;
    }
    return acc;
}

}  // namespace dse
