#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dse/sdse.hpp"
#include "dse/transform.hpp"

namespace dse {

// Oriented N-cycle: F_i = 1 + h_{i+1 mod N}.
inline Sdse gen_cycle(int n, int truncation) {
    if (n < 2) throw std::invalid_argument("cycle needs at least 2 indices");
    IndexSet idx;
    for (int i = 1; i <= n; ++i) idx.add(std::to_string(i));
    std::vector<Series> eqs;
    for (int i = 0; i < n; ++i) {
        Series f(truncation);
        f.add(MultiIndex::one(), 1);
        f.add(MultiIndex::unit((i + 1) % n), 1);
        eqs.push_back(std::move(f));
    }
    return Sdse(std::move(idx), std::move(eqs), truncation);
}

// Dilated cycle: part k feeds part k+1, each equation affine on the next
// block sum.
inline Sdse gen_multicycle(const std::vector<int>& part_sizes, int truncation) {
    if (part_sizes.size() < 2) throw std::invalid_argument("multicycle needs at least 2 parts");
    return dilate(gen_cycle(static_cast<int>(part_sizes.size()), truncation), part_sizes).system;
}

// Quasi-complete system: F_x = prod over the other parts of the inverted
// block sums (1 - H_j)^(-1).
inline Sdse gen_complete(const std::vector<int>& part_sizes, int truncation) {
    int m = static_cast<int>(part_sizes.size());
    if (m < 2) throw std::invalid_argument("complete system needs at least 2 parts");
    IndexSet idx;
    std::vector<std::vector<int>> blocks(static_cast<size_t>(m));
    for (int p = 0; p < m; ++p) {
        if (part_sizes[static_cast<size_t>(p)] < 1)
            throw std::invalid_argument("part sizes must be >= 1");
        for (int k = 0; k < part_sizes[static_cast<size_t>(p)]; ++k)
            blocks[static_cast<size_t>(p)].push_back(
                idx.add(std::to_string(static_cast<int>(idx.size()) + 1)));
    }
    std::vector<Series> block_sum(static_cast<size_t>(m), Series(truncation));
    for (int p = 0; p < m; ++p)
        for (int y : blocks[static_cast<size_t>(p)])
            block_sum[static_cast<size_t>(p)].add(MultiIndex::unit(y), 1);
    std::vector<Series> eqs;
    for (int p = 0; p < m; ++p) {
        Series f = Series::constant(1, truncation);
        for (int q = 0; q < m; ++q) {
            if (q == p) continue;
            f = f * f_gen(1, 1, block_sum[static_cast<size_t>(q)]);  // (1 - H_q)^(-1)
        }
        for (std::size_t k = 0; k < blocks[static_cast<size_t>(p)].size(); ++k) eqs.push_back(f);
    }
    return Sdse(std::move(idx), std::move(eqs), truncation);
}

// Parameters of a fundamental system. Level-0 classes come in declaration
// order: the I0 classes (each with a beta and a block size), the J0 classes
// (block sizes), then K0 singletons. The a-rows of level-1 vertices are
// given per level-0 class in that same order.
struct FundamentalSpec {
    struct I0Class {
        Rational beta;
        int size = 1;
    };
    struct I1Vertex {
        Rational nu;
        std::vector<Rational> a;  // one entry per level-0 class
    };
    struct J1Vertex {
        Rational nu;                   // nonzero
        std::vector<Rational> a_i1;    // one entry per I1 vertex; nonzero = support
    };
    std::vector<I0Class> i0;
    std::vector<int> j0_sizes;
    int k0_count = 0;
    std::vector<I1Vertex> i1;
    std::vector<J1Vertex> j1;

    int level0_classes() const {
        return static_cast<int>(i0.size() + j0_sizes.size()) + k0_count;
    }
};

// Emits the closed forms of the fundamental family. Blocks are dilated for
// I0 classes with beta != 0 and for J0 classes; K0, I1, J1 and beta = 0
// classes stay singletons.
inline Sdse gen_fundamental(const FundamentalSpec& spec, int truncation) {
    int n_i0 = static_cast<int>(spec.i0.size());
    int n_j0 = static_cast<int>(spec.j0_sizes.size());
    int n_k0 = spec.k0_count;
    int n_level0 = n_i0 + n_j0 + n_k0;
    if (n_i0 + n_j0 == 0)
        throw std::invalid_argument("fundamental system needs a nonempty I0 or J0");

    IndexSet idx;
    std::vector<std::vector<int>> blocks;  // per level-0 class
    auto fresh = [&]() { return idx.add(std::to_string(static_cast<int>(idx.size()) + 1)); };
    for (const auto& c : spec.i0) {
        if (c.size < 1) throw std::invalid_argument("block sizes must be >= 1");
        if (c.size > 1 && is_zero(c.beta))
            throw std::invalid_argument("a beta = 0 class is not dilated");
        std::vector<int> b;
        for (int k = 0; k < c.size; ++k) b.push_back(fresh());
        blocks.push_back(std::move(b));
    }
    for (int sz : spec.j0_sizes) {
        if (sz < 1) throw std::invalid_argument("block sizes must be >= 1");
        std::vector<int> b;
        for (int k = 0; k < sz; ++k) b.push_back(fresh());
        blocks.push_back(std::move(b));
    }
    for (int k = 0; k < n_k0; ++k) blocks.push_back({fresh()});
    std::vector<int> i1_ids;
    for (std::size_t k = 0; k < spec.i1.size(); ++k) i1_ids.push_back(fresh());
    std::vector<int> j1_ids;
    for (std::size_t k = 0; k < spec.j1.size(); ++k) j1_ids.push_back(fresh());

    auto block_sum = [&](int cls) {
        Series s(truncation);
        for (int y : blocks[static_cast<size_t>(cls)]) s.add(MultiIndex::unit(y), 1);
        return s;
    };
    // factor parameter and foreign weight per class: an I0 class contributes
    // f_beta factors of weight 1+beta to other equations, a J0 class weight-1
    // f_1 factors, a K0 class nothing
    auto beta_of = [&](int cls) -> Rational {
        return cls < n_i0 ? spec.i0[static_cast<size_t>(cls)].beta
                          : (cls < n_i0 + n_j0 ? Rational(1) : Rational(0));
    };
    auto foreign_weight = [&](int cls) -> Rational {
        return cls < n_i0 ? Rational(1) + spec.i0[static_cast<size_t>(cls)].beta
                          : (cls < n_i0 + n_j0 ? Rational(1) : Rational(0));
    };

    std::vector<Series> eqs(static_cast<size_t>(idx.size()), Series(truncation));

    // level-0 equations: the product of one factor per class, the own-class
    // factor with full weight, foreign I0 classes with weight 1+beta, J0 with
    // weight 1, K0 absent
    for (int cls = 0; cls < n_i0 + n_j0; ++cls) {
        Series f = Series::constant(1, truncation);
        for (int c2 = 0; c2 < n_i0 + n_j0; ++c2) {
            if (c2 == cls && c2 >= n_i0) continue;  // own J0 block is absent
            Rational weight = (c2 == cls) ? Rational(1) : foreign_weight(c2);
            f = f * f_gen(weight, beta_of(c2), block_sum(c2));
        }
        for (int y : blocks[static_cast<size_t>(cls)]) eqs[static_cast<size_t>(y)] = f;
    }
    {
        // K0 equations share the common product over I0 and J0
        Series f = Series::constant(1, truncation);
        for (int c2 = 0; c2 < n_i0 + n_j0; ++c2)
            f = f * f_gen(foreign_weight(c2), beta_of(c2), block_sum(c2));
        for (int cls = n_i0 + n_j0; cls < n_level0; ++cls)
            eqs[static_cast<size_t>(blocks[static_cast<size_t>(cls)][0])] = f;
    }

    // I1 vertices
    for (std::size_t v = 0; v < spec.i1.size(); ++v) {
        const auto& row = spec.i1[v];
        if (static_cast<int>(row.a.size()) != n_level0)
            throw std::invalid_argument("I1 row needs one coefficient per level-0 class");
        // the excluded shape is a plain level-0 vertex
        bool distinct = row.nu != 1;
        for (int cls = 0; cls < n_level0 && !distinct; ++cls)
            if (row.a[static_cast<size_t>(cls)] != foreign_weight(cls)) distinct = true;
        if (!distinct)
            throw std::invalid_argument(
                "I1 vertex coincides with the K0 shape; use a K0 vertex instead");
        Series f(truncation);
        if (!is_zero(row.nu)) {
            Series prod = Series::constant(1, truncation);
            for (int cls = 0; cls < n_level0; ++cls)
                prod = prod * f_gen(row.nu * row.a[static_cast<size_t>(cls)], beta_of(cls),
                                    block_sum(cls));
            f = prod.scale(Rational(1) / row.nu);
            f.add(MultiIndex::one(), 1 - Rational(1) / row.nu);
        } else {
            f.add(MultiIndex::one(), 1);
            for (int cls = 0; cls < n_level0; ++cls) {
                const Rational& acl = row.a[static_cast<size_t>(cls)];
                if (is_zero(acl)) continue;
                if (cls < n_i0 + n_j0) {
                    Rational beta = beta_of(cls);
                    if (is_zero(beta))
                        throw std::invalid_argument(
                            "nu = 0 needs nonzero beta on every supported I0 class");
                    f = f + log1m(block_sum(cls)).scale(acl / beta);
                } else {
                    f = f + block_sum(cls).scale(acl);
                }
            }
        }
        eqs[static_cast<size_t>(i1_ids[v])] = f;
    }

    // J1 vertices
    for (std::size_t v = 0; v < spec.j1.size(); ++v) {
        const auto& row = spec.j1[v];
        if (is_zero(row.nu)) throw std::invalid_argument("J1 vertices need nu != 0");
        if (static_cast<int>(row.a_i1.size()) != static_cast<int>(spec.i1.size()))
            throw std::invalid_argument("J1 row needs one coefficient per I1 vertex");
        std::vector<std::size_t> support;
        for (std::size_t k = 0; k < row.a_i1.size(); ++k)
            if (!is_zero(row.a_i1[k])) support.push_back(k);
        if (support.empty()) throw std::invalid_argument("J1 vertices need a nonempty I1 support");
        for (std::size_t k : support) {
            if (spec.i1[k].nu != 1)
                throw std::invalid_argument("J1 support requires I1 vertices with nu = 1");
            if (!(spec.i1[k].a == spec.i1[support[0]].a))
                throw std::invalid_argument("J1 support requires equal I1 equations");
        }
        const auto& b = spec.i1[support[0]].a;  // shared row of the supported I1 vertices
        Series prod = Series::constant(1, truncation);
        for (int cls = 0; cls < n_level0; ++cls)
            prod = prod * f_gen(b[static_cast<size_t>(cls)] - foreign_weight(cls), beta_of(cls),
                                block_sum(cls));
        Series f = prod.scale(Rational(1) / row.nu);
        f.add(MultiIndex::one(), 1 - Rational(1) / row.nu);
        for (std::size_t k : support) f.add(MultiIndex::unit(i1_ids[k]), row.a_i1[k]);
        eqs[static_cast<size_t>(j1_ids[v])] = f;
    }

    return Sdse(std::move(idx), std::move(eqs), truncation);
}

}  // namespace dse
