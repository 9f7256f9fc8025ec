#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dse/sdse.hpp"

namespace dse {

// h_j -> lambda_j h_j and F_i -> mu_i F_i, all scalars nonzero. The returned
// system is renormalized to F_i(0) = 1, which folds the mu rescaling back in.
inline Sdse change_vars(const Sdse& s, const std::vector<Rational>& lambdas,
                        const std::vector<Rational>& mus) {
    int N = s.size();
    if (static_cast<int>(lambdas.size()) != N || static_cast<int>(mus.size()) != N)
        throw std::invalid_argument("change_vars: one scalar pair per index");
    for (int i = 0; i < N; ++i)
        if (is_zero(lambdas[static_cast<size_t>(i)]) || is_zero(mus[static_cast<size_t>(i)]))
            throw std::invalid_argument("change_vars: scalars must be nonzero");
    std::vector<Series> eqs;
    eqs.reserve(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        Series f(s.truncation);
        for (const auto& [m, c] : s.eqn(i).coef) {
            Rational scaled = c * mus[static_cast<size_t>(i)];
            for (const auto& [v, e] : m.exps)
                for (int k = 0; k < e; ++k) scaled *= lambdas[static_cast<size_t>(v)];
            f.add(m, scaled);
        }
        eqs.push_back(std::move(f));
    }
    return Sdse(s.indices, std::move(eqs), s.truncation);
}

struct RestrictResult {
    Sdse system;
    std::vector<std::string> dropped;  // indices whose equations degenerated
};

// Substitutes h_j := 0 outside the kept subset. Equations that turn constant
// are degenerate; those indices are dropped (cascading) and reported.
inline RestrictResult restrict_system(const Sdse& s, const std::vector<std::string>& keep_names) {
    if (keep_names.empty()) throw std::invalid_argument("restrict: empty index subset");
    std::vector<bool> keep(static_cast<size_t>(s.size()), false);
    for (const auto& n : keep_names) keep[static_cast<size_t>(s.indices.require(n))] = true;

    std::vector<std::string> dropped;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < s.size(); ++i) {
            if (!keep[static_cast<size_t>(i)]) continue;
            bool constant = true;
            for (const auto& [m, c] : s.eqn(i).coef) {
                if (m.degree() == 0) continue;
                bool alive = true;
                for (const auto& [v, e] : m.exps)
                    if (!keep[static_cast<size_t>(v)]) alive = false;
                if (alive) {
                    constant = false;
                    break;
                }
            }
            if (constant) {
                keep[static_cast<size_t>(i)] = false;
                dropped.push_back(s.indices.name(i));
                changed = true;
            }
        }
    }

    IndexSet idx;
    std::vector<int> old_of_new;
    for (int i = 0; i < s.size(); ++i)
        if (keep[static_cast<size_t>(i)]) {
            idx.add(s.indices.name(i));
            old_of_new.push_back(i);
        }
    if (idx.size() == 0)
        throw std::invalid_argument("restrict: every kept equation degenerated to a constant");

    std::vector<int> new_of_old(static_cast<size_t>(s.size()), -1);
    for (int k = 0; k < idx.size(); ++k)
        new_of_old[static_cast<size_t>(old_of_new[static_cast<size_t>(k)])] = k;
    std::vector<Series> eqs;
    for (int k = 0; k < idx.size(); ++k) {
        Series f(s.truncation);
        for (const auto& [m, c] : s.eqn(old_of_new[static_cast<size_t>(k)]).coef) {
            MultiIndex mm;
            bool alive = true;
            for (const auto& [v, e] : m.exps) {
                int nv = new_of_old[static_cast<size_t>(v)];
                if (nv < 0) {
                    alive = false;
                    break;
                }
                mm = mm.plus(nv, e);
            }
            if (alive) f.add(mm, c);
        }
        eqs.push_back(std::move(f));
    }
    return {Sdse(std::move(idx), std::move(eqs), s.truncation), std::move(dropped)};
}

struct DilateResult {
    Sdse system;
    std::vector<std::vector<int>> blocks;  // new ids per old index
};

// Replaces index i by sizes[i] copies; each equation is evaluated on the
// block sums. Copy k of index v is named "<v>.<k>"; a block of size one
// keeps the original name.
inline DilateResult dilate(const Sdse& s, const std::vector<int>& sizes) {
    int N = s.size();
    if (static_cast<int>(sizes.size()) != N)
        throw std::invalid_argument("dilate: one block size per index");
    IndexSet idx;
    std::vector<std::vector<int>> blocks(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        int m = sizes[static_cast<size_t>(i)];
        if (m < 1) throw std::invalid_argument("dilate: block sizes must be >= 1");
        for (int k = 0; k < m; ++k) {
            std::string nm =
                (m == 1) ? s.indices.name(i) : s.indices.name(i) + "." + std::to_string(k + 1);
            blocks[static_cast<size_t>(i)].push_back(idx.add(nm));
        }
    }
    // block sums as series in the new variables
    std::vector<Series> sums;
    sums.reserve(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        Series sum(s.truncation);
        for (int y : blocks[static_cast<size_t>(i)]) sum.add(MultiIndex::unit(y), 1);
        sums.push_back(std::move(sum));
    }
    std::vector<Series> eqs;
    for (int i = 0; i < N; ++i) {
        Series fx = compose(s.eqn(i), sums, s.truncation);
        for (std::size_t k = 0; k < blocks[static_cast<size_t>(i)].size(); ++k) eqs.push_back(fx);
    }
    // equations were produced in block order; indices were declared the same way
    return {Sdse(std::move(idx), std::move(eqs), s.truncation), std::move(blocks)};
}

struct ExtendResult {
    Sdse system;
    bool valid = false;  // base Hopf (to the probe depth) and equal equations on the support
};

// Adjoins a fresh index with the affine equation 1 + sum a0_i h_i. The
// validity flag checks the two structural conditions; Hopf-ness of the base
// is probed to weight `probe_weight`.
inline ExtendResult extend(TreeArena& arena, const Sdse& s,
                           const std::map<std::string, Rational>& a0, const std::string& new_name,
                           int probe_weight) {
    if (s.indices.find(new_name) >= 0)
        throw std::invalid_argument("extend: index name already in use: " + new_name);
    IndexSet idx = s.indices;
    int v0 = idx.add(new_name);
    Series f0(s.truncation);
    f0.add(MultiIndex::one(), 1);
    std::vector<int> support;
    for (const auto& [name, c] : a0) {
        int j = s.indices.require(name);
        if (!is_zero(c)) {
            f0.add(MultiIndex::unit(j), c);
            support.push_back(j);
        }
    }
    if (support.empty()) throw std::invalid_argument("extend: empty support");
    std::vector<Series> eqs = s.equations;
    for (auto& f : eqs) {
        Series lifted(s.truncation);
        lifted.coef = f.coef;
        f = std::move(lifted);
    }
    eqs.push_back(std::move(f0));
    ExtendResult r{Sdse(std::move(idx), std::move(eqs), s.truncation), false};

    bool equal_on_support = true;
    for (std::size_t k = 1; k < support.size(); ++k)
        if (!(s.eqn(support[k]) == s.eqn(support[0]))) equal_on_support = false;
    bool base_hopf = check_hopf(arena, s, probe_weight).hopf;
    r.valid = base_hopf && equal_on_support;
    (void)v0;
    return r;
}

}  // namespace dse
