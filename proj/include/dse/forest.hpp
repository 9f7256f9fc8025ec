#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dse/rational.hpp"
#include "dse/tree.hpp"

namespace dse {

// Commutative monomial of trees. Stored sorted by id, which is a canonical
// form for multiset equality; display order is resolved at print time.
struct Forest {
    std::vector<TreeId> trees;

    Forest() = default;
    explicit Forest(std::vector<TreeId> ts) : trees(std::move(ts)) {
        std::sort(trees.begin(), trees.end());
    }
    static Forest unit() { return Forest{}; }
    static Forest single(TreeId t) { return Forest(std::vector<TreeId>{t}); }

    bool empty() const { return trees.empty(); }
    bool operator==(const Forest& o) const { return trees == o.trees; }
    bool operator<(const Forest& o) const { return trees < o.trees; }

    Forest mul(const Forest& o) const {
        Forest r;
        r.trees.resize(trees.size() + o.trees.size());
        std::merge(trees.begin(), trees.end(), o.trees.begin(), o.trees.end(), r.trees.begin());
        return r;
    }
};

inline std::uint32_t forest_weight(const TreeArena& a, const Forest& f) {
    std::uint32_t w = 0;
    for (TreeId t : f.trees) w += a.weight(t);
    return w;
}

// Display form: factors in canonical tree order, '.' as the product sign,
// '1' for the empty forest.
inline std::string print_forest(const TreeArena& a, const Forest& f, const IndexSet& names) {
    if (f.trees.empty()) return "1";
    std::vector<TreeId> ts = f.trees;
    std::sort(ts.begin(), ts.end(), [&a](TreeId x, TreeId y) { return a.less(x, y); });
    std::string out;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (k) out += '.';
        out += a.print(ts[k], names);
    }
    return out;
}

// Finite linear combination of forests with exact coefficients; no explicit
// zeros are stored.
class TreePoly {
  public:
    std::map<Forest, Rational> terms;

    TreePoly() = default;
    static TreePoly zero() { return {}; }
    static TreePoly unit(const Rational& c = 1) {
        TreePoly p;
        if (!is_zero(c)) p.terms.emplace(Forest::unit(), c);
        return p;
    }
    static TreePoly of_tree(TreeId t, const Rational& c = 1) {
        TreePoly p;
        if (!is_zero(c)) p.terms.emplace(Forest::single(t), c);
        return p;
    }

    bool is_zero_poly() const { return terms.empty(); }
    bool operator==(const TreePoly& o) const { return terms == o.terms; }

    void add_term(const Forest& f, const Rational& c) {
        if (is_zero(c)) return;
        auto it = terms.find(f);
        if (it == terms.end()) {
            terms.emplace(f, c);
        } else {
            it->second += c;
            if (is_zero(it->second)) terms.erase(it);
        }
    }

    TreePoly& operator+=(const TreePoly& o) {
        for (const auto& [f, c] : o.terms) add_term(f, c);
        return *this;
    }
    TreePoly operator+(const TreePoly& o) const {
        TreePoly r = *this;
        r += o;
        return r;
    }
    TreePoly operator-() const {
        TreePoly r;
        for (const auto& [f, c] : terms) r.terms.emplace(f, -c);
        return r;
    }
    TreePoly operator-(const TreePoly& o) const { return *this + (-o); }

    TreePoly scale(const Rational& c) const {
        TreePoly r;
        if (is_zero(c)) return r;
        for (const auto& [f, x] : terms) r.terms.emplace(f, x * c);
        return r;
    }

    // Product truncated by total weight; weight_bound < 0 means unbounded.
    TreePoly mul(const TreeArena& a, const TreePoly& o, int weight_bound = -1) const {
        TreePoly r;
        for (const auto& [f1, c1] : terms) {
            int w1 = static_cast<int>(forest_weight(a, f1));
            if (weight_bound >= 0 && w1 > weight_bound) continue;
            for (const auto& [f2, c2] : o.terms) {
                if (weight_bound >= 0 &&
                    w1 + static_cast<int>(forest_weight(a, f2)) > weight_bound)
                    continue;
                r.add_term(f1.mul(f2), c1 * c2);
            }
        }
        return r;
    }

    TreePoly truncate(const TreeArena& a, int weight_bound) const {
        TreePoly r;
        for (const auto& [f, c] : terms)
            if (static_cast<int>(forest_weight(a, f)) <= weight_bound) r.terms.emplace(f, c);
        return r;
    }

    TreePoly component(const TreeArena& a, int weight) const {
        TreePoly r;
        for (const auto& [f, c] : terms)
            if (static_cast<int>(forest_weight(a, f)) == weight) r.terms.emplace(f, c);
        return r;
    }

    const Rational* coeff(const Forest& f) const {
        auto it = terms.find(f);
        return it == terms.end() ? nullptr : &it->second;
    }
};

// Element of the tensor square: map (left forest, right forest) -> scalar.
class TensorPoly {
  public:
    std::map<std::pair<Forest, Forest>, Rational> terms;

    bool operator==(const TensorPoly& o) const { return terms == o.terms; }

    void add_term(const Forest& l, const Forest& r, const Rational& c) {
        if (is_zero(c)) return;
        auto key = std::make_pair(l, r);
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(std::move(key), c);
        } else {
            it->second += c;
            if (is_zero(it->second)) terms.erase(it);
        }
    }

    TensorPoly& operator+=(const TensorPoly& o) {
        for (const auto& [k, c] : o.terms) add_term(k.first, k.second, c);
        return *this;
    }

    TensorPoly mul(const TensorPoly& o) const {
        TensorPoly r;
        for (const auto& [k1, c1] : terms)
            for (const auto& [k2, c2] : o.terms)
                r.add_term(k1.first.mul(k2.first), k1.second.mul(k2.second), c1 * c2);
        return r;
    }
};

}  // namespace dse
