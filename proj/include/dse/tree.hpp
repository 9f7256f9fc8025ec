#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dse/index_set.hpp"

namespace dse {

using TreeId = std::uint32_t;

// Hash-consed store of canonical decorated rooted trees. Children lists are
// kept sorted under the canonical total order (weight, root decoration,
// children lexicographically), so structural equality of canonical forms is
// id equality. Values are immutable once interned.
class TreeArena {
  public:
    struct Node {
        std::uint32_t root;
        std::uint32_t weight;
        std::uint32_t child_begin;
        std::uint32_t child_count;
    };

    TreeArena() = default;
    TreeArena(const TreeArena&) = delete;
    TreeArena& operator=(const TreeArena&) = delete;

    static TreeArena& global() {
        static TreeArena arena;
        return arena;
    }

    std::uint32_t root(TreeId t) const { return nodes_[t].root; }
    std::uint32_t weight(TreeId t) const { return nodes_[t].weight; }
    std::span<const TreeId> children(TreeId t) const {
        const Node& n = nodes_[t];
        return {child_buf_.data() + n.child_begin, n.child_count};
    }
    bool is_leaf(TreeId t) const { return nodes_[t].child_count == 0; }
    std::size_t size() const { return nodes_.size(); }

    TreeId leaf(std::uint32_t decoration) { return intern(decoration, {}); }

    // Children need not be sorted; they are copied and put in canonical order.
    TreeId make(std::uint32_t decoration, std::vector<TreeId> children) {
        std::sort(children.begin(), children.end(),
                  [this](TreeId a, TreeId b) { return less(a, b); });
        return intern(decoration, children);
    }

    // Children already sorted canonically (callers that enumerate in order).
    TreeId make_sorted(std::uint32_t decoration, const std::vector<TreeId>& children) {
        return intern(decoration, children);
    }

    // Canonical total order: weight first, then root decoration, then the
    // sorted children lists lexicographically.
    int compare(TreeId a, TreeId b) const {
        if (a == b) return 0;
        const Node& na = nodes_[a];
        const Node& nb = nodes_[b];
        if (na.weight != nb.weight) return na.weight < nb.weight ? -1 : 1;
        if (na.root != nb.root) return na.root < nb.root ? -1 : 1;
        auto ca = children(a);
        auto cb = children(b);
        std::size_t m = std::min(ca.size(), cb.size());
        for (std::size_t k = 0; k < m; ++k) {
            int c = compare(ca[k], cb[k]);
            if (c != 0) return c;
        }
        if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
        return 0;
    }

    bool less(TreeId a, TreeId b) const { return compare(a, b) < 0; }

    // Tree with the same children except that the child at position `pos` is
    // replaced (replacement sorted back in) or removed.
    TreeId replace_child(TreeId t, std::size_t pos, TreeId replacement) {
        auto ch = children(t);
        std::vector<TreeId> c(ch.begin(), ch.end());
        c[pos] = replacement;
        return make(nodes_[t].root, std::move(c));
    }
    TreeId remove_child(TreeId t, std::size_t pos) {
        auto ch = children(t);
        std::vector<TreeId> c;
        c.reserve(ch.size() - 1);
        for (std::size_t k = 0; k < ch.size(); ++k)
            if (k != pos) c.push_back(ch[k]);
        return make_sorted(nodes_[t].root, c);
    }
    TreeId add_child(TreeId t, TreeId extra) {
        auto ch = children(t);
        std::vector<TreeId> c(ch.begin(), ch.end());
        c.push_back(extra);
        return make(nodes_[t].root, std::move(c));
    }

    // d[c,b[a]]  <=>  root d, children leaf c and chain b -> a, children in
    // canonical order. Bit-exact round trip with parse().
    std::string print(TreeId t, const IndexSet& names) const {
        std::string out;
        print_rec(t, names, out);
        return out;
    }

    TreeId parse(std::string_view s, const IndexSet& names) {
        std::size_t pos = 0;
        TreeId t = parse_rec(s, pos, names);
        skip_ws(s, pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters in tree literal: " + std::string(s));
        return t;
    }

    // All canonical trees of the given weight over decorations 0..num_dec-1,
    // in canonical order. Cached.
    const std::vector<TreeId>& enumerate(int num_dec, int weight) {
        if (weight < 1) throw std::invalid_argument("tree weight must be >= 1");
        auto key = std::make_pair(num_dec, weight);
        auto it = enum_cache_.find(key);
        if (it != enum_cache_.end()) return it->second;

        std::vector<TreeId> out;
        if (weight == 1) {
            for (std::uint32_t d = 0; d < static_cast<std::uint32_t>(num_dec); ++d)
                out.push_back(leaf(d));
        } else {
            // pool of all strictly smaller trees, canonical order = weight-major
            std::vector<TreeId> pool;
            for (int w = 1; w < weight; ++w) {
                const auto& part = enumerate(num_dec, w);
                pool.insert(pool.end(), part.begin(), part.end());
            }
            std::vector<TreeId> forest;
            for (std::uint32_t d = 0; d < static_cast<std::uint32_t>(num_dec); ++d)
                enum_children(pool, 0, weight - 1, d, forest, out);
        }
        std::sort(out.begin(), out.end(), [this](TreeId a, TreeId b) { return less(a, b); });
        return enum_cache_.emplace(key, std::move(out)).first->second;
    }

    std::vector<TreeId> enumerate_rooted(int num_dec, int weight, std::uint32_t root_dec) {
        std::vector<TreeId> out;
        for (TreeId t : enumerate(num_dec, weight))
            if (root(t) == root_dec) out.push_back(t);
        return out;
    }

  private:
    std::vector<Node> nodes_;
    std::vector<TreeId> child_buf_;
    struct KeyHash {
        const TreeArena* a;
        std::size_t operator()(TreeId t) const {
            const Node& n = a->nodes_[t];
            std::size_t h = n.root * 0x9e3779b97f4a7c15ULL;
            for (std::uint32_t k = 0; k < n.child_count; ++k)
                h = h * 0x100000001b3ULL ^ a->child_buf_[n.child_begin + k];
            return h;
        }
    };
    struct KeyEq {
        const TreeArena* a;
        bool operator()(TreeId x, TreeId y) const {
            const Node& nx = a->nodes_[x];
            const Node& ny = a->nodes_[y];
            if (nx.root != ny.root || nx.child_count != ny.child_count) return false;
            for (std::uint32_t k = 0; k < nx.child_count; ++k)
                if (a->child_buf_[nx.child_begin + k] != a->child_buf_[ny.child_begin + k])
                    return false;
            return true;
        }
    };
    std::unordered_map<TreeId, TreeId, KeyHash, KeyEq> interned_{16, KeyHash{this}, KeyEq{this}};
    std::map<std::pair<int, int>, std::vector<TreeId>> enum_cache_;

    TreeId intern(std::uint32_t decoration, const std::vector<TreeId>& sorted_children) {
        std::uint32_t w = 1;
        for (TreeId c : sorted_children) w += nodes_[c].weight;
        Node n{decoration, w, static_cast<std::uint32_t>(child_buf_.size()),
               static_cast<std::uint32_t>(sorted_children.size())};
        child_buf_.insert(child_buf_.end(), sorted_children.begin(), sorted_children.end());
        nodes_.push_back(n);
        TreeId cand = static_cast<TreeId>(nodes_.size() - 1);
        auto [it, inserted] = interned_.insert({cand, cand});
        if (!inserted) {
            nodes_.pop_back();
            child_buf_.resize(n.child_begin);
            return it->second;
        }
        return cand;
    }

    // multisets of pool trees (indices non-decreasing) of total weight `rem`
    void enum_children(const std::vector<TreeId>& pool, std::size_t from, int rem,
                       std::uint32_t root_dec, std::vector<TreeId>& forest,
                       std::vector<TreeId>& out) {
        if (rem == 0) {
            out.push_back(make_sorted(root_dec, forest));
            return;
        }
        for (std::size_t k = from; k < pool.size(); ++k) {
            int w = static_cast<int>(weight(pool[k]));
            if (w > rem) break;  // pool is weight-ascending
            forest.push_back(pool[k]);
            enum_children(pool, k, rem - w, root_dec, forest, out);
            forest.pop_back();
        }
    }

    void print_rec(TreeId t, const IndexSet& names, std::string& out) const {
        out += names.name(static_cast<int>(root(t)));
        auto ch = children(t);
        if (!ch.empty()) {
            out += '[';
            for (std::size_t k = 0; k < ch.size(); ++k) {
                if (k) out += ',';
                print_rec(ch[k], names, out);
            }
            out += ']';
        }
    }

    static void skip_ws(std::string_view s, std::size_t& pos) {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }

    TreeId parse_rec(std::string_view s, std::size_t& pos, const IndexSet& names) {
        skip_ws(s, pos);
        std::size_t start = pos;
        while (pos < s.size() && s[pos] != '[' && s[pos] != ']' && s[pos] != ',' &&
               s[pos] != ' ' && s[pos] != '\t')
            ++pos;
        if (start == pos) throw std::invalid_argument("expected decoration name in tree literal");
        int dec = names.require(s.substr(start, pos - start));
        skip_ws(s, pos);
        std::vector<TreeId> ch;
        if (pos < s.size() && s[pos] == '[') {
            ++pos;
            while (true) {
                ch.push_back(parse_rec(s, pos, names));
                skip_ws(s, pos);
                if (pos >= s.size())
                    throw std::invalid_argument("unterminated '[' in tree literal");
                if (s[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (s[pos] == ']') {
                    ++pos;
                    break;
                }
                throw std::invalid_argument("expected ',' or ']' in tree literal");
            }
        }
        return make(static_cast<std::uint32_t>(dec), std::move(ch));
    }
};

// Grafting operator: attach the trees of a forest to a fresh root.
inline TreeId graft_bplus(TreeArena& a, const std::vector<TreeId>& forest,
                          std::uint32_t decoration) {
    return a.make(decoration, forest);
}

}  // namespace dse
