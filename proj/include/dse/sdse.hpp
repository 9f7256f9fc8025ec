#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dse/hopf.hpp"
#include "dse/index_set.hpp"
#include "dse/parser.hpp"
#include "dse/rational.hpp"
#include "dse/series.hpp"
#include "dse/tree.hpp"

namespace dse {

// A combinatorial Dyson-Schwinger system X_i = B+_i(F_i(X_1,...,X_N)),
// normalized so that every F_i is non-constant with F_i(0) = 1.
class Sdse {
  public:
    IndexSet indices;
    std::vector<Series> equations;
    int truncation = 0;

    Sdse() = default;

    // Normalizes on construction: F_i(0) = c with c not in {0,1} is rescaled
    // by 1/c; F_i(0) = 0 or a constant F_i is a degenerate system and is
    // rejected outright.
    Sdse(IndexSet idx, std::vector<Series> eqs, int trunc)
        : indices(std::move(idx)), equations(std::move(eqs)), truncation(trunc) {
        if (static_cast<int>(equations.size()) != indices.size())
            throw std::invalid_argument("one equation per index required");
        for (int i = 0; i < indices.size(); ++i) {
            Series& f = equations[static_cast<size_t>(i)];
            f = f.truncate(trunc);
            Rational c = f.constant_term();
            if (is_zero(c))
                throw std::invalid_argument("degenerate equation for index " + indices.name(i) +
                                            ": F(0) = 0 forces X = 0");
            if (c != 1) f = f.scale(Rational(1) / c);
            if (f.is_constant())
                throw std::invalid_argument("constant equation for index " + indices.name(i));
        }
    }

    int size() const { return indices.size(); }
    const Series& eqn(int i) const { return equations.at(static_cast<size_t>(i)); }

    Rational linear_coeff(int i, int j) const { return eqn(i).linear(j); }
    Rational quad_coeff(int i, int j, int k) const {
        return eqn(i).at(MultiIndex::unit(j).plus(k));
    }
};

// ---------------------------------------------------------------------------
// system file format
//
//   indices: 1 2 3 4
//   truncation: 12
//   equation 1: 1 + h2
//   ...
//
// '#' starts a comment; blank lines are ignored.
// ---------------------------------------------------------------------------

inline Sdse read_system(std::string_view text) {
    IndexSet idx;
    int trunc = -1;
    std::vector<std::pair<std::string, std::string>> eq_lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string line(text.substr(pos, eol - pos));
        pos = eol + 1;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("system file: missing ':' in line '" + line + "'");
        std::string key = line.substr(0, colon);
        std::string val = line.substr(colon + 1);
        if (key == "indices") {
            std::size_t p = 0;
            while (p < val.size()) {
                while (p < val.size() && std::isspace(static_cast<unsigned char>(val[p]))) ++p;
                std::size_t q = p;
                while (q < val.size() && !std::isspace(static_cast<unsigned char>(val[q]))) ++q;
                if (q > p) idx.add(val.substr(p, q - p));
                p = q;
            }
        } else if (key == "truncation") {
            trunc = std::stoi(val);
        } else if (key.rfind("equation", 0) == 0) {
            std::string name = key.substr(8);
            name.erase(name.begin(),
                       std::find_if(name.begin(), name.end(),
                                    [](unsigned char c) { return !std::isspace(c); }));
            eq_lines.emplace_back(name, val);
        } else {
            throw std::invalid_argument("system file: unknown field '" + key + "'");
        }
    }
    if (idx.size() == 0) throw std::invalid_argument("system file: no indices");
    if (trunc < 0) throw std::invalid_argument("system file: no truncation");
    std::vector<Series> eqs(static_cast<size_t>(idx.size()), Series(trunc));
    std::vector<bool> seen(static_cast<size_t>(idx.size()), false);
    for (auto& [name, expr] : eq_lines) {
        int i = idx.require(name);
        eqs[static_cast<size_t>(i)] = parse_expr(expr, idx, trunc);
        seen[static_cast<size_t>(i)] = true;
    }
    for (int i = 0; i < idx.size(); ++i)
        if (!seen[static_cast<size_t>(i)])
            throw std::invalid_argument("system file: no equation for index " + idx.name(i));
    return Sdse(std::move(idx), std::move(eqs), trunc);
}

// Writes expanded equation expressions; parse/print round trips exactly.
inline std::string write_system(const Sdse& s) {
    std::string out = "indices:";
    for (const auto& n : s.indices.names()) out += " " + n;
    out += "\ntruncation: " + std::to_string(s.truncation) + "\n";
    for (int i = 0; i < s.size(); ++i)
        out += "equation " + s.indices.name(i) + ": " + series_to_expr(s.eqn(i), s.indices) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// the unique solution
// ---------------------------------------------------------------------------

// Per-index, per-weight components of the solution. Each component is sorted
// by tree id; every stored tree has root i and the component's weight.
class Solution {
  public:
    using Component = std::vector<std::pair<TreeId, Rational>>;

    int max_weight = 0;
    std::vector<std::vector<Component>> comp;  // [i][n-1]

    const Component& at(int i, int n) const {
        return comp.at(static_cast<size_t>(i)).at(static_cast<size_t>(n - 1));
    }
    Rational coeff(int i, TreeId t, const TreeArena& a) const {
        const Component& c = at(i, static_cast<int>(a.weight(t)));
        auto it = std::lower_bound(c.begin(), c.end(), t,
                                   [](const auto& p, TreeId x) { return p.first < x; });
        return (it != c.end() && it->first == t) ? it->second : Rational(0);
    }
    bool operator==(const Solution& o) const {
        return max_weight == o.max_weight && comp == o.comp;
    }
};

namespace detail {

inline void require_budget(const Sdse& s, int weight) {
    if (weight - 1 > s.truncation)
        throw std::invalid_argument(
            "truncation budget: solving to weight " + std::to_string(weight) + " needs series to degree " +
            std::to_string(weight - 1) + " but the system is truncated at " +
            std::to_string(s.truncation));
}

// Downward closure of the support of F: the child-root profiles that can
// still reach a nonzero series coefficient. Lets the solver cut off child
// multisets early. A full-simplex support (every coefficient nonzero up to
// some degree, the shape of the f_beta products) is detected and answered by
// a degree test alone.
struct SupportCone {
    std::set<MultiIndex> closure;

    explicit SupportCone(const Series& f) {
        std::vector<MultiIndex> frontier;
        for (const auto& [m, c] : f.coef)
            if (closure.insert(m).second) frontier.push_back(m);
        while (!frontier.empty()) {
            MultiIndex m = std::move(frontier.back());
            frontier.pop_back();
            for (const auto& [v, e] : m.exps) {
                MultiIndex down = m.plus(v, -1);
                if (closure.insert(down).second) frontier.push_back(down);
            }
        }
    }

    bool reachable(const MultiIndex& partial) const { return closure.count(partial) > 0; }
};

}  // namespace detail

// Direct recursive evaluation of the closed coefficient formula: for
// t = B+_i(prod t_k^{m_k}) the coefficient is the product of per-decoration
// multinomials, the series coefficient of F_i at the child root profile, and
// the children's own coefficients.
inline Solution solve_e1(TreeArena& a, const Sdse& s, int weight) {
    detail::require_budget(s, weight);
    int N = s.size();
    Solution sol;
    sol.max_weight = weight;
    sol.comp.assign(static_cast<size_t>(N), {});
    std::vector<detail::SupportCone> cones;
    cones.reserve(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) cones.emplace_back(s.eqn(i));

    // flat pool of solved trees in canonical order (weight-major), with coefficients
    struct PoolEntry {
        TreeId t;
        std::uint32_t w;
        std::uint32_t root;
        Rational coeff;
    };
    std::vector<PoolEntry> pool;

    for (int n = 1; n <= weight; ++n) {
        std::vector<Solution::Component> level(static_cast<size_t>(N));
        if (n == 1) {
            for (int i = 0; i < N; ++i)
                level[static_cast<size_t>(i)].emplace_back(a.leaf(static_cast<std::uint32_t>(i)), 1);
        } else {
            // enumerate child multisets of total weight n-1 from the pool
            struct Frame {
                std::size_t from;
                int rem;
            };
            std::vector<TreeId> forest;
            std::vector<std::pair<TreeId, int>> groups;  // distinct child, multiplicity
            for (int i = 0; i < N; ++i) {
                const auto& cone = cones[static_cast<size_t>(i)];
                Solution::Component out;
                MultiIndex profile;  // child root counts so far
                Rational child_prod = 1;
                // multinomial bookkeeping per decoration
                std::vector<Rational> multinom(static_cast<size_t>(N), 1);
                std::vector<int> root_count(static_cast<size_t>(N), 0);

                auto rec = [&](auto&& self, std::size_t from, int rem) -> void {
                    if (rem == 0) {
                        Rational c = s.eqn(i).at(profile);
                        if (!is_zero(c)) {
                            for (int d = 0; d < N; ++d) c *= multinom[static_cast<size_t>(d)];
                            c *= child_prod;
                            if (!is_zero(c))
                                out.emplace_back(a.make_sorted(static_cast<std::uint32_t>(i), forest), c);
                        }
                        return;
                    }
                    for (std::size_t k = from; k < pool.size(); ++k) {
                        const PoolEntry& e = pool[k];
                        if (static_cast<int>(e.w) > rem) break;
                        // take e with multiplicity 1..floor(rem/w); the
                        // reachability cut is monotone, more copies never help
                        int taken = 0;
                        MultiIndex saved_profile = profile;
                        Rational saved_prod = child_prod;
                        Rational saved_multinom = multinom[e.root];
                        int saved_count = root_count[e.root];
                        while ((taken + 1) * static_cast<int>(e.w) <= rem &&
                               cone.reachable(profile.plus(static_cast<int>(e.root)))) {
                            ++taken;
                            forest.push_back(e.t);
                            profile = profile.plus(static_cast<int>(e.root));
                            ++root_count[e.root];
                            multinom[e.root] *= Rational(root_count[e.root], taken);
                            child_prod *= e.coeff;
                            self(self, k + 1, rem - taken * static_cast<int>(e.w));
                        }
                        for (int u = 0; u < taken; ++u) forest.pop_back();
                        profile = std::move(saved_profile);
                        child_prod = std::move(saved_prod);
                        multinom[e.root] = std::move(saved_multinom);
                        root_count[e.root] = saved_count;
                    }
                };
                rec(rec, 0, n - 1);
                std::sort(out.begin(), out.end(),
                          [](const auto& x, const auto& y) { return x.first < y.first; });
                level[static_cast<size_t>(i)] = std::move(out);
            }
        }
        // the pool stays in canonical order (weight-major, canonical within a
        // weight), so generated child lists are canonically sorted already
        std::size_t mark = pool.size();
        for (int i = 0; i < N; ++i) {
            for (auto& [t, c] : level[static_cast<size_t>(i)])
                pool.push_back({t, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(i), c});
            sol.comp[static_cast<size_t>(i)].push_back(std::move(level[static_cast<size_t>(i)]));
        }
        std::sort(pool.begin() + static_cast<std::ptrdiff_t>(mark), pool.end(),
                  [&a](const PoolEntry& x, const PoolEntry& y) { return a.less(x.t, y.t); });
    }
    return sol;
}

// Fixed-point iteration oracle: rebuild X_i(n) = B+_i(F_i(X)(n-1)) weight by
// weight by actual series substitution in the completed tree algebra.
inline Solution solve_subst(TreeArena& a, const Sdse& s, int weight) {
    detail::require_budget(s, weight);
    int N = s.size();
    Solution sol;
    sol.max_weight = weight;
    sol.comp.assign(static_cast<size_t>(N), {});
    std::vector<TreePoly> X(static_cast<size_t>(N));
    for (int n = 1; n <= weight; ++n) {
        std::vector<TreePoly> next = X;
        for (int i = 0; i < N; ++i) {
            TreePoly inner =
                (n == 1) ? TreePoly::unit(1) : substitute(a, s.eqn(i), X, n - 1).component(a, n - 1);
            Solution::Component comp;
            for (auto& [f, c] : inner.terms)
                comp.emplace_back(a.make(static_cast<std::uint32_t>(i), f.trees), c);
            std::sort(comp.begin(), comp.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            for (auto& [t, c] : comp) next[static_cast<size_t>(i)].add_term(Forest::single(t), c);
            sol.comp[static_cast<size_t>(i)].push_back(std::move(comp));
        }
        X = std::move(next);
    }
    return sol;
}

// ---------------------------------------------------------------------------
// the Hopf criterion
// ---------------------------------------------------------------------------

// Structure coefficients: entries lambda(i, j, n), n = 1..max_n, or
// unset (bottom) when both test vectors vanish identically.
class LambdaTable {
  public:
    int n_indices = 0;
    int max_n = 0;
    std::vector<std::optional<Rational>> v;

    LambdaTable() = default;
    LambdaTable(int indices, int maxn)
        : n_indices(indices), max_n(maxn),
          v(static_cast<size_t>(indices) * static_cast<size_t>(indices) *
            static_cast<size_t>(maxn)) {}

    std::optional<Rational>& at(int i, int j, int n) {
        return v[(static_cast<size_t>(n - 1) * static_cast<size_t>(n_indices) +
                  static_cast<size_t>(i)) *
                     static_cast<size_t>(n_indices) +
                 static_cast<size_t>(j)];
    }
    const std::optional<Rational>& at(int i, int j, int n) const {
        return const_cast<LambdaTable*>(this)->at(i, j, n);
    }
};

struct HopfWitness {
    int n = 0, i = 0, j = 0;
    TreeId t1 = 0, t2 = 0;
    Rational a1, v1, a2, v2;  // solution coefficients and leaf-cut sums
};

struct HopfVerdict {
    bool hopf = false;
    int checked_to = 0;  // criterion verified for n = 1..checked_to
    LambdaTable table;
    std::optional<HopfWitness> witness;
};

// Decides whether the generated subalgebra is Hopf up to weight N by the
// colinearity criterion: for every (i, j, n) the leaf-deletion sums over
// X_i(n+1) must be an exact scalar multiple of X_i(n). Scans by degree
// ascending and stops at the smallest witness.
inline HopfVerdict check_hopf(TreeArena& a, const Sdse& s, const Solution& sol) {
    int N = s.size();
    int max_n = sol.max_weight - 1;
    HopfVerdict verdict;
    verdict.table = LambdaTable(N, max_n);
    for (int n = 1; n <= max_n; ++n) {
        LeafDeletionCache cache;
        for (int i = 0; i < N; ++i) {
            // leaf-deletion sums v_j over the degree-(n+1) component
            std::vector<std::map<TreeId, Rational>> vsum(static_cast<size_t>(N));
            for (const auto& [t, at] : sol.at(i, n + 1))
                for (const auto& [dec, rep, cnt] : leaf_deletions(a, t, cache)) {
                    Rational& slot = vsum[dec][rep];
                    slot += at * cnt;
                    if (is_zero(slot)) vsum[dec].erase(rep);
                }
            const auto& acomp = sol.at(i, n);
            for (int j = 0; j < N; ++j) {
                const auto& vs = vsum[static_cast<size_t>(j)];
                if (acomp.empty()) {
                    if (vs.empty()) continue;  // bottom entry, stays unset
                    const auto& [t, vc] = *vs.begin();
                    verdict.witness = HopfWitness{n, i, j, t, t, 0, vc, 0, vc};
                    verdict.checked_to = n - 1;
                    return verdict;
                }
                // reference: smallest tree id with nonzero solution coefficient
                TreeId t0 = acomp.front().first;
                const Rational& a0 = acomp.front().second;
                auto vat = [&](TreeId t) -> Rational {
                    auto it = vs.find(t);
                    return it == vs.end() ? Rational(0) : it->second;
                };
                Rational v0 = vat(t0);
                Rational lambda = v0 / a0;
                std::optional<HopfWitness> bad;
                for (const auto& [t, at] : acomp) {
                    Rational vt = vat(t);
                    if (vt * a0 != v0 * at) {
                        bad = HopfWitness{n, i, j, t0, t, a0, v0, at, vt};
                        break;
                    }
                }
                if (!bad)
                    for (const auto& [t, vt] : vs) {
                        if (!is_zero(sol.coeff(i, t, a))) continue;  // checked above
                        bad = HopfWitness{n, i, j, t0, t, a0, v0, 0, vt};
                        break;
                    }
                if (bad) {
                    verdict.witness = bad;
                    verdict.checked_to = n - 1;
                    return verdict;
                }
                verdict.table.at(i, j, n) = lambda;
            }
        }
    }
    verdict.hopf = true;
    verdict.checked_to = max_n;
    return verdict;
}

inline HopfVerdict check_hopf(TreeArena& a, const Sdse& s, int N) {
    Solution sol = solve_e1(a, s, N);
    return check_hopf(a, s, sol);
}

// Closed form of the structure coefficient along a dependence path
// i_1 -> ... -> i_n, from the degree-1 and degree-2 series coefficients only.
inline Rational lambda_from_path(const Sdse& s, const std::vector<int>& path, int j) {
    if (path.empty()) throw std::invalid_argument("empty path");
    int n = static_cast<int>(path.size());
    Rational r = s.linear_coeff(path.back(), j);
    for (int p = 0; p + 1 < n; ++p) {
        int ip = path[static_cast<size_t>(p)];
        int next = path[static_cast<size_t>(p + 1)];
        Rational denom = s.linear_coeff(ip, next);
        if (is_zero(denom))
            throw std::invalid_argument("path does not follow dependence edges: zero linear coefficient");
        Rational delta = (j == next) ? 2 : 1;
        r += delta * s.quad_coeff(ip, j, next) / denom;
    }
    return r;
}

// Rebuilds the series of index i from the structure coefficients and the
// linear coefficients of the whole system; unique given a_0 = 1. Walks the
// multi-index lattice along the smallest variable of each target.
inline Series reconstruct_series(const LambdaTable& table,
                                 const std::vector<std::vector<Rational>>& linear, int i) {
    int N = table.n_indices;
    int D = table.max_n;
    Series out(D);
    std::map<MultiIndex, Rational> known;
    known.emplace(MultiIndex::one(), 1);
    out.add(MultiIndex::one(), 1);
    // breadth by degree: extend every known index by variables <= its smallest
    for (int deg = 0; deg < D; ++deg) {
        std::map<MultiIndex, Rational> next;
        for (const auto& [m, c] : known) {
            if (m.degree() != deg || is_zero(c)) continue;
            int vmax = m.exps.empty() ? N - 1 : m.exps.front().first;
            for (int j = 0; j <= vmax; ++j) {
                MultiIndex target = m.plus(j);
                const auto& lam = table.at(i, j, deg + 1);
                if (!lam) {
                    throw std::domain_error("reconstruction needs an undetermined structure coefficient");
                }
                Rational val = *lam;
                for (const auto& [l, e] : m.exps) val -= Rational(e) * linear[static_cast<size_t>(l)][static_cast<size_t>(j)];
                val = val * c / Rational(m.exponent(j) + 1);
                if (!is_zero(val)) next.emplace(target, val);
            }
        }
        for (auto& [m, c] : next) out.add(m, c);
        known = std::move(next);
    }
    return out;
}

// Additive compatibility of the structure coefficients across compositions:
// lambda_{n_1+...+n_p+1} - a_j = lambda_{p+1} - a_j + sum_l (lambda_{n_l} - a_j)
// over tuples supported by the series. Returns the first violation found.
struct AdditivityReport {
    bool ok = true;
    std::string counterexample;
};

inline AdditivityReport check_lambda_additivity(const Sdse& s, const LambdaTable& table) {
    int N = s.size();
    auto get = [&](int i, int j, int n) -> std::optional<Rational> {
        if (n < 1 || n > table.max_n) return std::nullopt;
        return table.at(i, j, n);
    };
    for (int i = 0; i < N; ++i) {
        for (const auto& [m, c] : s.eqn(i).coef) {
            int p = m.degree();
            if (p < 1) continue;
            // d-multiset given by m; enumerate per-slot weights n_l >= 1
            std::vector<int> ds;
            for (const auto& [v, e] : m.exps)
                for (int k = 0; k < e; ++k) ds.push_back(v);
            std::vector<int> ns(ds.size(), 1);
            while (true) {
                int total = 0;
                for (int x : ns) total += x;
                if (total + 1 <= table.max_n) {
                    for (int j = 0; j < N; ++j) {
                        auto lhs = get(i, j, total + 1);
                        auto base = get(i, j, p + 1);
                        if (!lhs || !base) continue;
                        Rational rhs = *base;
                        bool have = true;
                        for (std::size_t l = 0; l < ds.size(); ++l) {
                            auto lam = get(ds[l], j, ns[l]);
                            if (!lam) {
                                have = false;
                                break;
                            }
                            rhs += *lam - s.linear_coeff(ds[l], j);
                        }
                        if (have && *lhs != rhs) {
                            AdditivityReport r;
                            r.ok = false;
                            r.counterexample = "i=" + s.indices.name(i) + " j=" + s.indices.name(j) +
                                               " composition degree " + std::to_string(total + 1);
                            return r;
                        }
                    }
                }
                // next weight tuple with sum + 1 <= max_n
                std::size_t k = 0;
                for (; k < ns.size(); ++k) {
                    int rest = 0;
                    for (std::size_t l = 0; l < ns.size(); ++l)
                        if (l != k) rest += (l < k) ? 1 : ns[l];
                    if (ns[k] + 1 + rest + 1 <= table.max_n + 1) {
                        ++ns[k];
                        for (std::size_t l = 0; l < k; ++l) ns[l] = 1;
                        break;
                    }
                }
                if (k == ns.size()) break;
            }
        }
    }
    return {};
}

}  // namespace dse
