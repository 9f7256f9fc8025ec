#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dse/forest.hpp"
#include "dse/rational.hpp"

namespace dse {

// Sparse exponent vector; entries with zero exponent are never stored.
class MultiIndex {
  public:
    std::vector<std::pair<int, int>> exps;  // (variable, exponent>0), sorted by variable

    MultiIndex() = default;
    static MultiIndex one() { return {}; }
    static MultiIndex unit(int var) {
        MultiIndex m;
        m.exps.emplace_back(var, 1);
        return m;
    }

    int degree() const {
        int d = 0;
        for (auto& [v, e] : exps) d += e;
        return d;
    }
    int exponent(int var) const {
        for (auto& [v, e] : exps)
            if (v == var) return e;
        return 0;
    }
    bool depends_on(int var) const { return exponent(var) > 0; }

    MultiIndex plus(int var, int delta = 1) const {
        MultiIndex m = *this;
        for (auto it = m.exps.begin(); it != m.exps.end(); ++it) {
            if (it->first == var) {
                it->second += delta;
                if (it->second < 0) throw std::invalid_argument("negative exponent");
                if (it->second == 0) m.exps.erase(it);
                return m;
            }
            if (it->first > var) {
                if (delta < 0) throw std::invalid_argument("negative exponent");
                if (delta > 0) m.exps.insert(it, {var, delta});
                return m;
            }
        }
        if (delta < 0) throw std::invalid_argument("negative exponent");
        if (delta > 0) m.exps.emplace_back(var, delta);
        return m;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex m;
        auto i = exps.begin();
        auto j = o.exps.begin();
        while (i != exps.end() || j != o.exps.end()) {
            if (j == o.exps.end() || (i != exps.end() && i->first < j->first))
                m.exps.push_back(*i++);
            else if (i == exps.end() || j->first < i->first)
                m.exps.push_back(*j++);
            else {
                m.exps.emplace_back(i->first, i->second + j->second);
                ++i;
                ++j;
            }
        }
        return m;
    }

    // componentwise <=
    bool divides(const MultiIndex& o) const {
        for (auto& [v, e] : exps)
            if (o.exponent(v) < e) return false;
        return true;
    }

    bool operator==(const MultiIndex& o) const { return exps == o.exps; }
    // graded order: degree first, then lexicographic — keeps file output stable
    bool operator<(const MultiIndex& o) const {
        int da = degree(), db = o.degree();
        if (da != db) return da < db;
        return exps < o.exps;
    }
};

// Truncated formal power series over Q in the variables of an index set.
// The truncation degree is explicit state; arithmetic truncates at the
// smaller of the operands' degrees and never silently exceeds it.
class Series {
  public:
    int trunc = 0;
    std::map<MultiIndex, Rational> coef;

    Series() = default;
    explicit Series(int truncation) : trunc(truncation) {}

    static Series constant(const Rational& c, int truncation) {
        Series s(truncation);
        s.add(MultiIndex::one(), c);
        return s;
    }
    static Series variable(int var, int truncation) {
        Series s(truncation);
        s.add(MultiIndex::unit(var), 1);
        return s;
    }

    void add(const MultiIndex& m, const Rational& c) {
        if (is_zero(c) || m.degree() > trunc) return;
        auto it = coef.find(m);
        if (it == coef.end()) {
            coef.emplace(m, c);
        } else {
            it->second += c;
            if (is_zero(it->second)) coef.erase(it);
        }
    }

    Rational at(const MultiIndex& m) const {
        auto it = coef.find(m);
        return it == coef.end() ? Rational(0) : it->second;
    }
    Rational constant_term() const { return at(MultiIndex::one()); }
    Rational linear(int var) const { return at(MultiIndex::unit(var)); }
    bool is_zero_series() const { return coef.empty(); }
    bool is_constant() const {
        return coef.empty() || (coef.size() == 1 && coef.begin()->first.degree() == 0);
    }
    bool depends_on(int var) const {
        for (auto& [m, c] : coef)
            if (m.depends_on(var)) return true;
        return false;
    }

    Series truncate(int d) const {
        Series r(std::min(trunc, d));
        for (auto& [m, c] : coef)
            if (m.degree() <= r.trunc) r.coef.emplace(m, c);
        return r;
    }

    Series operator+(const Series& o) const {
        Series r = truncate(std::min(trunc, o.trunc));
        for (auto& [m, c] : o.coef) r.add(m, c);
        return r;
    }
    Series operator-(const Series& o) const {
        Series r = truncate(std::min(trunc, o.trunc));
        for (auto& [m, c] : o.coef) r.add(m, -c);
        return r;
    }
    Series scale(const Rational& c) const {
        Series r(trunc);
        if (is_zero(c)) return r;
        for (auto& [m, x] : coef) r.coef.emplace(m, x * c);
        return r;
    }
    Series operator*(const Series& o) const {
        Series r(std::min(trunc, o.trunc));
        for (auto& [m1, c1] : coef) {
            if (m1.degree() > r.trunc) continue;
            for (auto& [m2, c2] : o.coef) {
                if (m1.degree() + m2.degree() > r.trunc) continue;
                r.add(m1 + m2, c1 * c2);
            }
        }
        return r;
    }

    Series pow(int k) const {
        if (k < 0) return inverse().pow(-k);
        Series r = constant(1, trunc);
        Series base = *this;
        while (k > 0) {
            if (k & 1) r = r * base;
            base = (k >>= 1) ? base * base : base;
        }
        return r;
    }

    // Geometric inversion; requires a nonzero constant term.
    Series inverse() const {
        Rational c0 = constant_term();
        if (is_zero(c0))
            throw std::domain_error("cannot invert a series with zero constant term");
        Series g = (*this - constant(c0, trunc)).scale(Rational(-1) / c0);  // -G/c0
        Series r = constant(1, trunc);
        Series p = constant(1, trunc);
        for (int k = 1; k <= trunc && !p.is_zero_series(); ++k) {
            p = p * g;
            r = r + p;
        }
        return r.scale(Rational(1) / c0);
    }

    bool operator==(const Series& o) const { return trunc == o.trunc && coef == o.coef; }
};

// sum_k [ prod_{m=0}^{k-1} (lambda + m beta) ] / k! inner^k, the common shape
// of the one-parameter building blocks: fgen(1, beta, h) = f_beta(h) and the
// weight-lambda variants fgen(lambda, beta, h) = f_{beta/lambda}(lambda h),
// which degenerate gracefully to 1 at lambda = 0.
inline Series f_gen(const Rational& lambda, const Rational& beta, const Series& inner) {
    if (!is_zero(inner.constant_term()))
        throw std::domain_error("composition requires zero constant term");
    int D = inner.trunc;
    Series r = Series::constant(1, D);
    Series p = Series::constant(1, D);
    Rational num = 1, fact = 1;
    for (int k = 1; k <= D; ++k) {
        num *= lambda + Rational(k - 1) * beta;
        fact *= k;
        if (is_zero(num)) break;
        p = p * inner;
        if (p.is_zero_series()) break;
        r = r + p.scale(num / fact);
    }
    return r;
}

inline Series f_beta(const Rational& beta, const Series& inner) {
    return f_gen(1, beta, inner);
}

// -ln(1 - inner), normalised so all coefficients are positive for inner = h.
inline Series log1m(const Series& inner) {
    if (!is_zero(inner.constant_term()))
        throw std::domain_error("composition requires zero constant term");
    int D = inner.trunc;
    Series r(D);
    Series p = Series::constant(1, D);
    for (int k = 1; k <= D; ++k) {
        p = p * inner;
        if (p.is_zero_series()) break;
        r = r + p.scale(Rational(1, k));
    }
    return r;
}

// Evaluate F at h_var := args[var], each argument an arbitrary series with
// the same truncation.
inline Series compose(const Series& F, const std::vector<Series>& args, int trunc) {
    Series r(trunc);
    for (auto& [m, c] : F.coef) {
        Series term = Series::constant(c, trunc);
        for (auto& [v, e] : m.exps) term = term * args.at(static_cast<size_t>(v)).pow(e);
        r = r + term;
    }
    return r;
}

// Evaluate F on tree-valued arguments with no weight-0 part, truncated by
// total weight.
inline TreePoly substitute(TreeArena& a, const Series& F, const std::vector<TreePoly>& X,
                           int weight_bound) {
    for (const auto& x : X)
        if (!x.component(a, 0).is_zero_poly())
            throw std::domain_error("substitute: arguments must have no weight-0 component");
    // cache powers per variable as needed
    std::vector<std::vector<TreePoly>> pows(X.size());
    for (std::size_t v = 0; v < X.size(); ++v) pows[v].push_back(TreePoly::unit(1));
    auto power = [&](std::size_t v, int e) -> const TreePoly& {
        while (static_cast<int>(pows[v].size()) <= e)
            pows[v].push_back(pows[v].back().mul(a, X[v], weight_bound));
        return pows[v][static_cast<size_t>(e)];
    };
    TreePoly r;
    for (auto& [m, c] : F.coef) {
        if (m.degree() > weight_bound) continue;  // every X_j has weight >= 1
        TreePoly term = TreePoly::unit(c);
        for (auto& [v, e] : m.exps) term = term.mul(a, power(static_cast<size_t>(v), e), weight_bound);
        r += term;
    }
    return r;
}

}  // namespace dse
