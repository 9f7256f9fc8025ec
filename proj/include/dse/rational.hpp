#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace dse {

// Exact rational scalar. Everything in the library is computed over Q;
// there is no floating point anywhere.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Lowest-terms "p/q", or just "p" when q == 1.
inline std::string rat_str(const Rational& r) { return r.get_str(); }

inline Rational parse_rational(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rational r;
    if (r.set_str(std::string(s), 10) != 0)
        throw std::invalid_argument("malformed rational: " + std::string(s));
    if (r.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + std::string(s));
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

}  // namespace dse
