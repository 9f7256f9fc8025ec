#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dse/index_set.hpp"
#include "dse/rational.hpp"
#include "dse/series.hpp"

namespace dse {

struct ParseError : std::runtime_error {
    std::size_t position;
    std::string expected;
    ParseError(std::size_t pos, const std::string& what_expected, const std::string& found)
        : std::runtime_error("parse error at position " + std::to_string(pos) + ": expected " +
                             what_expected + ", found " + found),
          position(pos),
          expected(what_expected) {}
};

// Recursive-descent parser for series expressions.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ['^' '(' signed-int ')']
//   atom   := rational | 'h'<index> | 'fb(' rational ',' expr ')'
//           | 'ln1m(' expr ')' | '(' expr ')'
//
// Rationals are 'p' or 'p/q'. Negative powers require an invertible base.
class ExprParser {
  public:
    ExprParser(std::string_view text, const IndexSet& indices, int truncation)
        : s_(text), idx_(indices), trunc_(truncation) {}

    Series parse() {
        Series r = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("end of expression", snippet());
        return r;
    }

  private:
    std::string_view s_;
    const IndexSet& idx_;
    int trunc_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected, const std::string& found) {
        throw ParseError(pos_, expected, found);
    }
    std::string snippet() const {
        if (pos_ >= s_.size()) return "end of input";
        return "'" + std::string(s_.substr(pos_, std::min<std::size_t>(8, s_.size() - pos_))) + "'";
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("'") + c + "'", snippet());
    }

    static bool word_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    }

    std::string word() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && word_char(s_[pos_])) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    Rational rational_lit() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ == start) fail("rational literal", snippet());
        try {
            return parse_rational(s_.substr(start, pos_ - start));
        } catch (const std::invalid_argument& e) {
            pos_ = start;
            fail("well-formed rational", std::string(e.what()));
        }
    }

    int signed_int() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        std::size_t digits = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == digits) fail("integer", snippet());
        return std::stoi(std::string(s_.substr(start, pos_ - start)));
    }

    Series expr() {
        skip_ws();
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        Series r = term();
        if (neg) r = r.scale(-1);
        while (true) {
            skip_ws();
            if (eat('+'))
                r = r + term();
            else if (eat('-'))
                r = r - term();
            else
                break;
        }
        return r;
    }

    Series term() {
        Series r = factor();
        while (eat('*')) r = r * factor();
        return r;
    }

    Series factor() {
        Series base = atom();
        skip_ws();
        if (eat('^')) {
            expect('(');
            int e = signed_int();
            expect(')');
            if (e < 0 && is_zero(base.constant_term()))
                fail("invertible base for negative power",
                     "series with zero constant term");
            base = base.pow(e);
        }
        return base;
    }

    Series atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("atom", snippet());
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Series r = expr();
            expect(')');
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Series::constant(rational_lit(), trunc_);
        std::size_t start = pos_;
        std::string w = word();
        if (w == "fb") {
            expect('(');
            Rational beta = rational_lit();
            expect(',');
            Series inner = expr();
            expect(')');
            if (!is_zero(inner.constant_term())) {
                pos_ = start;
                fail("fb argument with zero constant term", "constant term != 0");
            }
            return f_beta(beta, inner);
        }
        if (w == "ln1m") {
            expect('(');
            Series inner = expr();
            expect(')');
            if (!is_zero(inner.constant_term())) {
                pos_ = start;
                fail("ln1m argument with zero constant term", "constant term != 0");
            }
            return log1m(inner);
        }
        if (w.size() > 1 && w[0] == 'h') {
            std::string name = w.substr(1);
            int id = idx_.find(name);
            if (id < 0) {
                pos_ = start;
                fail("known index after 'h'", "'" + name + "'");
            }
            return Series::variable(id, trunc_);
        }
        pos_ = start;
        fail("atom", snippet());
    }
};

inline Series parse_expr(std::string_view text, const IndexSet& indices, int truncation) {
    return ExprParser(text, indices, truncation).parse();
}

// Expanded expression form of a series, parseable by parse_expr: terms in
// graded order, rationals in lowest terms, powers as ^(e).
inline std::string series_to_expr(const Series& s, const IndexSet& indices) {
    if (s.coef.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : s.coef) {
        Rational abs = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) out += "-";
            first = false;
        } else {
            out += c < 0 ? " - " : " + ";
        }
        bool coeff_one = (abs == 1);
        if (!coeff_one || m.exps.empty()) out += abs.get_str();
        bool need_star = !coeff_one || m.exps.empty();
        for (const auto& [v, e] : m.exps) {
            if (need_star) out += "*";
            out += "h" + indices.name(v);
            if (e > 1) out += "^(" + std::to_string(e) + ")";
            need_star = true;
        }
    }
    return out;
}

}  // namespace dse
