#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arczeta/polynomial.hpp"

namespace arczeta {

// Polynomial text grammar:
//   expr     := ['+'|'-'] term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := integer ['/' integer] | 'i' | variable ['^' integer]
// Whitespace is ignored. 'i' is the imaginary unit, never a variable.
// Variables are identifiers; when no explicit list is given they resolve from
// the default alphabet x,y,z,w or a numbered family like x1..xn / z1..zn.

namespace detail {

struct RawTerm {
    GaussianRational coeff{Rational(1), Rational(0)};
    // (name, exponent, byte offset of the name)
    std::vector<std::tuple<std::string, std::uint64_t, std::size_t>> powers;
};

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : text_(text) {}

    std::vector<RawTerm> parse() {
        std::vector<RawTerm> terms;
        skip_ws();
        if (at_end()) throw ParseError("empty polynomial", pos_);
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (get() == '-');
        terms.push_back(parse_term(neg));
        skip_ws();
        while (!at_end()) {
            char c = get();
            if (c != '+' && c != '-')
                throw ParseError(std::string("expected '+' or '-', found '") + c + "'", pos_ - 1);
            terms.push_back(parse_term(c == '-'));
            skip_ws();
        }
        return terms;
    }

private:
    RawTerm parse_term(bool negated) {
        RawTerm t;
        if (negated) t.coeff = -t.coeff;
        parse_factor(t);
        skip_ws();
        while (!at_end() && peek() == '*') {
            get();
            parse_factor(t);
            skip_ws();
        }
        return t;
    }

    void parse_factor(RawTerm& t) {
        skip_ws();
        if (at_end()) throw ParseError("expected a factor", pos_);
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t at = pos_;
            std::string numerator = read_digits();
            Rational value;
            skip_ws();
            if (!at_end() && peek() == '/') {
                get();
                skip_ws();
                std::size_t dat = pos_;
                if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
                    throw ParseError("expected denominator digits", dat);
                std::string denominator = read_digits();
                value = Rational::parse(numerator + "/" + denominator);
            } else {
                value = Rational::parse(numerator);
            }
            if (!at_end() && peek() == '.')
                throw ParseError("decimal literals are not accepted; use p/q", pos_);
            (void)at;
            t.coeff = t.coeff * GaussianRational{value, Rational(0)};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t at = pos_;
            std::string name = read_identifier();
            if (name == "i") {
                t.coeff = t.coeff * GaussianRational{Rational(0), Rational(1)};
                return;
            }
            std::uint64_t exp = 1;
            skip_ws();
            if (!at_end() && peek() == '^') {
                get();
                skip_ws();
                std::size_t eat = pos_;
                if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
                    throw ParseError("expected exponent digits", eat);
                std::string digits = read_digits();
                if (digits.size() > 7) throw ParseError("exponent overflow", eat);
                exp = std::stoull(digits);
                if (exp > (1u << 20)) throw ParseError("exponent overflow", eat);
            }
            t.powers.emplace_back(std::move(name), exp, at);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::string read_digits() {
        std::string s;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) s += get();
        return s;
    }

    std::string read_identifier() {
        std::string s;
        while (!at_end()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') s += get();
            else break;
        }
        return s;
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char get() { return text_[pos_++]; }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline std::vector<std::string> resolve_variables(
    const std::vector<RawTerm>& terms,
    const std::optional<std::vector<std::string>>& explicit_vars) {
    std::vector<std::string> seen;
    for (const auto& t : terms)
        for (const auto& [name, exp, at] : t.powers)
            if (std::find(seen.begin(), seen.end(), name) == seen.end()) seen.push_back(name);

    if (explicit_vars) {
        for (const auto& t : terms)
            for (const auto& [name, exp, at] : t.powers)
                if (std::find(explicit_vars->begin(), explicit_vars->end(), name) == explicit_vars->end())
                    throw ParseError("unknown variable '" + name + "'", at);
        return *explicit_vars;
    }

    if (seen.empty()) return {"x"};

    // Default alphabet: use the x,y,z,w prefix up to the last letter present.
    static const std::vector<std::string> xyzw = {"x", "y", "z", "w"};
    bool all_xyzw = true;
    std::size_t last = 0;
    for (const auto& name : seen) {
        auto it = std::find(xyzw.begin(), xyzw.end(), name);
        if (it == xyzw.end()) { all_xyzw = false; break; }
        last = std::max(last, static_cast<std::size_t>(it - xyzw.begin()) + 1);
    }
    if (all_xyzw) return {xyzw.begin(), xyzw.begin() + static_cast<std::ptrdiff_t>(last)};

    // Numbered family, e.g. z1..z4: a single alphabetic stem plus a 1-based index.
    std::string stem;
    std::size_t max_idx = 0;
    bool family = true;
    for (const auto& name : seen) {
        std::size_t d = 0;
        while (d < name.size() && !std::isdigit(static_cast<unsigned char>(name[d]))) ++d;
        if (d == 0 || d == name.size()) { family = false; break; }
        std::string s = name.substr(0, d);
        if (stem.empty()) stem = s;
        if (s != stem) { family = false; break; }
        std::size_t idx = std::stoull(name.substr(d));
        if (idx == 0 || idx > 64) { family = false; break; }
        max_idx = std::max(max_idx, idx);
    }
    if (family) {
        std::vector<std::string> vars;
        for (std::size_t v = 1; v <= max_idx; ++v) vars.push_back(stem + std::to_string(v));
        return vars;
    }

    // Fallback: the variables actually used, sorted for determinism.
    std::sort(seen.begin(), seen.end());
    return seen;
}

}  // namespace detail

/// Parse polynomial text into its canonical sparse form.
///
/// By default zero and constant polynomials are rejected (degenerate for zeta
/// analysis); pass allow_constant = true to represent them anyway.
inline Polynomial parse_polynomial(std::string_view text,
                                   std::optional<std::vector<std::string>> variables = std::nullopt,
                                   bool allow_constant = false) {
    detail::PolyParser parser(text);
    auto raw = parser.parse();
    auto vars = detail::resolve_variables(raw, variables);
    Polynomial p(vars.size());
    for (const auto& t : raw) {
        MultiIndex m(vars.size(), 0);
        for (const auto& [name, exp, at] : t.powers) {
            auto it = std::find(vars.begin(), vars.end(), name);
            std::size_t v = static_cast<std::size_t>(it - vars.begin());
            std::uint64_t total = m[v] + exp;
            if (total > (1u << 20)) throw ParseError("exponent overflow", at);
            m[v] = static_cast<std::uint32_t>(total);
        }
        p.add_term(m, t.coeff);
    }
    if (!allow_constant && p.is_constant())
        throw ParseError("zero or constant polynomial rejected for zeta analysis", 0);
    return p;
}

}  // namespace arczeta
