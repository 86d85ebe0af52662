#include "dpmin/hahn_series.hpp"

#include <cctype>

#include "dpmin/errors.hpp"

namespace dpmin {

HahnSeries HahnSeries::monomial(const Rat& coeff, const Rat& exponent) {
    HahnSeries s;
    if (coeff != 0) s.support_[exponent] = coeff;
    return s;
}

const Rat& HahnSeries::valuation() const { return support_.begin()->first; }

const Rat& HahnSeries::leading_coeff() const { return support_.begin()->second; }

HahnSeries HahnSeries::operator+(const HahnSeries& o) const {
    HahnSeries out = *this;
    for (const auto& [g, c] : o.support_) out.support_[g] += c;
    out.prune();
    return out;
}

HahnSeries HahnSeries::operator-() const {
    HahnSeries out = *this;
    for (auto& [g, c] : out.support_) c = -c;
    return out;
}

HahnSeries HahnSeries::scaled(const Rat& q) const {
    HahnSeries out;
    if (q == 0) return out;
    for (const auto& [g, c] : support_) out.support_[g] = q * c;
    return out;
}

HahnSeries HahnSeries::shifted(const Rat& d) const {
    HahnSeries out;
    for (const auto& [g, c] : support_) out.support_[g + d] = c;
    return out;
}

HahnSeries HahnSeries::abs() const { return sign() < 0 ? -*this : *this; }

int HahnSeries::sign() const {
    if (support_.empty()) return 0;
    return leading_coeff() > 0 ? 1 : -1;
}

void HahnSeries::prune() {
    for (auto it = support_.begin(); it != support_.end();) {
        if (it->second == 0)
            it = support_.erase(it);
        else
            ++it;
    }
}

std::string HahnSeries::to_string() const {
    if (support_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [g, c] : support_) {
        if (!first) out += " + ";
        first = false;
        out += rat_to_string(c) + " * t^(" + rat_to_string(g) + ")";
    }
    return out;
}

HahnSeries parse_hahn_series(std::string_view text) {
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto read_rational = [&]() -> Rat {
        skip_ws();
        std::size_t start = i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
        while (i < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/'))
            ++i;
        if (i == start) throw ParseError("expected rational", i);
        return parse_rational(text.substr(start, i - start));
    };

    HahnSeries out;
    skip_ws();
    if (i >= text.size()) throw ParseError("empty series literal", i);
    bool done = false;
    while (!done) {
        Rat coeff = 1;
        Rat exponent = 0;
        bool saw_coeff = false;
        skip_ws();
        if (i < text.size() && text[i] != 't') {
            coeff = read_rational();
            saw_coeff = true;
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip_ws();
            }
        }
        if (i < text.size() && text[i] == 't') {
            ++i;
            if (i >= text.size() || text[i] != '^') throw ParseError("expected '^'", i);
            ++i;
            skip_ws();
            if (i >= text.size() || text[i] != '(') throw ParseError("expected '('", i);
            ++i;
            exponent = read_rational();
            skip_ws();
            if (i >= text.size() || text[i] != ')') throw ParseError("expected ')'", i);
            ++i;
        } else if (!saw_coeff) {
            throw ParseError("expected series term", i);
        }
        out = out + HahnSeries::monomial(coeff, exponent);
        skip_ws();
        if (i < text.size() && text[i] == '+') {
            ++i;
        } else if (i >= text.size()) {
            done = true;
        } else {
            throw ParseError("expected '+' between series terms", i);
        }
    }
    return out;
}

}  // namespace dpmin
