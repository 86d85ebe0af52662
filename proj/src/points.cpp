#include "dpmin/points.hpp"

#include <cctype>

#include "dpmin/errors.hpp"

namespace dpmin {

LexPoint lex_add(const LexPoint& a, const LexPoint& b) {
    return LexPoint{a.first + b.first, a.second + b.second};
}

LexPoint lex_flip(const LexPoint& a) { return LexPoint{-a.first, a.second}; }

LexPoint lex_scale(const Rat& q, const LexPoint& a) {
    return LexPoint{q * a.first, q * a.second};
}

LexPoint lex_neg(const LexPoint& a) { return LexPoint{-a.first, -a.second}; }

std::string point_to_string(const Rat& first, const Rat& second) {
    return "(" + rat_to_string(first) + ", " + rat_to_string(second) + ")";
}

void parse_point(std::string_view text, Rat& first, Rat& second) {
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i >= text.size() || text[i] != '(') throw ParseError("expected '('", i);
    ++i;
    std::size_t comma = text.find(',', i);
    if (comma == std::string_view::npos) throw ParseError("expected ','", text.size());
    std::size_t close = text.rfind(')');
    if (close == std::string_view::npos || close < comma)
        throw ParseError("expected ')'", text.size());
    first = parse_rational(text.substr(i, comma - i));
    second = parse_rational(text.substr(comma + 1, close - comma - 1));
    for (std::size_t j = close + 1; j < text.size(); ++j)
        if (!std::isspace(static_cast<unsigned char>(text[j])))
            throw ParseError("trailing characters after point", j);
}

}  // namespace dpmin
