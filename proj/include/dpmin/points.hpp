#ifndef DPMIN_POINTS_HPP
#define DPMIN_POINTS_HPP

#include <string>
#include <string_view>

#include "dpmin/rational.hpp"

namespace dpmin {

// Element of Q x Q carrying the lexicographic group structure: +, the
// first-coordinate flip f, and rational scaling.  Comparison is lexicographic.
struct LexPoint {
    Rat first;
    Rat second;

    friend bool operator==(const LexPoint& a, const LexPoint& b) {
        return a.first == b.first && a.second == b.second;
    }
    friend bool operator!=(const LexPoint& a, const LexPoint& b) { return !(a == b); }
    friend bool operator<(const LexPoint& a, const LexPoint& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    }
};

LexPoint lex_add(const LexPoint& a, const LexPoint& b);
// f((a,b)) = (-a,b).  Involution; commutes with + and with scaling.
LexPoint lex_flip(const LexPoint& a);
LexPoint lex_scale(const Rat& q, const LexPoint& a);
LexPoint lex_neg(const LexPoint& a);

// Element of Q x Q read through two independent coordinate orders.  No group
// structure; the two projections are compared separately (lt1 / lt2 atoms).
struct PairPoint {
    Rat first;
    Rat second;

    friend bool operator==(const PairPoint& a, const PairPoint& b) {
        return a.first == b.first && a.second == b.second;
    }
    friend bool operator!=(const PairPoint& a, const PairPoint& b) { return !(a == b); }
};

std::string point_to_string(const Rat& first, const Rat& second);

// Parses "(p/q, r/s)".  Throws ParseError.
void parse_point(std::string_view text, Rat& first, Rat& second);

}  // namespace dpmin

#endif  // DPMIN_POINTS_HPP
