#include "dpmin/rational.hpp"

#include <cctype>

#include "dpmin/errors.hpp"

namespace dpmin {

BigInt rat_floor(const Rat& q) {
    BigInt num = numerator(q), den = denominator(q);
    BigInt d = num / den;
    if (num < 0 && d * den != num) --d;
    return d;
}

BigInt rat_ceil(const Rat& q) {
    BigInt num = numerator(q), den = denominator(q);
    BigInt d = num / den;
    if (num > 0 && d * den != num) ++d;
    return d;
}

bool rat_is_integer(const Rat& q) { return denominator(q) == 1; }

std::string rat_to_string(const Rat& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) {
        s += '/';
        s += denominator(q).str();
    }
    return s;
}

Rat parse_rational(std::string_view text) {
    std::size_t i = 0;
    auto fail = [&](const char* msg) -> Rat { throw ParseError(msg, i); };

    auto read_int = [&](bool allow_sign) -> BigInt {
        std::size_t start = i;
        if (allow_sign && i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
        std::size_t digits_from = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == digits_from) fail("expected integer");
        return BigInt(std::string(text.substr(start, i - start)));
    };

    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    BigInt num = read_int(true);
    BigInt den = 1;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '/') {
        ++i;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        den = read_int(false);
        if (den == 0) fail("zero denominator");
    }
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i != text.size()) fail("trailing characters after rational");
    return Rat(num, den);
}

}  // namespace dpmin
