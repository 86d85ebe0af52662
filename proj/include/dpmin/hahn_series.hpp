#ifndef DPMIN_HAHN_SERIES_HPP
#define DPMIN_HAHN_SERIES_HPP

#include <map>
#include <string>
#include <string_view>

#include "dpmin/rational.hpp"

namespace dpmin {

// Finite-support generalized power series over Q with rational exponents:
// a = sum of c_g * t^g.  Only the additive ordered Q-vector structure is
// implemented; there is no series multiplication.
//
// Ordering: a > 0 iff the coefficient at the least exponent of a is > 0
// (t is infinitesimal, so smaller exponents dominate).
class HahnSeries {
public:
    HahnSeries() = default;

    // Single monomial c * t^g; c = 0 yields the zero series.
    static HahnSeries monomial(const Rat& coeff, const Rat& exponent);

    bool is_zero() const { return support_.empty(); }

    // Valuation = least exponent of the support.  Precondition: !is_zero().
    const Rat& valuation() const;

    // Leading (least-exponent) coefficient.  Precondition: !is_zero().
    const Rat& leading_coeff() const;

    const std::map<Rat, Rat>& support() const { return support_; }

    HahnSeries operator+(const HahnSeries& o) const;
    HahnSeries operator-() const;
    HahnSeries operator-(const HahnSeries& o) const { return *this + (-o); }
    HahnSeries scaled(const Rat& q) const;

    // Shifts every exponent by d (multiplication by t^d).
    HahnSeries shifted(const Rat& d) const;

    HahnSeries abs() const;
    int sign() const;  // -1, 0, +1

    friend bool operator==(const HahnSeries& a, const HahnSeries& b) {
        return a.support_ == b.support_;
    }
    friend bool operator!=(const HahnSeries& a, const HahnSeries& b) { return !(a == b); }
    friend bool operator<(const HahnSeries& a, const HahnSeries& b) {
        return (b - a).sign() > 0;
    }
    friend bool operator<=(const HahnSeries& a, const HahnSeries& b) { return !(b < a); }
    friend bool operator>(const HahnSeries& a, const HahnSeries& b) { return b < a; }
    friend bool operator>=(const HahnSeries& a, const HahnSeries& b) { return !(a < b); }

    std::string to_string() const;

private:
    void prune();

    // exponent -> coefficient; invariant: no zero coefficients stored.
    std::map<Rat, Rat> support_;
};

// Parses "3/2 * t^(1/2) + -1 * t^(2)".  Terms are "c", "t^(g)" or
// "c * t^(g)", joined by '+'.  A leading '-' negates the first term.
HahnSeries parse_hahn_series(std::string_view text);

}  // namespace dpmin

#endif  // DPMIN_HAHN_SERIES_HPP
