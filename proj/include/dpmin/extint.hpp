#ifndef DPMIN_EXTINT_HPP
#define DPMIN_EXTINT_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace dpmin {

// Integer extended with -inf/+inf.  Used for valuations (v(0) = +inf) and
// annulus bounds (gamma in Z u {+inf}, delta in Z u {-inf}).
class ExtInt {
public:
    constexpr ExtInt() : tag_(Tag::Finite), value_(0) {}
    constexpr ExtInt(long long v) : tag_(Tag::Finite), value_(v) {}  // NOLINT(implicit)

    static constexpr ExtInt neg_inf() { return ExtInt(Tag::NegInf); }
    static constexpr ExtInt pos_inf() { return ExtInt(Tag::PosInf); }

    constexpr bool is_finite() const { return tag_ == Tag::Finite; }
    constexpr bool is_pos_inf() const { return tag_ == Tag::PosInf; }
    constexpr bool is_neg_inf() const { return tag_ == Tag::NegInf; }

    // Precondition: is_finite().
    constexpr long long value() const { return value_; }

    friend constexpr bool operator==(const ExtInt& a, const ExtInt& b) {
        return a.tag_ == b.tag_ && (a.tag_ != Tag::Finite || a.value_ == b.value_);
    }

    friend constexpr bool operator<(const ExtInt& a, const ExtInt& b) {
        if (a.tag_ == b.tag_) return a.tag_ == Tag::Finite && a.value_ < b.value_;
        if (a.tag_ == Tag::NegInf) return true;
        if (b.tag_ == Tag::NegInf) return false;
        return b.tag_ == Tag::PosInf;
    }
    friend constexpr bool operator<=(const ExtInt& a, const ExtInt& b) { return a == b || a < b; }
    friend constexpr bool operator>(const ExtInt& a, const ExtInt& b) { return b < a; }
    friend constexpr bool operator>=(const ExtInt& a, const ExtInt& b) { return b <= a; }
    friend constexpr bool operator!=(const ExtInt& a, const ExtInt& b) { return !(a == b); }

    // Finite + finite only; infinities absorb (pos_inf + n = pos_inf).
    friend constexpr ExtInt operator+(const ExtInt& a, long long n) {
        if (!a.is_finite()) return a;
        return ExtInt(a.value_ + n);
    }

    std::string to_string() const {
        if (tag_ == Tag::PosInf) return "inf";
        if (tag_ == Tag::NegInf) return "-inf";
        return std::to_string(value_);
    }

private:
    enum class Tag : std::uint8_t { NegInf, Finite, PosInf };
    constexpr explicit ExtInt(Tag t) : tag_(t), value_(0) {}

    Tag tag_;
    long long value_;
};

}  // namespace dpmin

#endif  // DPMIN_EXTINT_HPP
