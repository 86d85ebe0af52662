#include "dpmin/padic.hpp"

#include <algorithm>
#include <cctype>

#include "dpmin/errors.hpp"

namespace dpmin {

namespace {

constexpr long long kUnitCap = 1LL << 31;

void check_parameters(long long p, int precision) {
    if (p < 2) throw ConfigError("prime must be >= 2");
    if (precision < 1) throw ConfigError("precision must be >= 1");
    long long m = 1;
    for (int i = 0; i < precision; ++i) {
        if (m > kUnitCap / p) throw ConfigError("p^precision exceeds 2^31");
        m *= p;
    }
}

}  // namespace

long long pow_ll(long long p, long long e) {
    long long r = 1;
    for (long long i = 0; i < e; ++i) {
        if (r > kUnitCap / p) throw PrecisionError("p^e exceeds 2^31");
        r *= p;
    }
    return r;
}

long long inverse_mod(long long u, long long m) {
    long long r0 = m, r1 = ((u % m) + m) % m;
    long long t0 = 0, t1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        long long t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw EvalError("inverse_mod: arguments not coprime");
    return ((t0 % m) + m) % m;
}

PadicApprox PadicApprox::zero(long long p, int precision) {
    check_parameters(p, precision);
    PadicApprox x(p, precision);
    x.kind_ = Kind::Zero;
    return x;
}

PadicApprox PadicApprox::from_parts(long long p, long long val, long long unit, int precision) {
    check_parameters(p, precision);
    long long m = pow_ll(p, precision);
    unit = ((unit % m) + m) % m;
    if (unit % p == 0) throw EvalError("unit residue divisible by p");
    PadicApprox x(p, precision);
    x.kind_ = Kind::Regular;
    x.val_ = val;
    x.unit_ = unit;
    return x;
}

PadicApprox PadicApprox::from_integer(long long p, const BigInt& n, int precision) {
    check_parameters(p, precision);
    if (n == 0) return zero(p, precision);
    BigInt u = n < 0 ? BigInt(-n) : n;
    bool negative = n < 0;
    long long val = 0;
    while (u % p == 0) {
        u /= p;
        ++val;
    }
    BigInt m = pow_ll(p, precision);
    BigInt r = u % m;
    long long unit = r.convert_to<long long>();
    if (negative) unit = (m.convert_to<long long>() - unit);
    return from_parts(p, val, unit, precision);
}

PadicApprox PadicApprox::from_rational(long long p, const Rat& q, int precision) {
    if (q == 0) return zero(p, precision);
    PadicApprox num = from_integer(p, numerator(q), precision);
    BigInt den = denominator(q);
    long long dval = 0;
    while (den % p == 0) {
        den /= p;
        ++dval;
    }
    long long m = pow_ll(p, precision);
    long long dunit = (den % m).convert_to<long long>();
    PadicApprox out(p, precision);
    out.kind_ = Kind::Regular;
    out.val_ = num.val_ - dval;
    out.unit_ = static_cast<long long>((static_cast<__int128>(num.unit_) * inverse_mod(dunit, m)) % m);
    return out;
}

ExtInt PadicApprox::valuation() const {
    switch (kind_) {
        case Kind::Zero: return ExtInt::pos_inf();
        case Kind::Regular: return ExtInt(val_);
        case Kind::Fuzzy:
            throw PrecisionError("valuation of a value indistinguishable from 0 at stored precision");
    }
    return ExtInt(0);
}

ExtInt PadicApprox::valuation_lower_bound() const {
    switch (kind_) {
        case Kind::Zero: return ExtInt::pos_inf();
        case Kind::Regular: return ExtInt(val_);
        case Kind::Fuzzy: return ExtInt(zero_bound_);
    }
    return ExtInt(0);
}

long long PadicApprox::unit_mod(int k) const {
    if (kind_ != Kind::Regular) throw PrecisionError("no unit residue available");
    if (k < 1 || k > prec_) throw PrecisionError("requested unit digits exceed stored precision");
    return unit_ % pow_ll(p_, k);
}

long long PadicApprox::unit() const { return unit_mod(prec_); }

PadicApprox PadicApprox::operator+(const PadicApprox& o) const {
    if (p_ != o.p_) throw EvalError("mixed primes in p-adic arithmetic");
    if (kind_ == Kind::Zero) return o;
    if (o.kind_ == Kind::Zero) return *this;

    // Known congruence level of the sum.
    auto known_level = [](const PadicApprox& x) -> long long {
        return x.kind_ == Kind::Fuzzy ? x.zero_bound_ : x.val_ + x.prec_;
    };
    long long level = std::min(known_level(*this), known_level(o));

    if (kind_ == Kind::Fuzzy || o.kind_ == Kind::Fuzzy) {
        const PadicApprox* reg = kind_ == Kind::Regular ? this : (o.kind_ == Kind::Regular ? &o : nullptr);
        if (reg == nullptr || reg->val_ >= level) {
            PadicApprox out(p_, std::max(prec_, o.prec_));
            out.kind_ = Kind::Fuzzy;
            out.zero_bound_ = std::min(level, reg ? reg->val_ : level);
            return out;
        }
        int digits = static_cast<int>(level - reg->val_);
        return from_parts(p_, reg->val_, reg->unit_ % pow_ll(p_, digits), digits);
    }

    if (val_ != o.val_) {
        const PadicApprox& lo = val_ < o.val_ ? *this : o;
        const PadicApprox& hi = val_ < o.val_ ? o : *this;
        int digits = static_cast<int>(level - lo.val_);
        long long m = pow_ll(p_, digits);
        long long shifted = static_cast<long long>(
            (static_cast<__int128>(hi.unit_ % m) * (pow_ll(p_, hi.val_ - lo.val_) % m)) % m);
        long long u = (lo.unit_ % m + shifted) % m;
        return from_parts(p_, lo.val_, u, digits);
    }

    int digits = static_cast<int>(level - val_);
    long long m = pow_ll(p_, digits);
    long long s = (unit_ % m + o.unit_ % m) % m;
    if (s == 0) {
        PadicApprox out(p_, std::max(prec_, o.prec_));
        out.kind_ = Kind::Fuzzy;
        out.zero_bound_ = level;
        return out;
    }
    long long strip = 0;
    while (s % p_ == 0) {
        s /= p_;
        ++strip;
    }
    return from_parts(p_, val_ + strip, s, digits - static_cast<int>(strip));
}

PadicApprox PadicApprox::operator-() const {
    if (kind_ != Kind::Regular) return *this;
    long long m = pow_ll(p_, prec_);
    return from_parts(p_, val_, m - unit_, prec_);
}

PadicApprox PadicApprox::operator-(const PadicApprox& o) const {
    if (equal_at_precision(o)) return zero(p_, std::max(prec_, o.prec_));
    return *this + (-o);
}

PadicApprox PadicApprox::operator*(const PadicApprox& o) const {
    if (p_ != o.p_) throw EvalError("mixed primes in p-adic arithmetic");
    if (kind_ == Kind::Zero || o.kind_ == Kind::Zero) return zero(p_, std::max(prec_, o.prec_));
    if (kind_ == Kind::Fuzzy || o.kind_ == Kind::Fuzzy) {
        auto lower = [](const PadicApprox& x) {
            return x.kind_ == Kind::Fuzzy ? x.zero_bound_ : x.val_;
        };
        PadicApprox out(p_, std::max(prec_, o.prec_));
        out.kind_ = Kind::Fuzzy;
        out.zero_bound_ = lower(*this) + lower(o);
        return out;
    }
    int digits = std::min(prec_, o.prec_);
    long long m = pow_ll(p_, digits);
    long long u = static_cast<long long>((static_cast<__int128>(unit_ % m) * (o.unit_ % m)) % m);
    return from_parts(p_, val_ + o.val_, u, digits);
}

PadicApprox PadicApprox::scaled(const Rat& q) const {
    if (q == 0 || kind_ == Kind::Zero) return zero(p_, prec_);
    return *this * from_rational(p_, q, prec_);
}

bool PadicApprox::equal_at_precision(const PadicApprox& o) const {
    if (p_ != o.p_) return false;
    if (kind_ == Kind::Regular && o.kind_ == Kind::Regular) {
        if (val_ != o.val_) return false;
        int digits = std::min(prec_, o.prec_);
        long long m = pow_ll(p_, digits);
        return unit_ % m == o.unit_ % m;
    }
    // Zero/Fuzzy against Regular: distinguishable iff the regular value is
    // nonzero below the known-zero bound.
    if (kind_ == Kind::Regular || o.kind_ == Kind::Regular) {
        const PadicApprox& reg = kind_ == Kind::Regular ? *this : o;
        const PadicApprox& nz = kind_ == Kind::Regular ? o : *this;
        long long bound = nz.kind_ == Kind::Zero ? reg.val_ + 1 : nz.zero_bound_;
        return reg.val_ >= bound;
    }
    return true;  // both indistinguishable from 0
}

std::string PadicApprox::to_string() const {
    switch (kind_) {
        case Kind::Zero: return "0";
        case Kind::Fuzzy: return "O(" + std::to_string(p_) + "^" + std::to_string(zero_bound_) + ")";
        case Kind::Regular: break;
    }
    return std::to_string(p_) + "^" + std::to_string(val_) + " * " + std::to_string(unit_);
}

PadicApprox PadicApprox::parse(std::string_view text, long long p, int precision) {
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto read_ll = [&]() -> long long {
        std::size_t start = i;
        if (i < text.size() && text[i] == '-') ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw ParseError("expected integer", i);
        return std::stoll(std::string(text.substr(start, i - start)));
    };
    skip_ws();
    long long lead = read_ll();
    skip_ws();
    if (i >= text.size()) return from_integer(p, BigInt(lead), precision);
    if (text[i] != '^') throw ParseError("expected '^'", i);
    if (lead != p) throw ParseError("base does not match configured prime", 0);
    ++i;
    long long val = read_ll();
    skip_ws();
    if (i >= text.size() || text[i] != '*') throw ParseError("expected '*'", i);
    ++i;
    skip_ws();
    long long unit = read_ll();
    skip_ws();
    if (i != text.size()) throw ParseError("trailing characters", i);
    PadicApprox u = from_integer(p, BigInt(unit), precision);
    if (u.is_zero() || u.valuation() != ExtInt(0))
        throw ParseError("unit part must be a p-unit", 0);
    return from_parts(p, val, u.unit(), precision);
}

}  // namespace dpmin
