#include "dpmin/element.hpp"

#include "dpmin/errors.hpp"

namespace dpmin {

namespace {

int kind_index(const Element& e) { return static_cast<int>(e.index()); }

bool padic_less(const PadicApprox& a, const PadicApprox& b) {
    if (a.prime() != b.prime()) return a.prime() < b.prime();
    if (a.is_zero() != b.is_zero()) return a.is_zero();
    if (a.is_zero()) return false;
    if (a.is_fuzzy() || b.is_fuzzy()) return a.is_fuzzy() && !b.is_fuzzy();
    if (a.valuation().value() != b.valuation().value())
        return a.valuation().value() < b.valuation().value();
    return a.unit() < b.unit();
}

bool hahn_canonical_less(const HahnSeries& a, const HahnSeries& b) {
    auto ia = a.support().begin(), ea = a.support().end();
    auto ib = b.support().begin(), eb = b.support().end();
    for (; ia != ea && ib != eb; ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second) return ia->second < ib->second;
    }
    return ia == ea && ib != eb;
}

}  // namespace

bool element_equal(const Element& a, const Element& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PadicApprox>)
                return x.equal_at_precision(std::get<PadicApprox>(b));
            else
                return x == std::get<T>(b);
        },
        a);
}

bool element_canonical_less(const Element& a, const Element& b) {
    if (a.index() != b.index()) return kind_index(a) < kind_index(b);
    switch (a.index()) {
        case 0: return std::get<Rat>(a) < std::get<Rat>(b);
        case 1: return std::get<LexPoint>(a) < std::get<LexPoint>(b);
        case 2: {
            const auto& x = std::get<PairPoint>(a);
            const auto& y = std::get<PairPoint>(b);
            if (x.first != y.first) return x.first < y.first;
            return x.second < y.second;
        }
        case 3: return hahn_canonical_less(std::get<HahnSeries>(a), std::get<HahnSeries>(b));
        case 4: return padic_less(std::get<PadicApprox>(a), std::get<PadicApprox>(b));
        default: return false;
    }
}

std::string element_to_string(const Element& e) {
    switch (e.index()) {
        case 0: return rat_to_string(std::get<Rat>(e));
        case 1: {
            const auto& p = std::get<LexPoint>(e);
            return point_to_string(p.first, p.second);
        }
        case 2: {
            const auto& p = std::get<PairPoint>(e);
            return point_to_string(p.first, p.second);
        }
        case 3: return std::get<HahnSeries>(e).to_string();
        case 4: return std::get<PadicApprox>(e).to_string();
        default: return "?";
    }
}

const Rat& as_rat(const Element& e) {
    if (const auto* p = std::get_if<Rat>(&e)) return *p;
    throw EvalError("expected a rational element, got " + element_to_string(e));
}

const LexPoint& as_lex(const Element& e) {
    if (const auto* p = std::get_if<LexPoint>(&e)) return *p;
    throw EvalError("expected a lexicographic pair element, got " + element_to_string(e));
}

const PairPoint& as_pair(const Element& e) {
    if (const auto* p = std::get_if<PairPoint>(&e)) return *p;
    throw EvalError("expected a coordinate-pair element, got " + element_to_string(e));
}

const HahnSeries& as_hahn(const Element& e) {
    if (const auto* p = std::get_if<HahnSeries>(&e)) return *p;
    throw EvalError("expected a series element, got " + element_to_string(e));
}

const PadicApprox& as_padic(const Element& e) {
    if (const auto* p = std::get_if<PadicApprox>(&e)) return *p;
    throw EvalError("expected a p-adic element, got " + element_to_string(e));
}

bool tuple_equal(const ElementTuple& a, const ElementTuple& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!element_equal(a[i], b[i])) return false;
    return true;
}

bool tuple_canonical_less(const ElementTuple& a, const ElementTuple& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (element_canonical_less(a[i], b[i])) return true;
        if (element_canonical_less(b[i], a[i])) return false;
    }
    return a.size() < b.size();
}

std::string tuple_to_string(const ElementTuple& t) {
    std::string out = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += "; ";
        out += element_to_string(t[i]);
    }
    return out + "]";
}

}  // namespace dpmin
