#ifndef DPMIN_ELEMENT_HPP
#define DPMIN_ELEMENT_HPP

#include <string>
#include <variant>
#include <vector>

#include "dpmin/hahn_series.hpp"
#include "dpmin/padic.hpp"
#include "dpmin/points.hpp"
#include "dpmin/rational.hpp"

namespace dpmin {

// A structure element.  Which alternative is legal depends on the structure;
// handing the wrong alternative to an evaluator is an EvalError, never UB.
using Element = std::variant<Rat, LexPoint, PairPoint, HahnSeries, PadicApprox>;

bool element_equal(const Element& a, const Element& b);

// Canonical total order used only for deterministic tie-breaking (search
// order, serialization).  It is not any structure's semantic order.
bool element_canonical_less(const Element& a, const Element& b);

std::string element_to_string(const Element& e);

// Accessors that throw EvalError with a readable message on wrong alternative.
const Rat& as_rat(const Element& e);
const LexPoint& as_lex(const Element& e);
const PairPoint& as_pair(const Element& e);
const HahnSeries& as_hahn(const Element& e);
const PadicApprox& as_padic(const Element& e);

using ElementTuple = std::vector<Element>;

bool tuple_equal(const ElementTuple& a, const ElementTuple& b);
bool tuple_canonical_less(const ElementTuple& a, const ElementTuple& b);
std::string tuple_to_string(const ElementTuple& t);

}  // namespace dpmin

#endif  // DPMIN_ELEMENT_HPP
