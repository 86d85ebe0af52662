#ifndef DPMIN_ERRORS_HPP
#define DPMIN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpmin {

// Parse failure with a byte offset into the input text.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg) + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Semantic evaluation failure: uninterpreted symbol, element type mismatch,
// or a quantifier over a body outside the structure's exact constraint class.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A p-adic result is indistinguishable from 0 at the stored precision, or a
// decision requires more unit digits than are stored.  Never silently
// approximated; callers may retry at higher precision.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configured search/enumeration budget was exhausted before completion.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Experiment configuration is malformed or violates the schema.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dpmin

#endif  // DPMIN_ERRORS_HPP
