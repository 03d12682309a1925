#ifndef ONMF_ERRORS_HPP_
#define ONMF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace onmf {

// Shape or dimension precondition violated (messages name both shapes).
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// NaN/Inf produced where the contract requires finite values.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; message carries the 1-based line number.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace onmf

#endif  // ONMF_ERRORS_HPP_
