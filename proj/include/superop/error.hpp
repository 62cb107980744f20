#pragma once

#include <stdexcept>
#include <string>

namespace superop {

// Bad caller input: dimension mismatch, non-Hermitian frequency matrix, etc.
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An internal identity that must hold exactly did not; signals a bug rather than bad input.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Numerical routine could not produce a result (e.g. eigensolver did not converge).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace superop
