#pragma once

#include <stdexcept>
#include <string>

namespace spinmeas {

// Input violates a documented precondition (non-unit axis, unnormalized state,
// non-Hermitian observable, incomplete measurement model, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical data that cannot come from any consistent model, e.g. a squared
// rms error that is negative beyond round-off.
class InconsistentData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spinmeas
