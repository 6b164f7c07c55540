// errors.hpp: exception types shared by the numerical modules

#pragma once

#include <stdexcept>
#include <string>

namespace kerrchain {

// An integration or solve produced a result that violates a physical
// invariant (norm drift, positivity loss, degenerate steady state).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kerrchain
