#pragma once

#include <stdexcept>
#include <string>

namespace mrw {

// Base of everything the library throws. The CLI maps each subclass to a
// stable exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed model files, invalid models, bad arguments.
class InputError : public Error {
public:
    using Error::Error;
};

// Operation requested on a model that does not support it, e.g. an exact
// computation on a model with Gaussian kernels.
class UnsupportedModelError : public Error {
public:
    using Error::Error;
};

// A configured size cap was exceeded. cap() names the offending cap.
class ResourceError : public Error {
public:
    ResourceError(std::string cap, const std::string& what)
        : Error(what), cap_(std::move(cap)) {}
    const std::string& cap() const noexcept { return cap_; }

private:
    std::string cap_;
};

class SolverError : public Error {
public:
    using Error::Error;
};

// Too many Monte Carlo paths hit their step cap, or a consistency verdict
// failed.
class BudgetError : public Error {
public:
    using Error::Error;
};

}  // namespace mrw
