// errors.hpp — Error taxonomy shared by all modules

#pragma once

#include <stdexcept>
#include <string>

namespace ttedopa {

// Invalid input: bad parameters, malformed configs, contract violations.
// Maps to CLI exit status 2.
using validation_error = std::invalid_argument;

// A numerical procedure failed to converge or lost stability.
// Maps to CLI exit status 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested a state or observable outside the supported set.
class unsupported_error : public std::runtime_error {
public:
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ttedopa
