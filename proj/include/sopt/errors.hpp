// Exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace sopt {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SystemMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoDeterministicEffect : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingRule : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooManyFactors : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotDeterministic : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidDistribution : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotMaximal : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidEffect : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sopt
