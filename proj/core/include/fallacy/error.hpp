#pragma once

#include <stdexcept>
#include <string>

namespace fallacy {

/// Input that could not be parsed (bad JSON, bad template syntax, ...).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parsed input that breaks a data invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fallacy
