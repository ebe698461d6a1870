#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mckay {

/// Malformed input: bad JSON, unknown catalog id, violated precondition.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An enumeration or closure would exceed its configured cap.
class budget_error : public std::runtime_error {
public:
    budget_error(const std::string& what, std::uint64_t required)
        : std::runtime_error(what), required_(required) {}

    /// Budget that would have been needed, or 0 when unknown.
    std::uint64_t required() const noexcept { return required_; }

private:
    std::uint64_t required_;
};

class division_by_zero : public std::domain_error {
public:
    division_by_zero() : std::domain_error("division by zero") {}
};

/// Raised when an internal consistency check fails.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace mckay
