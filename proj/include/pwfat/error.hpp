#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pwfat {

// Raised for caller-supplied input that violates a precondition: empty
// passwords, malformed aux constraints, unknown ids, bad config fields.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace pwfat
