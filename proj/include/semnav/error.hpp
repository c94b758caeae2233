#pragma once
// error.hpp - error kinds shared by every semnav module.

#include <stdexcept>
#include <string>
#include <string_view>

namespace semnav {

enum class ErrorKind {
    InvalidInput,
    OutOfBounds,
    NoPath,
    ExpansionBudgetExceeded,
    GoalUnreachable,
    PlanStale,
    SyntaxError,
    ValidationError,
    ScenarioInvalid,
    IoError,
    InternalError,
};

constexpr std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
    case ErrorKind::NoPath: return "NoPath";
    case ErrorKind::ExpansionBudgetExceeded: return "ExpansionBudgetExceeded";
    case ErrorKind::GoalUnreachable: return "GoalUnreachable";
    case ErrorKind::PlanStale: return "PlanStale";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::ScenarioInvalid: return "ScenarioInvalid";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InternalError: return "InternalError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Validation errors carry the dotted path of the offending field, e.g. "goals[0]".
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& why)
        : Error(ErrorKind::ValidationError, field + ": " + why), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace semnav
