#pragma once

#include <stdexcept>
#include <string>

namespace rebal {

// Error categories double as CLI exit codes, so keep the numbering stable.
enum class ErrorCategory : int {
    config = 2,
    parse = 3,
    validation = 4,
    insufficient_data = 5,
    infeasible = 6,
    solver = 7,
    io = 8,
    reconciliation = 9,
    internal = 10,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

inline const char* category_name(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::insufficient_data: return "insufficient_data";
    case ErrorCategory::infeasible: return "infeasible";
    case ErrorCategory::solver: return "solver";
    case ErrorCategory::io: return "io";
    case ErrorCategory::reconciliation: return "reconciliation";
    case ErrorCategory::internal: return "internal";
    }
    return "unknown";
}

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
    throw Error(category, message);
}

}  // namespace rebal
