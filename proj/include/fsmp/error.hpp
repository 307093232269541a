#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fsmp {

enum class ErrorKind {
    InvalidVertex,
    InvalidEdge,
    InvalidFault,
    EmptyGraph,
    InvalidSpec,
    IoError,
    ParseError,
    TooLarge,
    BudgetExceeded,
    HypothesisViolated,
    NoPreclusionSet,
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidVertex: return "InvalidVertex";
    case ErrorKind::InvalidEdge: return "InvalidEdge";
    case ErrorKind::InvalidFault: return "InvalidFault";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NoPreclusionSet: return "NoPreclusionSet";
    }
    return "Unknown";
}

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace fsmp
