#ifndef PERRON_ERROR_HPP
#define PERRON_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace perron {

enum class ErrorKind {
    // input validation
    ParseError,
    NonSquare,
    NonPositiveEntry,
    NonFinite,
    IndexOutOfRange,
    InvalidArgument,
    // solver failures
    NoConvergence,
    Divergent,
    TailNotGeometric,
    BracketFailure,
    AnchorDisagreement,
    DomainError,
};

inline constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::ParseError:         return "ParseError";
    case ErrorKind::NonSquare:          return "NonSquare";
    case ErrorKind::NonPositiveEntry:   return "NonPositiveEntry";
    case ErrorKind::NonFinite:          return "NonFinite";
    case ErrorKind::IndexOutOfRange:    return "IndexOutOfRange";
    case ErrorKind::InvalidArgument:    return "InvalidArgument";
    case ErrorKind::NoConvergence:      return "NoConvergence";
    case ErrorKind::Divergent:          return "Divergent";
    case ErrorKind::TailNotGeometric:   return "TailNotGeometric";
    case ErrorKind::BracketFailure:     return "BracketFailure";
    case ErrorKind::AnchorDisagreement: return "AnchorDisagreement";
    case ErrorKind::DomainError:        return "DomainError";
    }
    return "Unknown";
}

/// True for errors caused by the input rather than by a solver.
inline constexpr bool is_input_error(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::NonSquare:
    case ErrorKind::NonPositiveEntry:
    case ErrorKind::NonFinite:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::InvalidArgument:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind), detail_(message)
    {}

    /// Error tied to a matrix position; row and col are 1-based.
    Error(ErrorKind kind, const std::string &message, std::size_t row, std::size_t col)
        : Error(kind, message)
    {
        row_ = row;
        col_ = col;
    }

    ErrorKind kind() const noexcept { return kind_; }
    const std::string &detail() const noexcept { return detail_; }

    bool has_position() const noexcept { return row_ != 0; }
    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    ErrorKind kind_;
    std::string detail_;
    std::size_t row_ = 0;
    std::size_t col_ = 0;
};

} // namespace perron

#endif // PERRON_ERROR_HPP
