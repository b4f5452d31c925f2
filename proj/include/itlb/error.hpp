#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace itlb {

enum class ErrorCode {
    ParseError,
    InvariantViolation,
    Overlap,
    KingsAdjacent,
    IllegalCheck,
    BoardMismatch,
    Unsatisfiable,
    IllegalMove,
    TooManyPieces,
    IllegalPosition,
    TableMismatch,
    IoError,
    ChecksumMismatch,
    VersionMismatch,
    ResourceLimit,
    ChainInvariantViolation,
    BudgetExceeded,
    IndexOutOfRange,
    RowTooShort,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code carries the category and
// `offset` points at the first offending character for parse errors.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::size_t> offset = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> offset() const noexcept { return offset_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> offset_;
};

}  // namespace itlb
