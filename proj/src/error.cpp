#include "itlb/error.hpp"

namespace itlb {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::Overlap: return "Overlap";
    case ErrorCode::KingsAdjacent: return "KingsAdjacent";
    case ErrorCode::IllegalCheck: return "IllegalCheck";
    case ErrorCode::BoardMismatch: return "BoardMismatch";
    case ErrorCode::Unsatisfiable: return "Unsatisfiable";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::TooManyPieces: return "TooManyPieces";
    case ErrorCode::IllegalPosition: return "IllegalPosition";
    case ErrorCode::TableMismatch: return "TableMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::ChainInvariantViolation: return "ChainInvariantViolation";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::RowTooShort: return "RowTooShort";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> offset)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), offset_(offset) {}

}  // namespace itlb
