#include "geocausal/error.hpp"

namespace geocausal {

std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::OrderViolation: return "OrderViolation";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::UnknownUnit: return "UnknownUnit";
    case Errc::InvalidValue: return "InvalidValue";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::UnknownEntity: return "UnknownEntity";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::UnknownTriple: return "UnknownTriple";
    case Errc::DuplicateRuleId: return "DuplicateRuleId";
    case Errc::ValidationFailure: return "ValidationFailure";
    case Errc::ConfigError: return "ConfigError";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::IngestError: return "IngestError";
    case Errc::PatternParseError: return "PatternParseError";
    case Errc::UnknownRelation: return "UnknownRelation";
    case Errc::NotAnEvent: return "NotAnEvent";
    case Errc::IoError: return "IoError";
    case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

namespace {

std::string with_location(const std::string& message, int line, int column) {
    if (line <= 0) return message;
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
}

} // namespace

ParseError::ParseError(const std::string& message, int line, int column, Errc code)
    : Error(code, with_location(message, line, column)), line_(line), column_(column) {}

} // namespace geocausal
