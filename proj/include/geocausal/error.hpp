#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geocausal {

// Every failure in the library carries one of these codes. The numeric
// values are mirrored by gc_status in geocausal.h and must stay in sync.
enum class Errc {
    ParseError = 1,
    OrderViolation,
    DimensionMismatch,
    TypeMismatch,
    UnknownUnit,
    InvalidValue,
    DuplicateId,
    UnknownEntity,
    SchemaViolation,
    UnknownTriple,
    DuplicateRuleId,
    ValidationFailure,
    ConfigError,
    MissingColumn,
    IngestError,
    PatternParseError,
    UnknownRelation,
    NotAnEvent,
    IoError,
    Internal,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Parse failures also remember where they happened (1-based; 0 = unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column = 0,
               Errc code = Errc::ParseError);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace geocausal
