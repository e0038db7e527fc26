#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geocausal::csv {

struct Record {
    int line; // physical line the record starts on, 1-based
    std::vector<std::string> fields;
};

// RFC-4180: comma separated, double-quoted fields may contain commas,
// newlines and "" escapes. CRLF and LF both end a record. Blank lines are
// skipped. Throws ParseError on an unterminated quote or stray quote.
std::vector<Record> parse(std::string_view text);

} // namespace geocausal::csv
