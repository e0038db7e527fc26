#include "csv.hpp"

#include "geocausal/error.hpp"

namespace geocausal::csv {

std::vector<Record> parse(std::string_view text) {
    std::vector<Record> records;
    // Skip a UTF-8 byte order mark.
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::size_t i = 0;
    int line = 1;
    while (i < text.size()) {
        Record rec{line, {}};
        std::string field;
        bool record_done = false;
        bool blank = true;
        while (!record_done) {
            if (i < text.size() && text[i] == '"') {
                blank = false;
                int quote_line = line;
                ++i;
                while (true) {
                    if (i >= text.size()) throw ParseError("unterminated quoted field", quote_line);
                    char c = text[i++];
                    if (c == '"') {
                        if (i < text.size() && text[i] == '"') {
                            field += '"';
                            ++i;
                        } else {
                            break;
                        }
                    } else {
                        if (c == '\n') ++line;
                        field += c;
                    }
                }
                if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                    throw ParseError("unexpected character after closing quote", line);
            } else {
                while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    if (text[i] == '"') throw ParseError("stray quote in unquoted field", line);
                    field += text[i++];
                }
                if (!field.empty()) blank = false;
            }
            rec.fields.push_back(std::move(field));
            field.clear();
            if (i >= text.size()) {
                record_done = true;
            } else if (text[i] == ',') {
                blank = false;
                ++i;
            } else {
                if (text[i] == '\r') ++i;
                if (i < text.size() && text[i] == '\n') ++i;
                ++line;
                record_done = true;
            }
        }
        if (!blank) records.push_back(std::move(rec));
    }
    return records;
}

} // namespace geocausal::csv
