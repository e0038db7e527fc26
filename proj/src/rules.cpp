#include "geocausal/rules.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "geocausal/error.hpp"

namespace geocausal {

// Printing ---------------------------------------------------------------------

std::string Condition::to_string() const {
    std::string out = attribute + " " + std::string(comparator_symbol(comparator));
    if (threshold) out += " " + value_to_string(*threshold);
    return out;
}

std::string print_rules(const RuleSet& rules) {
    std::ostringstream out;
    for (const auto& pc : rules.preconditions()) {
        out << "precondition " << pc.id << " effects " << pc.event_kind << " {\n";
        for (const auto& c : pc.conditions) out << "  " << c.to_string() << ";\n";
        out << "}\n";
    }
    for (const auto& r : rules.cause_rules()) {
        out << "rule " << r.id << ": " << r.cause_kind << " causes " << r.effect_kind << " when ";
        switch (r.constraint) {
        case CauseConstraint::CoOccurs: out << "co-occurs"; break;
        case CauseConstraint::Precedes: out << "precedes"; break;
        case CauseConstraint::PrecedesWithin: out << "precedes within " << r.max_gap.to_string(); break;
        }
        out << '\n';
    }
    return out.str();
}

// RuleSet ----------------------------------------------------------------------

namespace {

void check_rule_id(const std::string& id) {
    if (!EntityId::is_valid(id)) fail(Errc::InvalidValue, "invalid rule id '" + id + "'");
}

void check_condition(const Condition& c) {
    if (!is_valid_kind(c.attribute))
        fail(Errc::InvalidValue, "invalid attribute name '" + c.attribute + "'");
    bool presence = c.comparator == Comparator::Present || c.comparator == Comparator::Absent;
    if (presence && c.threshold)
        fail(Errc::InvalidValue, c.attribute + ": present/absent take no threshold");
    if (!presence && !c.threshold)
        fail(Errc::InvalidValue, c.attribute + ": comparator needs a threshold");
    if (is_numeric_comparator(c.comparator) && !std::holds_alternative<Quantity>(*c.threshold))
        fail(Errc::InvalidValue, c.attribute + ": numeric comparator needs a quantity threshold");
}

} // namespace

RuleSet::RuleSet(std::vector<PreconditionSet> preconditions, std::vector<CauseRule> cause_rules)
    : preconditions_(std::move(preconditions)), cause_rules_(std::move(cause_rules)) {
    std::set<std::string> ids;
    auto claim = [&](const std::string& id) {
        check_rule_id(id);
        if (!ids.insert(id).second) fail(Errc::DuplicateRuleId, "duplicate rule id '" + id + "'");
    };
    for (const auto& pc : preconditions_) {
        claim(pc.id);
        if (!is_valid_kind(pc.event_kind))
            fail(Errc::InvalidValue, pc.id + ": invalid event kind '" + pc.event_kind + "'");
        if (pc.conditions.empty()) fail(Errc::InvalidValue, pc.id + ": no conditions");
        std::set<std::string> attrs;
        for (const auto& c : pc.conditions) {
            check_condition(c);
            if (!attrs.insert(c.attribute).second)
                fail(Errc::InvalidValue, pc.id + ": attribute '" + c.attribute + "' repeated");
        }
    }
    for (const auto& r : cause_rules_) {
        claim(r.id);
        if (!is_valid_kind(r.cause_kind) || !is_valid_kind(r.effect_kind))
            fail(Errc::InvalidValue, r.id + ": invalid event kind");
        if (r.cause_kind == r.effect_kind && r.constraint == CauseConstraint::CoOccurs)
            fail(Errc::InvalidValue, r.id + ": an event kind cannot cause itself on co-occurrence");
        if (r.constraint == CauseConstraint::PrecedesWithin && r.max_gap.seconds < 0)
            fail(Errc::InvalidValue, r.id + ": negative gap");
    }
    std::sort(preconditions_.begin(), preconditions_.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(cause_rules_.begin(), cause_rules_.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
}

const PreconditionSet* RuleSet::find_precondition(std::string_view id) const {
    for (const auto& pc : preconditions_)
        if (pc.id == id) return &pc;
    return nullptr;
}

// Lexer ------------------------------------------------------------------------

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
    Tok type;
    std::string text;
    int line;
    int column;
};

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '/' || c == '.';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space();
        Token t{Tok::End, "", line_, column()};
        if (pos_ >= text_.size()) return t;
        char c = text_[pos_];

        if (is_ident_start(c)) {
            std::size_t begin = pos_;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (is_ident_char(d)) {
                    ++pos_;
                } else if (d == ':' && pos_ + 1 < text_.size() && is_ident_char(text_[pos_ + 1])) {
                    ++pos_;
                } else {
                    break;
                }
            }
            t.type = Tok::Ident;
            t.text = std::string(text_.substr(begin, pos_ - begin));
            return t;
        }
        if (is_digit(c) || ((c == '-' || c == '+') && pos_ + 1 < text_.size() &&
                            is_digit(text_[pos_ + 1]))) {
            std::size_t begin = pos_++;
            while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
            if (pos_ + 1 < text_.size() && text_[pos_] == '.' && is_digit(text_[pos_ + 1])) {
                ++pos_;
                while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
            }
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                std::size_t save = pos_ + 1;
                if (save < text_.size() && (text_[save] == '+' || text_[save] == '-')) ++save;
                if (save < text_.size() && is_digit(text_[save])) {
                    pos_ = save;
                    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
                }
            }
            t.type = Tok::Number;
            t.text = std::string(text_.substr(begin, pos_ - begin));
            return t;
        }

        t.type = Tok::Symbol;
        // Unicode comparators (UTF-8).
        for (auto [utf8, ascii] : {std::pair{"≤", "<="}, std::pair{"≥", ">="},
                                   std::pair{"≠", "!="}}) {
            std::string_view u(utf8);
            if (text_.substr(pos_, u.size()) == u) {
                pos_ += u.size();
                t.text = ascii;
                return t;
            }
        }
        for (std::string_view two : {"<=", ">=", "!="}) {
            if (text_.substr(pos_, 2) == two) {
                pos_ += 2;
                t.text = std::string(two);
                return t;
            }
        }
        if (std::string_view("{};:<>=").find(c) != std::string_view::npos) {
            ++pos_;
            t.text = std::string(1, c);
            return t;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", t.line, t.column);
    }

private:
    int column() const { return static_cast<int>(pos_ - line_start_) + 1; }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++pos_;
                ++line_;
                line_start_ = pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
    int line_ = 1;
};

// Parser -----------------------------------------------------------------------

std::string describe(const Token& t) {
    if (t.type == Tok::End) return "end of input";
    return "'" + t.text + "'";
}

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { advance(); }

    RuleSet parse() {
        std::vector<PreconditionSet> pcs;
        std::vector<CauseRule> rules;
        std::set<std::string> ids;
        auto claim = [&](const std::string& id, const Token& at) {
            if (!ids.insert(id).second)
                throw ParseError("duplicate rule id '" + id + "'", at.line, at.column,
                                 Errc::DuplicateRuleId);
        };
        while (cur_.type != Tok::End) {
            if (is_keyword("precondition")) {
                Token at = cur_;
                pcs.push_back(parse_precondition());
                claim(pcs.back().id, at);
            } else if (is_keyword("rule")) {
                Token at = cur_;
                rules.push_back(parse_rule());
                claim(rules.back().id, at);
            } else if (is_symbol(";")) {
                advance();
            } else {
                error("'precondition' or 'rule'");
            }
        }
        return RuleSet(std::move(pcs), std::move(rules));
    }

private:
    void advance() { cur_ = lexer_.next(); }

    bool is_keyword(std::string_view kw) const { return cur_.type == Tok::Ident && cur_.text == kw; }
    bool is_symbol(std::string_view s) const { return cur_.type == Tok::Symbol && cur_.text == s; }

    [[noreturn]] void error(const std::string& expected) const {
        throw ParseError("expected " + expected + ", got " + describe(cur_), cur_.line, cur_.column);
    }

    void expect_keyword(std::string_view kw) {
        if (!is_keyword(kw)) error("'" + std::string(kw) + "'");
        advance();
    }

    void expect_symbol(std::string_view s) {
        if (!is_symbol(s)) error("'" + std::string(s) + "'");
        advance();
    }

    std::string expect_identifier(const std::string& what) {
        if (cur_.type != Tok::Ident) error(what);
        std::string text = cur_.text;
        advance();
        return text;
    }

    std::string expect_id() {
        Token at = cur_;
        std::string id = expect_identifier("identifier");
        if (!EntityId::is_valid(id)) throw ParseError("invalid identifier", at.line, at.column);
        return id;
    }

    std::string expect_kind(const std::string& what) {
        Token at = cur_;
        std::string kind = expect_identifier(what);
        if (!is_valid_kind(kind)) throw ParseError("invalid " + what, at.line, at.column);
        return kind;
    }

    // NUMBER UNIT
    Quantity parse_quantity() {
        double magnitude = 0;
        Token num = cur_;
        if (num.type != Tok::Number || !parse_number(num.text, magnitude)) error("number");
        advance();
        Token unit_tok = cur_;
        // The dimensionless unit's symbol is the numeral "1".
        if (unit_tok.type != Tok::Ident && !(unit_tok.type == Tok::Number && unit_tok.text == "1"))
            error("unit symbol");
        const Unit* u = find_unit(unit_tok.text);
        if (!u)
            throw ParseError("unknown unit '" + unit_tok.text + "'", unit_tok.line,
                             unit_tok.column, Errc::UnknownUnit);
        advance();
        return Quantity(magnitude, *u);
    }

    Condition parse_condition() {
        Condition c;
        c.attribute = expect_kind("attribute name");
        if (is_keyword("present") || is_keyword("absent")) {
            c.comparator = cur_.text == "present" ? Comparator::Present : Comparator::Absent;
            advance();
            return c;
        }
        if (cur_.type != Tok::Symbol) error("comparator");
        const std::string& s = cur_.text;
        if (s == "<") c.comparator = Comparator::Less;
        else if (s == "<=") c.comparator = Comparator::LessEqual;
        else if (s == ">") c.comparator = Comparator::Greater;
        else if (s == ">=") c.comparator = Comparator::GreaterEqual;
        else if (s == "=") c.comparator = Comparator::Equal;
        else if (s == "!=") c.comparator = Comparator::NotEqual;
        else error("comparator");
        advance();

        if (cur_.type == Tok::Number) {
            c.threshold = parse_quantity();
        } else if (cur_.type == Tok::Ident && !is_numeric_comparator(c.comparator)) {
            c.threshold = Categorical(cur_.text);
            advance();
        } else {
            error(is_numeric_comparator(c.comparator) ? "number" : "number or categorical value");
        }
        return c;
    }

    PreconditionSet parse_precondition() {
        expect_keyword("precondition");
        PreconditionSet pc;
        pc.id = expect_id();
        expect_keyword("effects");
        pc.event_kind = expect_kind("event kind");
        expect_symbol("{");
        std::set<std::string> attrs;
        while (!is_symbol("}")) {
            Token at = cur_;
            pc.conditions.push_back(parse_condition());
            if (!attrs.insert(pc.conditions.back().attribute).second)
                throw ParseError("attribute '" + pc.conditions.back().attribute +
                                     "' repeated in precondition " + pc.id,
                                 at.line, at.column);
            if (is_symbol(";")) advance();
            else if (!is_symbol("}")) error("';' or '}'");
        }
        if (pc.conditions.empty()) error("at least one condition");
        advance();
        return pc;
    }

    CauseRule parse_rule() {
        Token start = cur_;
        expect_keyword("rule");
        CauseRule r;
        r.id = expect_id();
        expect_symbol(":");
        r.cause_kind = expect_kind("cause event kind");
        expect_keyword("causes");
        r.effect_kind = expect_kind("effect event kind");
        expect_keyword("when");
        if (is_keyword("co-occurs")) {
            r.constraint = CauseConstraint::CoOccurs;
            advance();
        } else if (is_keyword("precedes")) {
            r.constraint = CauseConstraint::Precedes;
            advance();
            if (is_keyword("within")) {
                advance();
                Token num = cur_;
                if (num.type != Tok::Number) error("duration");
                advance();
                if (cur_.type != Tok::Ident) error("duration unit (s, min, h, d)");
                Duration gap;
                try {
                    gap = Duration::parse(num.text + cur_.text);
                } catch (const ParseError&) {
                    error("duration unit (s, min, h, d)");
                }
                if (gap.seconds < 0) throw ParseError("negative duration", num.line, num.column);
                advance();
                r.constraint = CauseConstraint::PrecedesWithin;
                r.max_gap = gap;
            }
        } else {
            error("'co-occurs' or 'precedes'");
        }
        if (r.cause_kind == r.effect_kind && r.constraint == CauseConstraint::CoOccurs)
            throw ParseError("rule " + r.id + ": an event kind cannot cause itself on co-occurrence",
                             start.line, start.column);
        return r;
    }

    Lexer lexer_;
    Token cur_{Tok::End, "", 1, 1};
};

} // namespace

RuleSet parse_rules(std::string_view text) { return Parser(text).parse(); }

RuleSet load_rules_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rules(buf.str());
}

// Evaluation -------------------------------------------------------------------

std::string_view truth_name(Truth t) {
    switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Unknown: return "unknown";
    }
    return "?";
}

SatisfactionResult evaluate(const PreconditionSet& pc, const GeoSituation& situation) {
    SatisfactionResult result{Truth::True, {}};
    bool any_false = false, any_unknown = false;
    for (const auto& c : pc.conditions) {
        ConditionResult cr{c, ConditionOutcome::Unknown, std::nullopt, {}};
        const Measurement* m = situation.observations.find(c.attribute);
        if (!m) {
            cr.diagnostic = "no observation of " + c.attribute;
            any_unknown = true;
        } else {
            cr.observed = m->value;
            try {
                bool ok = compare(m->value, c.comparator, c.threshold ? &*c.threshold : nullptr);
                cr.outcome = ok ? ConditionOutcome::True : ConditionOutcome::False;
                any_false |= !ok;
            } catch (const Error& e) {
                cr.outcome = ConditionOutcome::Error;
                cr.diagnostic = std::string(errc_name(e.code())) + ": " + e.what();
                any_false = true;
            }
        }
        result.per_condition.push_back(std::move(cr));
    }
    result.satisfied = any_false ? Truth::False : any_unknown ? Truth::Unknown : Truth::True;
    return result;
}

} // namespace geocausal
