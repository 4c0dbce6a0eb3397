#include "sheetlint/formula.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace sheetlint {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

bool sheet_name_needs_quotes(std::string_view name) {
    if (name.empty()) return true;
    if (!is_ident_start(name.front())) return true;
    return !std::all_of(name.begin(), name.end(), [](char c) { return is_ident_char(c); });
}

std::string quote_sheet(std::string_view name) {
    if (!sheet_name_needs_quotes(name)) return std::string(name);
    std::string out = "'";
    for (char c : name) {
        out += c;
        if (c == '\'') out += '\'';
    }
    out += "'";
    return out;
}

std::string render_r1c1_axis(char letter, const CoordinateReference& r) {
    std::string out(1, letter);
    if (r.absolute) {
        out += std::to_string(r.value);
    } else if (r.value != 0) {
        out += "[" + std::to_string(r.value) + "]";
    }
    return out;
}

std::string render_r1c1_cell(const CellReference& r, bool with_sheet = true) {
    std::string out;
    if (with_sheet && r.sheet) out = quote_sheet(*r.sheet) + "!";
    out += render_r1c1_axis('R', r.row);
    out += render_r1c1_axis('C', r.col);
    return out;
}

std::string render_r1c1_area(const AreaReference& r) {
    std::string out;
    if (r.sheet) out = quote_sheet(*r.sheet) + "!";
    CellReference start{std::nullopt, r.col1, r.row1};
    CellReference end{std::nullopt, r.col2, r.row2};
    out += render_r1c1_cell(start, false);
    out += ":";
    out += render_r1c1_cell(end, false);
    return out;
}

std::string render_a1_cell(const CellReference& r, Coordinate origin, bool with_sheet = true) {
    int col = r.col.absolute ? r.col.value : origin.col + r.col.value;
    int row = r.row.absolute ? r.row.value : origin.row + r.row.value;
    if (col < 1 || row < 1) throw RefError("unrepresentable at origin " + to_a1(origin));
    std::string out;
    if (with_sheet && r.sheet) out = quote_sheet(*r.sheet) + "!";
    if (r.col.absolute) out += "$";
    out += column_letters(col);
    if (r.row.absolute) out += "$";
    out += std::to_string(row);
    return out;
}

std::string render_a1_area(const AreaReference& r, Coordinate origin) {
    std::string out;
    if (r.sheet) out = quote_sheet(*r.sheet) + "!";
    out += render_a1_cell(CellReference{std::nullopt, r.col1, r.row1}, origin, false);
    out += ":";
    out += render_a1_cell(CellReference{std::nullopt, r.col2, r.row2}, origin, false);
    return out;
}

enum class RefSyntax { A1, R1C1 };

/// Recursive-descent parser shared by both notations. It validates the
/// expression structure and produces the token list plus extracted
/// references; no evaluation semantics.
class FormulaParser {
public:
    FormulaParser(std::string_view text, RefSyntax syntax, const SheetPos* origin)
        : text_(text), syntax_(syntax), origin_(origin) {}

    Formula run() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty formula", pos_);
        parse_expression();
        skip_ws();
        if (pos_ < text_.size())
            fail("unexpected trailing input '" + std::string(text_.substr(pos_)) + "'");
        Formula f;
        f.tokens = std::move(tokens_);
        f.cell_refs = std::move(cell_refs_);
        f.area_refs = std::move(area_refs_);
        std::string rendered;
        for (const Token& t : f.tokens) {
            switch (t.kind) {
            case Token::Kind::CellRef:
                rendered += render_r1c1_cell(f.cell_refs[static_cast<std::size_t>(t.ref_index)]);
                break;
            case Token::Kind::AreaRef:
                rendered += render_r1c1_area(f.area_refs[static_cast<std::size_t>(t.ref_index)]);
                break;
            default:
                rendered += t.text;
                break;
            }
        }
        f.r1c1_text = std::move(rendered);
        return f;
    }

private:
    std::string_view text_;
    RefSyntax syntax_;
    const SheetPos* origin_;
    std::size_t pos_ = 0;
    std::vector<Token> tokens_;
    std::vector<CellReference> cell_refs_;
    std::vector<AreaReference> area_refs_;

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message + " at offset " + std::to_string(pos_), pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char peek2() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'; }

    void emit_op(std::string text) {
        tokens_.push_back({Token::Kind::Operator, std::move(text), -1});
    }

    // expression  := comparison
    // comparison  := concat { (= <> < <= > >=) concat }
    // concat      := additive { & additive }
    // additive    := term { (+ -) term }
    // term        := power { (* /) power }
    // power       := unary { ^ unary }
    // unary       := - unary | primary
    void parse_expression() { parse_comparison(); }

    void parse_comparison() {
        parse_concat();
        while (true) {
            skip_ws();
            char c = peek();
            if (c == '=') {
                pos_++;
                emit_op("=");
            } else if (c == '<') {
                if (peek2() == '>') {
                    pos_ += 2;
                    emit_op("<>");
                } else if (peek2() == '=') {
                    pos_ += 2;
                    emit_op("<=");
                } else {
                    pos_++;
                    emit_op("<");
                }
            } else if (c == '>') {
                if (peek2() == '=') {
                    pos_ += 2;
                    emit_op(">=");
                } else {
                    pos_++;
                    emit_op(">");
                }
            } else {
                return;
            }
            parse_concat();
        }
    }

    void parse_concat() {
        parse_additive();
        while (true) {
            skip_ws();
            if (peek() != '&') return;
            pos_++;
            emit_op("&");
            parse_additive();
        }
    }

    void parse_additive() {
        parse_term();
        while (true) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') return;
            pos_++;
            emit_op(std::string(1, c));
            parse_term();
        }
    }

    void parse_term() {
        parse_power();
        while (true) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/') return;
            pos_++;
            emit_op(std::string(1, c));
            parse_power();
        }
    }

    void parse_power() {
        parse_unary();
        while (true) {
            skip_ws();
            if (peek() != '^') return;
            pos_++;
            emit_op("^");
            parse_unary();
        }
    }

    void parse_unary() {
        skip_ws();
        if (peek() == '-') {
            pos_++;
            emit_op("-");
            parse_unary();
            return;
        }
        parse_primary();
    }

    void parse_primary() {
        skip_ws();
        char c = peek();
        if (c == '\0') fail("unexpected end of formula");

        if (c == '(') {
            pos_++;
            emit_op("(");
            parse_expression();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            pos_++;
            emit_op(")");
            return;
        }
        if (c == '"') {
            parse_string_literal();
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek2())))) {
            parse_number_literal();
            return;
        }
        if (c == '\'') {
            // quoted sheet name, must introduce a reference
            std::string sheet = parse_quoted_sheet();
            skip_ws();
            if (peek() != '!') fail("expected '!' after sheet name");
            pos_++;
            parse_reference(std::move(sheet));
            return;
        }
        if (is_ident_start(c) || c == '$') {
            parse_word();
            return;
        }
        fail(std::string("unexpected token '") + c + "'");
    }

    void parse_string_literal() {
        std::size_t start = pos_;
        pos_++; // opening quote
        std::string canonical = "\"";
        while (true) {
            if (pos_ >= text_.size()) {
                pos_ = start;
                fail("unterminated string literal");
            }
            char c = text_[pos_++];
            if (c == '"') {
                if (peek() == '"') { // escaped quote
                    canonical += "\"\"";
                    pos_++;
                    continue;
                }
                canonical += '"';
                break;
            }
            canonical += c;
        }
        tokens_.push_back({Token::Kind::Literal, std::move(canonical), -1});
    }

    void parse_number_literal() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) pos_++;
        if (peek() == '.') {
            pos_++;
            while (std::isdigit(static_cast<unsigned char>(peek()))) pos_++;
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t mark = pos_;
            pos_++;
            if (peek() == '+' || peek() == '-') pos_++;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                while (std::isdigit(static_cast<unsigned char>(peek()))) pos_++;
            } else {
                pos_ = mark; // not an exponent after all
            }
        }
        tokens_.push_back({Token::Kind::Literal,
                           std::string(text_.substr(start, pos_ - start)), -1});
    }

    std::string parse_quoted_sheet() {
        pos_++; // opening quote
        std::string name;
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated sheet name");
            char c = text_[pos_++];
            if (c == '\'') {
                if (peek() == '\'') {
                    name += '\'';
                    pos_++;
                    continue;
                }
                return name;
            }
            name += c;
        }
    }

    // An identifier-like word: function call, sheet prefix, boolean literal,
    // or a bare reference.
    void parse_word() {
        std::size_t start = pos_;
        if (peek() == '$') {
            // can only start a reference
            parse_reference(std::nullopt);
            return;
        }
        while (pos_ < text_.size() && (is_ident_char(text_[pos_]) || text_[pos_] == '$')) pos_++;
        std::string word(text_.substr(start, pos_ - start));
        std::size_t after_word = pos_;
        skip_ws();
        if (peek() == '(') {
            std::string upper = word;
            std::transform(upper.begin(), upper.end(), upper.begin(),
                           [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
            if (upper.find('$') != std::string::npos) {
                pos_ = start;
                fail("malformed function name '" + word + "'");
            }
            tokens_.push_back({Token::Kind::Function, upper, -1});
            pos_++;
            emit_op("(");
            parse_arguments();
            return;
        }
        if (peek() == '!') {
            pos_++;
            parse_reference(word);
            return;
        }
        pos_ = after_word;
        // bare word: boolean literal or a reference in the active syntax
        std::string upper = word;
        std::transform(upper.begin(), upper.end(), upper.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
        if (upper == "TRUE" || upper == "FALSE") {
            tokens_.push_back({Token::Kind::Literal, upper, -1});
            return;
        }
        pos_ = start;
        parse_reference(std::nullopt);
    }

    void parse_arguments() {
        skip_ws();
        if (peek() == ')') { // zero-argument call
            pos_++;
            emit_op(")");
            return;
        }
        while (true) {
            parse_expression();
            skip_ws();
            if (peek() == ',') {
                pos_++;
                emit_op(",");
                continue;
            }
            if (peek() == ')') {
                pos_++;
                emit_op(")");
                return;
            }
            fail("expected ',' or ')' in argument list");
        }
    }

    struct RawEndpoint {
        CoordinateReference col;
        CoordinateReference row;
    };

    void parse_reference(std::optional<std::string> sheet) {
        std::size_t ref_start = pos_;
        RawEndpoint first = parse_endpoint();
        skip_ws();
        if (peek() == ':') {
            pos_++;
            skip_ws();
            RawEndpoint second = parse_endpoint();
            AreaReference ar;
            ar.sheet = normalize_sheet(std::move(sheet));
            ar.col1 = first.col;
            ar.row1 = first.row;
            ar.col2 = second.col;
            ar.row2 = second.row;
            normalize_area(ar);
            tokens_.push_back({Token::Kind::AreaRef, "",
                               static_cast<int>(area_refs_.size())});
            area_refs_.push_back(std::move(ar));
            return;
        }
        (void)ref_start;
        CellReference cr;
        cr.sheet = normalize_sheet(std::move(sheet));
        cr.col = first.col;
        cr.row = first.row;
        tokens_.push_back({Token::Kind::CellRef, "",
                           static_cast<int>(cell_refs_.size())});
        cell_refs_.push_back(std::move(cr));
    }

    std::optional<std::string> normalize_sheet(std::optional<std::string> sheet) const {
        if (!sheet) return std::nullopt;
        if (origin_ && *sheet == origin_->sheet) return std::nullopt; // same-sheet
        return sheet;
    }

    RawEndpoint parse_endpoint() {
        return syntax_ == RefSyntax::A1 ? parse_endpoint_a1() : parse_endpoint_r1c1();
    }

    RawEndpoint parse_endpoint_a1() {
        std::size_t start = pos_;
        bool col_abs = false, row_abs = false;
        if (peek() == '$') {
            col_abs = true;
            pos_++;
        }
        std::size_t letters_start = pos_;
        while (std::isalpha(static_cast<unsigned char>(peek()))) pos_++;
        if (pos_ == letters_start) {
            pos_ = start;
            fail("malformed cell reference");
        }
        std::string letters(text_.substr(letters_start, pos_ - letters_start));
        if (peek() == '$') {
            row_abs = true;
            pos_++;
        }
        std::size_t digits_start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) pos_++;
        if (pos_ == digits_start) {
            pos_ = start;
            fail("malformed reference '" + letters + "'");
        }
        if (is_ident_char(peek()) || peek() == '$') {
            fail("malformed reference '" +
                 std::string(text_.substr(start, pos_ + 1 - start)) + "'");
        }
        int col;
        int row = 0;
        try {
            col = column_from_letters(letters);
        } catch (const Error&) {
            pos_ = start;
            fail("malformed reference '" + letters + "'");
        }
        for (std::size_t i = digits_start; i < pos_; ++i) {
            row = row * 10 + (text_[i] - '0');
            if (row > 100'000'000) fail("row index out of range");
        }
        if (row < 1) fail("row index out of range");

        RawEndpoint out;
        if (!origin_) fail("A1 reference without origin");
        out.col = col_abs ? CoordinateReference{true, col}
                          : CoordinateReference{false, col - origin_->coord.col};
        out.row = row_abs ? CoordinateReference{true, row}
                          : CoordinateReference{false, row - origin_->coord.row};
        return out;
    }

    CoordinateReference parse_r1c1_axis(char expected) {
        char c = peek();
        if (std::toupper(static_cast<unsigned char>(c)) != expected)
            fail(std::string("expected '") + expected + "' in reference");
        pos_++;
        if (peek() == '[') {
            pos_++;
            bool negative = false;
            if (peek() == '-') {
                negative = true;
                pos_++;
            } else if (peek() == '+') {
                pos_++;
            }
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                fail("malformed relative offset");
            long long value = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                value = value * 10 + (peek() - '0');
                if (value > 100'000'000) fail("offset out of range");
                pos_++;
            }
            if (peek() != ']') fail("expected ']' in reference");
            pos_++;
            return CoordinateReference{false, static_cast<int>(negative ? -value : value)};
        }
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            long long value = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                value = value * 10 + (peek() - '0');
                if (value > 100'000'000) fail("index out of range");
                pos_++;
            }
            if (value < 1) fail("index out of range");
            return CoordinateReference{true, static_cast<int>(value)};
        }
        return CoordinateReference{false, 0}; // bare R / C
    }

    RawEndpoint parse_endpoint_r1c1() {
        std::size_t start = pos_;
        RawEndpoint out;
        out.row = parse_r1c1_axis('R');
        out.col = parse_r1c1_axis('C');
        if (is_ident_char(peek()) || peek() == '$' || peek() == '[') {
            fail("malformed reference '" +
                 std::string(text_.substr(start, pos_ + 1 - start)) + "'");
        }
        return out;
    }

    // Swap reversed corners per axis where the ordering is known at parse
    // time (matching absoluteness); mixed axes are ordered at dereference.
    static void normalize_area(AreaReference& ar) {
        auto normalize_axis = [](CoordinateReference& a, CoordinateReference& b) {
            if (a.absolute == b.absolute && a.value > b.value) std::swap(a, b);
        };
        normalize_axis(ar.col1, ar.col2);
        normalize_axis(ar.row1, ar.row2);
    }
};

const std::unordered_set<std::string>& numeric_functions() {
    static const std::unordered_set<std::string> table = {
        "SUM", "AVERAGE", "AVERAGEA", "COUNT", "COUNTA", "COUNTIF", "COUNTBLANK",
        "MIN", "MAX", "PRODUCT", "MEDIAN", "MODE", "STDEV", "STDEVP", "VAR", "VARP",
        "SUMIF", "SUMPRODUCT", "SUMSQ", "ROUND", "ROUNDUP", "ROUNDDOWN", "ABS",
        "INT", "TRUNC", "MOD", "POWER", "SQRT", "EXP", "LN", "LOG", "LOG10",
        "FLOOR", "CEILING", "SIGN", "FACT", "PI", "RAND", "LEN", "FIND", "SEARCH",
        "CODE", "ROW", "COLUMN", "ROWS", "COLUMNS", "VALUE", "N", "YEAR", "MONTH",
        "DAY", "HOUR", "MINUTE", "SECOND", "WEEKDAY", "DATEVALUE", "TIMEVALUE",
    };
    return table;
}

const std::unordered_set<std::string>& string_functions() {
    static const std::unordered_set<std::string> table = {
        "CONCATENATE", "LEFT", "RIGHT", "MID", "TRIM", "UPPER", "LOWER", "PROPER",
        "TEXT", "REPT", "SUBSTITUTE", "REPLACE", "CHAR", "T", "FIXED", "DOLLAR",
    };
    return table;
}

const std::unordered_set<std::string>& boolean_functions() {
    static const std::unordered_set<std::string> table = {
        "AND", "OR", "NOT", "XOR", "EXACT", "ISBLANK", "ISNUMBER", "ISTEXT",
        "ISLOGICAL", "ISERROR", "ISERR", "ISNA", "ISREF", "ISNONTEXT", "ISEVEN",
        "ISODD", "TRUE", "FALSE",
    };
    return table;
}

} // namespace

Formula parse_formula_a1(std::string_view text, const SheetPos& origin) {
    if (!text.empty() && text.front() == '=') text.remove_prefix(1);
    FormulaParser parser(text, RefSyntax::A1, &origin);
    return parser.run();
}

Formula parse_formula_r1c1(std::string_view text) {
    if (!text.empty() && text.front() == '=') text.remove_prefix(1);
    FormulaParser parser(text, RefSyntax::R1C1, nullptr);
    return parser.run();
}

std::string render_a1(const Formula& f, Coordinate origin) {
    std::string out;
    for (const Token& t : f.tokens) {
        switch (t.kind) {
        case Token::Kind::CellRef:
            out += render_a1_cell(f.cell_refs[static_cast<std::size_t>(t.ref_index)], origin);
            break;
        case Token::Kind::AreaRef:
            out += render_a1_area(f.area_refs[static_cast<std::size_t>(t.ref_index)], origin);
            break;
        default:
            out += t.text;
            break;
        }
    }
    return out;
}

int deref_coordinate(const CoordinateReference& r, int base) {
    int result = r.absolute ? r.value : base + r.value;
    if (result < 1) throw RefError("reference outside sheet");
    return result;
}

namespace {

const Worksheet& resolve_sheet(const Workbook& wb, const std::optional<std::string>& name,
                               const SheetPos& origin) {
    const std::string& target = name ? *name : origin.sheet;
    const Worksheet* ws = wb.sheet(target);
    if (!ws) throw RefError("unknown worksheet '" + target + "'");
    return *ws;
}

} // namespace

SheetCoord deref_cell(const Workbook& wb, const CellReference& r, const SheetPos& origin) {
    const Worksheet& ws = resolve_sheet(wb, r.sheet, origin);
    Coordinate c{deref_coordinate(r.col, origin.coord.col),
                 deref_coordinate(r.row, origin.coord.row)};
    return SheetCoord{ws.name, c};
}

std::vector<SheetCoord> deref_area(const Workbook& wb, const AreaReference& r,
                                   const SheetPos& origin) {
    const Worksheet& ws = resolve_sheet(wb, r.sheet, origin);
    int c1 = deref_coordinate(r.col1, origin.coord.col);
    int r1 = deref_coordinate(r.row1, origin.coord.row);
    int c2 = deref_coordinate(r.col2, origin.coord.col);
    int r2 = deref_coordinate(r.row2, origin.coord.row);
    if (c1 > c2) std::swap(c1, c2);
    if (r1 > r2) std::swap(r1, r2);
    std::vector<SheetCoord> out;
    out.reserve(static_cast<std::size_t>(c2 - c1 + 1) * static_cast<std::size_t>(r2 - r1 + 1));
    for (int row = r1; row <= r2; ++row)
        for (int col = c1; col <= c2; ++col)
            out.push_back(SheetCoord{ws.name, Coordinate{col, row}});
    return out;
}

std::set<SheetCoord> referenced_cells(const Workbook& wb, const Cell& cell) {
    std::set<SheetCoord> out;
    if (cell.type != CellType::Formula || !cell.formula) return out;
    SheetPos origin{cell.sheet, cell.coord};
    for (const CellReference& r : cell.formula->cell_refs)
        out.insert(deref_cell(wb, r, origin));
    for (const AreaReference& r : cell.formula->area_refs) {
        for (SheetCoord& sc : deref_area(wb, r, origin)) out.insert(std::move(sc));
    }
    return out;
}

bool copy_equivalent(const Cell& a, const Cell& b) {
    if (a.type != CellType::Formula || b.type != CellType::Formula) return false;
    if (!a.formula || !b.formula) return false;
    return a.formula->r1c1_text == b.formula->r1c1_text;
}

std::string_view static_type_name(StaticType t) {
    switch (t) {
    case StaticType::Boolean: return "boolean";
    case StaticType::Numeric: return "numeric";
    case StaticType::String: return "string";
    case StaticType::Error: return "error";
    case StaticType::Empty: return "empty";
    case StaticType::Unknown: return "unknown";
    }
    return "unknown";
}

StaticType static_type_of(CellType t) {
    switch (t) {
    case CellType::Boolean: return StaticType::Boolean;
    case CellType::Numeric: return StaticType::Numeric;
    case CellType::String: return StaticType::String;
    case CellType::Error: return StaticType::Error;
    case CellType::Empty: return StaticType::Empty;
    case CellType::Formula: return StaticType::Unknown;
    }
    return StaticType::Unknown;
}

namespace {

/// Infer the result type from the outermost operator or function of the
/// token stream.
StaticType infer_from_tokens(const std::vector<Token>& tokens) {
    std::size_t begin = 0, end = tokens.size();
    // strip fully enclosing parentheses
    while (end - begin >= 2 && tokens[begin].kind == Token::Kind::Operator &&
           tokens[begin].text == "(") {
        int depth = 0;
        bool encloses = true;
        for (std::size_t i = begin; i < end; ++i) {
            if (tokens[i].kind != Token::Kind::Operator) continue;
            if (tokens[i].text == "(") depth++;
            if (tokens[i].text == ")") {
                depth--;
                if (depth == 0 && i + 1 != end) {
                    encloses = false;
                    break;
                }
            }
        }
        if (!encloses) break;
        begin++;
        end--;
    }
    if (begin >= end) return StaticType::Unknown;

    bool saw_compare = false, saw_concat = false, saw_arith = false;
    int depth = 0;
    for (std::size_t i = begin; i < end; ++i) {
        const Token& t = tokens[i];
        if (t.kind != Token::Kind::Operator) continue;
        if (t.text == "(") {
            depth++;
            continue;
        }
        if (t.text == ")") {
            depth--;
            continue;
        }
        if (depth != 0) continue;
        if (t.text == "=" || t.text == "<>" || t.text == "<" || t.text == "<=" ||
            t.text == ">" || t.text == ">=") {
            saw_compare = true;
        } else if (t.text == "&") {
            saw_concat = true;
        } else if (t.text == "+" || t.text == "-" || t.text == "*" || t.text == "/" ||
                   t.text == "^") {
            saw_arith = true;
        }
    }
    if (saw_compare) return StaticType::Boolean;
    if (saw_concat) return StaticType::String;
    if (saw_arith) return StaticType::Numeric;

    const Token& head = tokens[begin];
    if (head.kind == Token::Kind::Function) {
        if (numeric_functions().count(head.text)) return StaticType::Numeric;
        if (string_functions().count(head.text)) return StaticType::String;
        if (boolean_functions().count(head.text)) return StaticType::Boolean;
        return StaticType::Unknown;
    }
    if (end - begin == 1 && head.kind == Token::Kind::Literal) {
        if (head.text == "TRUE" || head.text == "FALSE") return StaticType::Boolean;
        if (!head.text.empty() && head.text.front() == '"') return StaticType::String;
        return StaticType::Numeric;
    }
    return StaticType::Unknown;
}

} // namespace

StaticType static_result_type(const Cell& cell) {
    if (cell.type != CellType::Formula) return static_type_of(cell.type);
    if (cell.cached) return static_type_of(cell.cached->type);
    if (!cell.formula) return StaticType::Unknown;
    return infer_from_tokens(cell.formula->tokens);
}

} // namespace sheetlint
