#pragma once

#include "sheetlint/grid.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sheetlint {

/// One axis of a reference. Absolute references store a 1-based index,
/// relative references a signed offset from the referencing cell.
struct CoordinateReference {
    bool absolute = false;
    int value = 0;

    bool operator==(const CoordinateReference&) const = default;
};

struct CellReference {
    std::optional<std::string> sheet; // absent = same sheet as the formula cell
    CoordinateReference col;
    CoordinateReference row;

    bool operator==(const CellReference&) const = default;
};

struct AreaReference {
    std::optional<std::string> sheet;
    CoordinateReference col1, row1; // top-left
    CoordinateReference col2, row2; // bottom-right

    bool operator==(const AreaReference&) const = default;
};

struct Token {
    enum class Kind {
        Operator,   // operators and punctuation, verbatim canonical text
        Function,   // upper-cased function name (the "(" is its own token)
        Literal,    // number, quoted string, TRUE/FALSE
        CellRef,    // slot; ref_index into cell_refs
        AreaRef,    // slot; ref_index into area_refs
    };

    Kind kind = Kind::Operator;
    std::string text;
    int ref_index = -1;

    bool operator==(const Token&) const = default;
};

/// A parsed formula normalized to R1C1. `r1c1_text` is the canonical
/// rendering used for copy-equivalence; re-parsing it reproduces the same
/// tokens and references.
struct Formula {
    std::string r1c1_text;
    std::vector<Token> tokens;
    std::vector<CellReference> cell_refs;
    std::vector<AreaReference> area_refs;

    bool operator==(const Formula& other) const {
        return tokens == other.tokens && cell_refs == other.cell_refs &&
               area_refs == other.area_refs;
    }
};

struct SheetPos {
    std::string sheet;
    Coordinate coord;
};

/// Parse an A1-notation formula body (leading '=' optional) at the given
/// origin, normalizing every reference to R1C1. Throws ParseError.
Formula parse_formula_a1(std::string_view text, const SheetPos& origin);

/// Parse a canonical R1C1 rendering back into a Formula. Throws ParseError.
Formula parse_formula_r1c1(std::string_view text);

/// Inverse rendering for reports: A1 text such that parsing it again at the
/// same origin yields `f`. Throws RefError("unrepresentable at origin") when
/// a reference dereferences below index 1 at this origin.
std::string render_a1(const Formula& f, Coordinate origin);

/// Coordinate dereferencing: absolute -> value, relative ->
/// base + value. Throws RefError("reference outside sheet") when the result
/// is below 1.
int deref_coordinate(const CoordinateReference& r, int base);

/// Resolve a cell reference against its origin cell. Throws RefError
/// ("unknown worksheet") when the named sheet does not exist in `wb`.
SheetCoord deref_cell(const Workbook& wb, const CellReference& r, const SheetPos& origin);

/// Resolve an area reference: the full rectangle between the dereferenced
/// corners, inclusive (row-major order).
std::vector<SheetCoord> deref_area(const Workbook& wb, const AreaReference& r,
                                   const SheetPos& origin);

/// All cells referenced by the cell's formula (union over cell and area
/// references); empty for non-formula cells.
std::set<SheetCoord> referenced_cells(const Workbook& wb, const Cell& cell);

/// Two cells are copy-equivalent iff both hold formulas with identical
/// canonical R1C1 text.
bool copy_equivalent(const Cell& a, const Cell& b);

/// The statically determined value type of a cell: non-formula cells keep
/// their own type; formula cells report their cached value's type, or an
/// inferred type from the outermost operator/function, or Unknown.
enum class StaticType {
    Boolean,
    Numeric,
    String,
    Error,
    Empty,
    Unknown,
};

std::string_view static_type_name(StaticType t);
StaticType static_result_type(const Cell& cell);
StaticType static_type_of(CellType t);

} // namespace sheetlint
