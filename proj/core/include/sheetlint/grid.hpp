#pragma once

#include "sheetlint/error.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sheetlint {

struct Formula;

/// 1-based grid position. `col` is the x axis (A = 1), `row` the y axis.
struct Coordinate {
    int col = 1;
    int row = 1;

    bool operator==(const Coordinate&) const = default;
};

/// Row-major ordering: by row, then by column. Every container of
/// coordinates in the library iterates in this order.
inline bool operator<(const Coordinate& a, const Coordinate& b) {
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
}

enum class CellType {
    Formula,
    Boolean,
    Numeric,
    String,
    Error,
    Empty,
};

std::string_view cell_type_name(CellType t);
std::optional<CellType> cell_type_from_name(std::string_view name);

/// A stored scalar: the literal of a constant cell or the cached result of a
/// formula cell. `type` is one of Numeric, String, Boolean, Error; error
/// values keep their display text ("#DIV/0!", ...) in `text`.
struct CellValue {
    CellType type = CellType::Numeric;
    double number = 0.0;
    std::string text;
    bool boolean = false;

    static CellValue numeric(double v);
    static CellValue string(std::string v);
    static CellValue boolean_value(bool v);
    static CellValue error(std::string display);

    bool operator==(const CellValue&) const = default;
};

struct Cell {
    std::string sheet;
    Coordinate coord;
    CellType type = CellType::Empty;
    std::optional<CellValue> literal;        // constant cells
    std::shared_ptr<const Formula> formula;  // present iff type == Formula
    std::optional<CellValue> cached;         // last evaluated value, if known
};

/// Sparse grid of non-empty cells. Emptiness is represented by absence;
/// `bounds` is the maximal used column/row ({0,0} for an empty sheet).
struct Worksheet {
    std::string name;
    std::map<Coordinate, Cell> cells;
    Coordinate bounds{0, 0};

    const Cell* find(Coordinate c) const;
    CellType type_at(Coordinate c) const;
};

struct Workbook {
    std::vector<Worksheet> sheets;
    std::string source_path;
    std::vector<std::string> load_warnings; // per-cell downgrades and skips

    const Worksheet* sheet(std::string_view name) const;
    Worksheet* sheet(std::string_view name);
};

/// A cell position qualified by its worksheet.
struct SheetCoord {
    std::string sheet;
    Coordinate coord;

    bool operator==(const SheetCoord&) const = default;
};

inline bool operator<(const SheetCoord& a, const SheetCoord& b) {
    if (a.sheet != b.sheet) return a.sheet < b.sheet;
    return a.coord < b.coord;
}

// --- A1 address helpers ---------------------------------------------------

std::string column_letters(int col);
int column_from_letters(std::string_view letters);
std::string to_a1(Coordinate c);
Coordinate parse_a1(std::string_view addr);

/// "B4" for a single cell, "B4:F8" for a larger rectangle.
std::string range_to_string(Coordinate top_left, Coordinate bottom_right);

// --- positional primitives -------------------------------------------------

/// Coordinates at Manhattan distance exactly 1 that lie in positive index
/// space. At most four; the positions may hold empty cells.
std::vector<Coordinate> neighbors(Coordinate c);
std::vector<Coordinate> neighbors(const Worksheet& ws, Coordinate c);

/// True iff every coordinate of the set reaches every other one through
/// neighbor steps inside the set. Singletons are connected.
/// Throws Error("empty cell set") for an empty input.
bool connected(const std::set<Coordinate>& cells);

/// All coordinates of the bounding rectangle of the set.
/// Throws Error("empty cell set") for an empty input.
std::vector<Coordinate> area(const std::set<Coordinate>& cells);

/// Bounding rectangle of a non-empty coordinate set.
std::pair<Coordinate, Coordinate> bounding_rect(const std::set<Coordinate>& cells);

/// Type of the cell at a coordinate; Empty when nothing is stored there.
CellType cell_type(const Worksheet& ws, Coordinate c);
CellType cell_type(const Cell* cell);

} // namespace sheetlint
