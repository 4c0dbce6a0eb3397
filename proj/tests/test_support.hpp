#pragma once

#include "sheetlint/document.hpp"
#include "sheetlint/formula.hpp"
#include "sheetlint/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

using namespace sheetlint;

inline std::filesystem::path data_dir() {
    if (const char* env = std::getenv("SHEETLINT_TEST_DATA")) return env;
    return std::filesystem::path("tests") / "data";
}

inline std::filesystem::path fixture(const std::string& name) {
    return data_dir() / name;
}

inline Workbook load_fixture(const std::string& name) {
    return load_canonical(fixture(name));
}

// --- in-code workbook construction ---------------------------------------------

class SheetBuilder {
public:
    explicit SheetBuilder(std::string name) { ws_.name = std::move(name); }

    SheetBuilder& number(const std::string& addr, double v) {
        put(addr, CellType::Numeric, CellValue::numeric(v));
        return *this;
    }
    SheetBuilder& text(const std::string& addr, std::string v) {
        put(addr, CellType::String, CellValue::string(std::move(v)));
        return *this;
    }
    SheetBuilder& boolean(const std::string& addr, bool v) {
        put(addr, CellType::Boolean, CellValue::boolean_value(v));
        return *this;
    }
    SheetBuilder& error(const std::string& addr, std::string display) {
        put(addr, CellType::Error, CellValue::error(std::move(display)));
        return *this;
    }
    /// Formula text is parsed lazily by WorkbookBuilder::build (it needs the
    /// worksheet name context only).
    SheetBuilder& formula(const std::string& addr, std::string text,
                          std::optional<CellValue> cached = std::nullopt) {
        Coordinate coord = parse_a1(addr);
        Cell cell;
        cell.sheet = ws_.name;
        cell.coord = coord;
        cell.type = CellType::Formula;
        cell.formula = std::make_shared<Formula>(
            parse_formula_a1(text, SheetPos{ws_.name, coord}));
        cell.cached = std::move(cached);
        insert(coord, std::move(cell));
        return *this;
    }

    Worksheet take() { return std::move(ws_); }

private:
    Worksheet ws_;

    void put(const std::string& addr, CellType type, CellValue value) {
        Coordinate coord = parse_a1(addr);
        Cell cell;
        cell.sheet = ws_.name;
        cell.coord = coord;
        cell.type = type;
        cell.literal = std::move(value);
        insert(coord, std::move(cell));
    }

    void insert(Coordinate coord, Cell cell) {
        ws_.bounds.col = std::max(ws_.bounds.col, coord.col);
        ws_.bounds.row = std::max(ws_.bounds.row, coord.row);
        ws_.cells[coord] = std::move(cell);
    }
};

inline Workbook make_workbook(std::vector<SheetBuilder> sheets, std::string path = "<memory>") {
    Workbook wb;
    wb.source_path = std::move(path);
    for (SheetBuilder& b : sheets) wb.sheets.push_back(b.take());
    return wb;
}

inline std::set<Coordinate> coords(const std::vector<std::string>& addrs) {
    std::set<Coordinate> out;
    for (const std::string& a : addrs) out.insert(parse_a1(a));
    return out;
}

inline std::set<Coordinate> range_coords(const std::string& range) {
    auto colon = range.find(':');
    Coordinate lo = parse_a1(range.substr(0, colon));
    Coordinate hi = colon == std::string::npos ? lo : parse_a1(range.substr(colon + 1));
    std::set<Coordinate> out;
    for (int row = lo.row; row <= hi.row; ++row)
        for (int col = lo.col; col <= hi.col; ++col) out.insert(Coordinate{col, row});
    return out;
}

/// "A1:B2;D4" -> coordinate set (ranges separated by ';').
inline std::set<Coordinate> cells_of(const std::string& spec) {
    std::set<Coordinate> out;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t end = spec.find(';', pos);
        if (end == std::string::npos) end = spec.size();
        for (const Coordinate& c : range_coords(spec.substr(pos, end - pos))) out.insert(c);
        pos = end + 1;
    }
    return out;
}

// --- independent oracles ----------------------------------------------------------

/// Breadth-first reachability, independent of the union-find implementation
/// in the library.
inline bool bfs_connected(const std::set<Coordinate>& cells) {
    if (cells.empty()) return false;
    std::set<Coordinate> seen;
    std::vector<Coordinate> frontier{*cells.begin()};
    seen.insert(*cells.begin());
    while (!frontier.empty()) {
        Coordinate cur = frontier.back();
        frontier.pop_back();
        const Coordinate candidates[4] = {{cur.col + 1, cur.row},
                                          {cur.col - 1, cur.row},
                                          {cur.col, cur.row + 1},
                                          {cur.col, cur.row - 1}};
        for (const Coordinate& n : candidates) {
            if (cells.count(n) && !seen.count(n)) {
                seen.insert(n);
                frontier.push_back(n);
            }
        }
    }
    return seen.size() == cells.size();
}

// --- randomized workbook generation -------------------------------------------------

struct RandomWorkbookOptions {
    int max_sheets = 3;
    int max_cols = 9;
    int max_rows = 9;
    double fill = 0.45;
    double formula_share = 0.35;
    bool cross_sheet = true;
};

/// Deterministic random workbook: mixed constants and formulas whose
/// references stay inside the generated bounds.
inline Workbook random_workbook(std::mt19937& rng, const RandomWorkbookOptions& opt = {}) {
    std::uniform_int_distribution<int> sheet_count(1, opt.max_sheets);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    int sheets = sheet_count(rng);
    std::vector<std::string> names;
    for (int i = 0; i < sheets; ++i) names.push_back("S" + std::to_string(i + 1));

    Workbook wb;
    wb.source_path = "<random>";
    for (int si = 0; si < sheets; ++si) {
        Worksheet ws;
        ws.name = names[static_cast<std::size_t>(si)];
        std::uniform_int_distribution<int> cols(2, opt.max_cols);
        std::uniform_int_distribution<int> rows(2, opt.max_rows);
        int max_col = cols(rng), max_row = rows(rng);
        std::uniform_int_distribution<int> col_pick(1, max_col), row_pick(1, max_row);

        auto a1 = [&](int c, int r) { return column_letters(c) + std::to_string(r); };

        for (int row = 1; row <= max_row; ++row) {
            for (int col = 1; col <= max_col; ++col) {
                if (unit(rng) > opt.fill) continue;
                Coordinate coord{col, row};
                Cell cell;
                cell.sheet = ws.name;
                cell.coord = coord;
                double kind = unit(rng);
                if (kind < opt.formula_share) {
                    std::string target_sheet;
                    if (opt.cross_sheet && sheets > 1 && unit(rng) < 0.25) {
                        std::uniform_int_distribution<int> pick(0, sheets - 1);
                        target_sheet = names[static_cast<std::size_t>(pick(rng))];
                    }
                    std::string prefix =
                        target_sheet.empty() || target_sheet == ws.name ? "" : target_sheet + "!";
                    std::string text;
                    double shape = unit(rng);
                    int c1 = col_pick(rng), r1 = row_pick(rng);
                    if (shape < 0.4) {
                        text = prefix + a1(c1, r1);
                    } else if (shape < 0.7) {
                        int c2 = col_pick(rng), r2 = row_pick(rng);
                        text = "SUM(" + prefix + a1(std::min(c1, c2), std::min(r1, r2)) + ":" +
                               a1(std::max(c1, c2), std::max(r1, r2)) + ")";
                    } else {
                        int c2 = col_pick(rng), r2 = row_pick(rng);
                        text = prefix + a1(c1, r1) + "+" + a1(c2, r2) + "*2";
                    }
                    cell.type = CellType::Formula;
                    cell.formula = std::make_shared<Formula>(
                        parse_formula_a1(text, SheetPos{ws.name, coord}));
                    if (unit(rng) < 0.5) cell.cached = CellValue::numeric(unit(rng) * 100);
                } else if (kind < opt.formula_share + 0.35) {
                    cell.type = CellType::Numeric;
                    cell.literal = CellValue::numeric(std::floor(unit(rng) * 100));
                } else if (kind < opt.formula_share + 0.55) {
                    cell.type = CellType::String;
                    cell.literal = CellValue::string("t" + std::to_string(col * 10 + row));
                } else if (kind < opt.formula_share + 0.6) {
                    cell.type = CellType::Boolean;
                    cell.literal = CellValue::boolean_value(unit(rng) < 0.5);
                } else {
                    cell.type = CellType::Numeric;
                    cell.literal = CellValue::numeric(row * 100 + col);
                }
                ws.bounds.col = std::max(ws.bounds.col, col);
                ws.bounds.row = std::max(ws.bounds.row, row);
                ws.cells.emplace(coord, std::move(cell));
            }
        }
        wb.sheets.push_back(std::move(ws));
    }
    return wb;
}

} // namespace testsupport
