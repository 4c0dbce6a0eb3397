#include "sheetlint/grid.hpp"

#include <algorithm>
#include <cctype>

namespace sheetlint {

std::string_view cell_type_name(CellType t) {
    switch (t) {
    case CellType::Formula: return "formula";
    case CellType::Boolean: return "boolean";
    case CellType::Numeric: return "numeric";
    case CellType::String: return "string";
    case CellType::Error: return "error";
    case CellType::Empty: return "empty";
    }
    return "empty";
}

std::optional<CellType> cell_type_from_name(std::string_view name) {
    if (name == "formula") return CellType::Formula;
    if (name == "boolean") return CellType::Boolean;
    if (name == "numeric") return CellType::Numeric;
    if (name == "string") return CellType::String;
    if (name == "error") return CellType::Error;
    if (name == "empty") return CellType::Empty;
    return std::nullopt;
}

CellValue CellValue::numeric(double v) {
    CellValue out;
    out.type = CellType::Numeric;
    out.number = v;
    return out;
}

CellValue CellValue::string(std::string v) {
    CellValue out;
    out.type = CellType::String;
    out.text = std::move(v);
    return out;
}

CellValue CellValue::boolean_value(bool v) {
    CellValue out;
    out.type = CellType::Boolean;
    out.boolean = v;
    return out;
}

CellValue CellValue::error(std::string display) {
    CellValue out;
    out.type = CellType::Error;
    out.text = std::move(display);
    return out;
}

const Cell* Worksheet::find(Coordinate c) const {
    auto it = cells.find(c);
    return it == cells.end() ? nullptr : &it->second;
}

CellType Worksheet::type_at(Coordinate c) const {
    const Cell* cell = find(c);
    return cell ? cell->type : CellType::Empty;
}

const Worksheet* Workbook::sheet(std::string_view name) const {
    for (const Worksheet& ws : sheets)
        if (ws.name == name) return &ws;
    return nullptr;
}

Worksheet* Workbook::sheet(std::string_view name) {
    for (Worksheet& ws : sheets)
        if (ws.name == name) return &ws;
    return nullptr;
}

std::string column_letters(int col) {
    std::string out;
    while (col > 0) {
        int rem = (col - 1) % 26;
        out.insert(out.begin(), static_cast<char>('A' + rem));
        col = (col - 1) / 26;
    }
    return out;
}

int column_from_letters(std::string_view letters) {
    int col = 0;
    for (char ch : letters) {
        if (!std::isalpha(static_cast<unsigned char>(ch)))
            throw Error("invalid column letters '" + std::string(letters) + "'");
        col = col * 26 + (std::toupper(static_cast<unsigned char>(ch)) - 'A' + 1);
        if (col > 2'000'000) throw Error("column index out of range");
    }
    if (col == 0) throw Error("invalid column letters ''");
    return col;
}

std::string to_a1(Coordinate c) {
    return column_letters(c.col) + std::to_string(c.row);
}

Coordinate parse_a1(std::string_view addr) {
    std::size_t i = 0;
    while (i < addr.size() && std::isalpha(static_cast<unsigned char>(addr[i]))) i++;
    if (i == 0 || i == addr.size())
        throw Error("invalid cell address '" + std::string(addr) + "'");
    int col = column_from_letters(addr.substr(0, i));
    int row = 0;
    for (std::size_t j = i; j < addr.size(); ++j) {
        char ch = addr[j];
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw Error("invalid cell address '" + std::string(addr) + "'");
        row = row * 10 + (ch - '0');
        if (row > 100'000'000) throw Error("row index out of range");
    }
    if (row < 1) throw Error("invalid cell address '" + std::string(addr) + "'");
    return Coordinate{col, row};
}

std::string range_to_string(Coordinate top_left, Coordinate bottom_right) {
    if (top_left == bottom_right) return to_a1(top_left);
    return to_a1(top_left) + ":" + to_a1(bottom_right);
}

std::vector<Coordinate> neighbors(Coordinate c) {
    std::vector<Coordinate> out;
    out.reserve(4);
    if (c.row > 1) out.push_back({c.col, c.row - 1});
    if (c.col > 1) out.push_back({c.col - 1, c.row});
    out.push_back({c.col + 1, c.row});
    out.push_back({c.col, c.row + 1});
    return out;
}

std::vector<Coordinate> neighbors(const Worksheet&, Coordinate c) {
    return neighbors(c);
}

bool connected(const std::set<Coordinate>& cells) {
    if (cells.empty()) throw Error("empty cell set");
    if (cells.size() == 1) return true;

    // union-find over the member coordinates
    std::map<Coordinate, Coordinate> parent;
    for (const Coordinate& c : cells) parent[c] = c;

    auto find_root = [&](Coordinate c) {
        while (!(parent[c] == c)) {
            parent[c] = parent[parent[c]];
            c = parent[c];
        }
        return c;
    };

    for (const Coordinate& c : cells) {
        Coordinate right{c.col + 1, c.row};
        Coordinate down{c.col, c.row + 1};
        for (const Coordinate& n : {right, down}) {
            if (cells.count(n)) {
                Coordinate a = find_root(c);
                Coordinate b = find_root(n);
                if (!(a == b)) parent[a] = b;
            }
        }
    }

    Coordinate root = find_root(*cells.begin());
    return std::all_of(cells.begin(), cells.end(),
                       [&](const Coordinate& c) { return find_root(c) == root; });
}

std::pair<Coordinate, Coordinate> bounding_rect(const std::set<Coordinate>& cells) {
    if (cells.empty()) throw Error("empty cell set");
    Coordinate lo{cells.begin()->col, cells.begin()->row};
    Coordinate hi = lo;
    for (const Coordinate& c : cells) {
        lo.col = std::min(lo.col, c.col);
        lo.row = std::min(lo.row, c.row);
        hi.col = std::max(hi.col, c.col);
        hi.row = std::max(hi.row, c.row);
    }
    return {lo, hi};
}

std::vector<Coordinate> area(const std::set<Coordinate>& cells) {
    auto [lo, hi] = bounding_rect(cells);
    std::vector<Coordinate> out;
    out.reserve(static_cast<std::size_t>(hi.col - lo.col + 1) *
                static_cast<std::size_t>(hi.row - lo.row + 1));
    for (int row = lo.row; row <= hi.row; ++row)
        for (int col = lo.col; col <= hi.col; ++col)
            out.push_back({col, row});
    return out;
}

CellType cell_type(const Worksheet& ws, Coordinate c) {
    return ws.type_at(c);
}

CellType cell_type(const Cell* cell) {
    return cell ? cell->type : CellType::Empty;
}

} // namespace sheetlint
