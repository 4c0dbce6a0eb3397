#include "sheetlint/document.hpp"

#include "sheetlint/formula.hpp"
#if SHEETLINT_HAS_XLSX
#include "sheetlint/xlsx.hpp"
#endif

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sheetlint {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

CellValue value_from_json(const json& v, CellType declared, const std::string& context) {
    switch (declared) {
    case CellType::Numeric:
        if (!v.is_number()) throw SchemaError(context + ": numeric cell needs a number value");
        return CellValue::numeric(v.get<double>());
    case CellType::String:
        if (!v.is_string()) throw SchemaError(context + ": string cell needs a string value");
        return CellValue::string(v.get<std::string>());
    case CellType::Boolean:
        if (!v.is_boolean()) throw SchemaError(context + ": boolean cell needs a boolean value");
        return CellValue::boolean_value(v.get<bool>());
    case CellType::Error:
        if (!v.is_string()) throw SchemaError(context + ": error cell needs its display text");
        return CellValue::error(v.get<std::string>());
    default:
        throw SchemaError(context + ": unsupported value type");
    }
}

CellValue cached_from_json(const json& v, const std::string& context) {
    if (v.is_number()) return CellValue::numeric(v.get<double>());
    if (v.is_string()) return CellValue::string(v.get<std::string>());
    if (v.is_boolean()) return CellValue::boolean_value(v.get<bool>());
    if (v.is_object()) {
        if (!v.contains("type") || !v.contains("value"))
            throw SchemaError(context + ": cached object needs 'type' and 'value'");
        auto type = cell_type_from_name(v["type"].get<std::string>());
        if (!type || *type == CellType::Formula || *type == CellType::Empty)
            throw SchemaError(context + ": invalid cached value type");
        return value_from_json(v["value"], *type, context);
    }
    throw SchemaError(context + ": cached value must be a scalar");
}

json value_to_json(const CellValue& v) {
    switch (v.type) {
    case CellType::Numeric: {
        double intpart;
        if (std::modf(v.number, &intpart) == 0.0 && std::abs(v.number) < 9.0e15)
            return static_cast<std::int64_t>(v.number);
        return v.number;
    }
    case CellType::String: return v.text;
    case CellType::Boolean: return v.boolean;
    case CellType::Error: return v.text;
    default: return nullptr;
    }
}

} // namespace

Workbook load_canonical_text(std::string_view text, std::string source_path) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("unreadable document " + source_path + ": " + e.what());
    }

    if (!doc.is_object() || !doc.contains("schema_version") ||
        !doc["schema_version"].is_number_integer())
        throw SchemaError(source_path + ": missing schema_version");
    if (doc["schema_version"].get<int>() != kDocumentSchemaVersion)
        throw SchemaError(source_path + ": unsupported schema_version");
    if (!doc.contains("sheets") || !doc["sheets"].is_array())
        throw SchemaError(source_path + ": missing sheets array");

    Workbook wb;
    wb.source_path = std::move(source_path);

    for (const json& jsheet : doc["sheets"]) {
        if (!jsheet.is_object() || !jsheet.contains("name") || !jsheet["name"].is_string())
            throw SchemaError(wb.source_path + ": worksheet needs a name");
        Worksheet ws;
        ws.name = jsheet["name"].get<std::string>();
        if (wb.sheet(ws.name))
            throw SchemaError(wb.source_path + ": duplicate worksheet '" + ws.name + "'");

        if (jsheet.contains("cells")) {
            if (!jsheet["cells"].is_array())
                throw SchemaError(wb.source_path + ": sheet '" + ws.name + "': cells must be an array");
            for (const json& jcell : jsheet["cells"]) {
                if (!jcell.is_object() || !jcell.contains("addr") || !jcell["addr"].is_string())
                    throw SchemaError(wb.source_path + ": sheet '" + ws.name +
                                      "': cell needs an addr");
                const std::string addr = jcell["addr"].get<std::string>();
                const std::string context = "sheet '" + ws.name + "' cell " + addr;

                Coordinate coord;
                try {
                    coord = parse_a1(addr);
                } catch (const Error& e) {
                    throw SchemaError(wb.source_path + ": " + context + ": " + e.what());
                }
                if (ws.cells.count(coord))
                    throw SchemaError(wb.source_path + ": " + context + ": duplicate address");

                if (!jcell.contains("type") || !jcell["type"].is_string())
                    throw SchemaError(wb.source_path + ": " + context + ": missing type");
                auto type = cell_type_from_name(jcell["type"].get<std::string>());
                if (!type)
                    throw SchemaError(wb.source_path + ": " + context + ": unknown type '" +
                                      jcell["type"].get<std::string>() + "'");
                if (*type == CellType::Empty)
                    throw SchemaError(wb.source_path + ": " + context +
                                      ": empty cells are represented by absence");

                Cell cell;
                cell.sheet = ws.name;
                cell.coord = coord;
                cell.type = *type;

                if (*type == CellType::Formula) {
                    if (!jcell.contains("formula") || !jcell["formula"].is_string())
                        throw SchemaError(wb.source_path + ": " + context +
                                          ": formula cell without formula text");
                    if (jcell.contains("value"))
                        throw SchemaError(wb.source_path + ": " + context +
                                          ": formula cells carry 'cached', not 'value'");
                    try {
                        cell.formula = std::make_shared<Formula>(parse_formula_a1(
                            jcell["formula"].get<std::string>(), SheetPos{ws.name, coord}));
                    } catch (const ParseError& e) {
                        throw ParseError(wb.source_path + ": " + context + ": " + e.what(),
                                         e.offset());
                    }
                    if (jcell.contains("cached"))
                        cell.cached = cached_from_json(jcell["cached"],
                                                       wb.source_path + ": " + context);
                } else {
                    if (jcell.contains("formula"))
                        throw SchemaError(wb.source_path + ": " + context +
                                          ": non-formula cell with formula text");
                    if (jcell.contains("value"))
                        cell.literal = value_from_json(jcell["value"], *type,
                                                       wb.source_path + ": " + context);
                }

                ws.bounds.col = std::max(ws.bounds.col, coord.col);
                ws.bounds.row = std::max(ws.bounds.row, coord.row);
                ws.cells.emplace(coord, std::move(cell));
            }
        }
        if (ws.cells.empty()) ws.bounds = Coordinate{0, 0};
        wb.sheets.push_back(std::move(ws));
    }
    return wb;
}

Workbook load_canonical(const std::filesystem::path& path) {
    return load_canonical_text(read_file(path), path.string());
}

std::string serialize_canonical(const Workbook& wb) {
    ordered_json doc;
    doc["schema_version"] = kDocumentSchemaVersion;
    doc["sheets"] = ordered_json::array();
    for (const Worksheet& ws : wb.sheets) {
        ordered_json jsheet;
        jsheet["name"] = ws.name;
        jsheet["cells"] = ordered_json::array();
        for (const auto& [coord, cell] : ws.cells) { // row-major map order
            ordered_json jcell;
            jcell["addr"] = to_a1(coord);
            jcell["type"] = std::string(cell_type_name(cell.type));
            if (cell.type == CellType::Formula) {
                jcell["formula"] = render_a1(*cell.formula, coord);
                if (cell.cached) {
                    if (cell.cached->type == CellType::Error)
                        jcell["cached"] = ordered_json{{"type", "error"},
                                                       {"value", cell.cached->text}};
                    else
                        jcell["cached"] = value_to_json(*cell.cached);
                }
            } else if (cell.literal) {
                jcell["value"] = value_to_json(*cell.literal);
            }
            jsheet["cells"].push_back(std::move(jcell));
        }
        doc["sheets"].push_back(std::move(jsheet));
    }
    return doc.dump(2) + "\n";
}

void save_canonical(const Workbook& wb, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << serialize_canonical(wb);
}

bool is_canonical_document(const std::filesystem::path& path) {
    return lower_ext(path) == ".json";
}

Workbook load_workbook(const std::filesystem::path& path) {
    if (is_canonical_document(path)) return load_canonical(path);
#if SHEETLINT_HAS_XLSX
    if (is_xlsx_document(path)) {
        XlsxLoadResult result = load_xlsx(path);
        result.workbook.load_warnings = std::move(result.warnings);
        return std::move(result.workbook);
    }
#endif
    throw Error("unsupported workbook format: " + path.string());
}

} // namespace sheetlint
