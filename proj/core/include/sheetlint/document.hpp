#pragma once

#include "sheetlint/grid.hpp"

#include <filesystem>
#include <string>

namespace sheetlint {

inline constexpr int kDocumentSchemaVersion = 1;

/// Load a workbook from the canonical JSON document format. Formulas are
/// stored in A1 notation and parsed at their own address. Throws SchemaError
/// or ParseError with sheet/cell context.
Workbook load_canonical(const std::filesystem::path& path);
Workbook load_canonical_text(std::string_view text, std::string source_path);

/// Canonical serialization: sheets in workbook order, cells sorted row-major,
/// formulas rendered in canonical A1, two-space indentation, LF endings.
/// Loading the output reproduces the workbook byte-for-byte on the next
/// serialization.
std::string serialize_canonical(const Workbook& wb);

void save_canonical(const Workbook& wb, const std::filesystem::path& path);

/// True when the file looks like a canonical workbook document by extension.
bool is_canonical_document(const std::filesystem::path& path);

/// Extension-dispatched loader (canonical JSON, plus XLSX when built in).
Workbook load_workbook(const std::filesystem::path& path);

} // namespace sheetlint
