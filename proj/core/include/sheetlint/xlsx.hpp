#pragma once

#if SHEETLINT_HAS_XLSX

#include "sheetlint/grid.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sheetlint {

struct XlsxLoadResult {
    Workbook workbook;
    std::vector<std::string> warnings; // per-cell downgrades, skipped parts
};

/// Load an XLSX archive: cell types, literals, A1 formulas, and cached
/// values. Unsupported constructs (array formulas, unsupported grammar)
/// downgrade the affected cell to its cached value and record a warning.
/// Throws Error("unreadable ...") when the archive cannot be opened.
XlsxLoadResult load_xlsx(const std::filesystem::path& path);

bool is_xlsx_document(const std::filesystem::path& path);

} // namespace sheetlint

#endif // SHEETLINT_HAS_XLSX
