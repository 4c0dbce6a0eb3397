#include "sheetlint/preprocess.hpp"

#include "sheetlint/document.hpp"
#include "sheetlint/error.hpp"
#if SHEETLINT_HAS_XLSX
#include "sheetlint/xlsx.hpp"
#endif

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace sheetlint {

namespace {

using json = nlohmann::json;

enum class FileClass { Ok, Unreadable, Unprocessable, NoFormulas };

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

bool is_candidate(const std::filesystem::path& path) {
    std::string ext = lower_ext(path);
    if (ext == ".json") return true;
    if (ext == ".xlsx" || ext == ".xlsm") return true;
    return false;
}

int count_formula_cells(const json& doc) {
    int count = 0;
    if (!doc.is_object() || !doc.contains("sheets") || !doc["sheets"].is_array()) return 0;
    for (const json& sheet : doc["sheets"]) {
        if (!sheet.is_object() || !sheet.contains("cells") || !sheet["cells"].is_array()) continue;
        for (const json& cell : sheet["cells"])
            if (cell.is_object() && cell.contains("type") && cell["type"] == "formula") count++;
    }
    return count;
}

int count_formula_cells(const Workbook& wb) {
    int count = 0;
    for (const Worksheet& ws : wb.sheets)
        for (const auto& [coord, cell] : ws.cells)
            if (cell.type == CellType::Formula) count++;
    return count;
}

/// Staged classification: container readability, schema/grammar
/// processability, formula presence. A file stops at its first failing
/// stage; later stages are skipped for filters that do not need them.
FileClass classify(const std::filesystem::path& path, PreprocessFilter filter) {
    const std::string ext = lower_ext(path);

    if (ext == ".xlsx" || ext == ".xlsm") {
#if SHEETLINT_HAS_XLSX
        try {
            XlsxLoadResult result = load_xlsx(path);
            if (filter == PreprocessFilter::ReadableOnly) return FileClass::Ok;
            if (count_formula_cells(result.workbook) == 0) return FileClass::NoFormulas;
            return FileClass::Ok;
        } catch (const Error& e) {
            std::string what = e.what();
            if (what.rfind("unreadable", 0) == 0) return FileClass::Unreadable;
            return FileClass::Unprocessable;
        }
#else
        // without the loader the evaluation tool cannot process the file
        return FileClass::Unprocessable;
#endif
    }

    std::string text;
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) return FileClass::Unreadable;
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error&) {
        return FileClass::Unreadable;
    }
    if (filter == PreprocessFilter::ReadableOnly) return FileClass::Ok;

    if (filter == PreprocessFilter::HasFormulas) {
        // formula presence is judged syntactically, without requiring the
        // full grammar to be supported
        return count_formula_cells(doc) == 0 ? FileClass::NoFormulas : FileClass::Ok;
    }

    try {
        Workbook wb = load_canonical_text(text, path.string());
        if (count_formula_cells(wb) == 0) return FileClass::NoFormulas;
        return FileClass::Ok;
    } catch (const Error&) {
        return FileClass::Unprocessable;
    }
}

} // namespace

std::string_view preprocess_filter_name(PreprocessFilter f) {
    switch (f) {
    case PreprocessFilter::Complete: return "complete";
    case PreprocessFilter::ReadableOnly: return "readable-only";
    case PreprocessFilter::HasFormulas: return "has-formulas";
    }
    return "complete";
}

PreprocessFilter preprocess_filter_from_name(std::string_view name) {
    if (name == "complete") return PreprocessFilter::Complete;
    if (name == "readable-only") return PreprocessFilter::ReadableOnly;
    if (name == "has-formulas") return PreprocessFilter::HasFormulas;
    throw Error("unknown preprocess filter '" + std::string(name) +
                "' (expected complete, readable-only, or has-formulas)");
}

PreprocessReport preprocess_corpus(const std::filesystem::path& dir, PreprocessFilter filter) {
    namespace fs = std::filesystem;
    if (!fs::exists(dir) || !fs::is_directory(dir))
        throw Error("corpus directory not found: " + dir.string());

    std::vector<fs::path> candidates;
    for (const fs::directory_entry& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (is_candidate(entry.path())) candidates.push_back(entry.path());
    }
    std::sort(candidates.begin(), candidates.end());

    PreprocessReport report;
    report.total_files = static_cast<int>(candidates.size());
    for (const fs::path& path : candidates) {
        switch (classify(path, filter)) {
        case FileClass::Ok:
            report.accepted.push_back(path.string());
            break;
        case FileClass::Unreadable:
            report.excluded_unreadable++;
            break;
        case FileClass::Unprocessable:
            report.excluded_unprocessable++;
            break;
        case FileClass::NoFormulas:
            report.excluded_no_formulas++;
            break;
        }
    }
    std::sort(report.accepted.begin(), report.accepted.end());
    return report;
}

std::string preprocess_report_json(const PreprocessReport& report, PreprocessFilter filter,
                                   const std::filesystem::path& dir) {
    nlohmann::ordered_json out;
    out["corpus_dir"] = dir.string();
    out["filter"] = std::string(preprocess_filter_name(filter));
    out["total_files"] = report.total_files;
    out["excluded_unreadable"] = report.excluded_unreadable;
    out["excluded_unprocessable"] = report.excluded_unprocessable;
    out["excluded_no_formulas"] = report.excluded_no_formulas;
    out["accepted_count"] = static_cast<int>(report.accepted.size());
    out["accepted"] = report.accepted;
    return out.dump(2) + "\n";
}

} // namespace sheetlint
