#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sheetlint {

enum class PreprocessFilter {
    Complete,     // exclude unreadable, unprocessable, and formula-free files
    ReadableOnly, // exclude files the container parser cannot open
    HasFormulas,  // exclude files without a single formula cell
};

std::string_view preprocess_filter_name(PreprocessFilter f);
PreprocessFilter preprocess_filter_from_name(std::string_view name);

struct PreprocessReport {
    int total_files = 0;
    int excluded_unreadable = 0;
    int excluded_unprocessable = 0;
    int excluded_no_formulas = 0;
    std::vector<std::string> accepted; // sorted paths
};

/// Classify every candidate workbook file (canonical *.json, plus *.xlsx when
/// built in) under `dir` and report which survive the filter. Deterministic:
/// accepted paths are sorted. Throws Error for a missing directory.
PreprocessReport preprocess_corpus(const std::filesystem::path& dir, PreprocessFilter filter);

std::string preprocess_report_json(const PreprocessReport& report, PreprocessFilter filter,
                                   const std::filesystem::path& dir);

} // namespace sheetlint
