#pragma once

#include "sheetlint/smells.hpp"
#include "sheetlint/structure.hpp"

#include <string>
#include <vector>

namespace sheetlint {

/// Machine-readable structure model; schema-stable and byte-identical across
/// runs on identical inputs.
std::string model_to_json(const StructureModel& model);

/// Human-readable listing of groups, blocks, layers, and meta-headers.
std::string model_to_text(const StructureModel& model);

std::string smells_to_json(const std::vector<SmellReport>& reports);
std::string smells_to_text(const std::vector<SmellReport>& reports);

} // namespace sheetlint
