#pragma once

#include "sheetlint/structure.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sheetlint {

enum class SmellKind {
    BaselinePatternFinder,
    BaselineLongChain,
    BaselineFeatureEnvy,
    GroupPatternFinder,
    GroupLongChain,
    GroupFeatureEnvy,
    OverburdenedWorksheet,
    InconsistentGroupReference,
    MissingHeader,
};

std::string_view smell_kind_name(SmellKind k);
std::optional<SmellKind> smell_kind_from_name(std::string_view name);

enum class Risk { None, Low, High };
std::string_view risk_name(Risk r);

enum class SubjectKind { Cell, Group, Block, Worksheet };

struct Subject {
    SubjectKind kind = SubjectKind::Cell;
    std::string sheet;
    std::string id; // "Total!D4", group id, block id, or the sheet name
};

struct SmellReport {
    SmellKind kind = SmellKind::BaselinePatternFinder;
    std::string detector; // concrete variant id, e.g. "baseline-pattern-finder-col"
    Subject subject;
    double metric = 0.0;
    std::optional<Risk> risk; // absent for per-instance smells
    std::string detail;
};

/// Per-kind risk bands; low <= high. `medium` is carried for configuration
/// completeness (the 80% marks) but does not affect classification.
struct ThresholdBand {
    double low = 0.0;
    double high = 0.0;
    std::optional<double> medium;
};

/// Bands are keyed by threshold key: the smell kind name, except for the
/// overburdened metrics which carry their own bands
/// ("overburdened-worksheet-blocks", "overburdened-worksheet-groups").
struct Thresholds {
    std::map<std::string, ThresholdBand> bands;

    static Thresholds defaults();
    const ThresholdBand* band(std::string_view key) const;
};

/// value < low -> None; low <= value < high -> Low; value >= high -> High.
/// Throws Error("kind is per-instance") for keys without thresholds.
Risk classify(double value, std::string_view kind_key, const Thresholds& t);
Risk classify(double value, SmellKind kind, const Thresholds& t);
bool kind_has_thresholds(std::string_view kind_key);

// --- baseline detectors -----------------------------------------------------

struct PatternFinderVariant {
    enum class Axis { Column, Row, Combined };
    Axis orientation = Axis::Column;
    bool include_border = false; // true suspends the first/last-five-lines rule
    bool evaluated_types = true; // compare static result types, not stored types
};

/// Window-based Pattern Finder: a cell is flagged when it is the single
/// deviating type in some 4-cell window along the axis and no cell within
/// distance 5 on that axis shares its type.
std::vector<Coordinate> baseline_pattern_finder(const Worksheet& ws,
                                                const PatternFinderVariant& variant);

/// Longest reference path that evaluation of the cell's formula has to
/// follow; 0 for non-formula cells. Cyclic inputs are cut at back edges
/// (contributing 0) and flagged.
struct CellChains {
    std::map<SheetCoord, int> length;
    bool cycle = false;
};
CellChains compute_cell_chains(const Workbook& wb, const CancelToken* cancel = nullptr);
int baseline_chain_length(const Workbook& wb, const Cell& cell);

/// Count of (formula cell, resolved reference) pairs whose target worksheet
/// differs from `ws`; area references count once per referring cell.
int baseline_feature_envy(const Workbook& wb, const Worksheet& ws);

// --- structure-refined detectors ---------------------------------------------

/// Merged reference-based groups of the worksheet whose member cells exhibit
/// two or more distinct types. With `evaluated` the comparison uses static
/// result types. All-empty groups have one type and are never reported.
std::vector<const ReferenceGroup*> group_pattern_finder(const StructureModel& model,
                                                        const WorksheetModel& wsm,
                                                        bool evaluated);

struct GroupChains {
    std::map<std::string, int> length;                 // pfg id -> chain
    std::map<std::string, std::string> witness;        // pfg id -> rendered chain path
    bool cycle = false;
};
GroupChains compute_group_chains(const StructureModel& model,
                                 const CancelToken* cancel = nullptr);
int group_longest_chain(const StructureModel& model, const PartitionedFormulaGroup& g);

/// Number of reference-based groups of the worksheet's partitioned formula
/// groups that live on another worksheet.
int group_feature_envy(const StructureModel& model, const WorksheetModel& wsm);

enum class OverburdenedMetric { Blocks, Groups };
int overburdened_worksheet(const WorksheetModel& wsm, OverburdenedMetric metric);

/// Ordered group pairs (g, g') where no reference-based group of g equals g'
/// as a cell set, yet some reference-based group of g covers a strict,
/// non-empty subset of g'.
struct InconsistentReference {
    std::string pfg_id;        // referring group g
    std::string target_pfg_id; // partially referenced group g'
};
std::vector<InconsistentReference> inconsistent_group_references(const StructureModel& model);

/// Empty-typed coordinates inside the union of the block's header layers.
std::vector<Coordinate> missing_headers(const StructureModel& model, const Block& block);

} // namespace sheetlint
