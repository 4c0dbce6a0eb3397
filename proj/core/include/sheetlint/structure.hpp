#pragma once

#include "sheetlint/formula.hpp"
#include "sheetlint/grid.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sheetlint {

/// Cooperative cancellation: long-running analyses call check() at loop
/// boundaries and abort with Cancelled once the flag is set or the deadline
/// has passed.
class CancelToken {
public:
    struct Cancelled : Error {
        Cancelled() : Error("analysis cancelled") {}
    };

    CancelToken() = default;
    explicit CancelToken(std::chrono::steady_clock::duration budget)
        : deadline_(std::chrono::steady_clock::now() + budget), has_deadline_(true) {}

    void cancel() { cancelled_.store(true, std::memory_order_relaxed); }

    bool expired() const {
        if (cancelled_.load(std::memory_order_relaxed)) return true;
        return has_deadline_ && std::chrono::steady_clock::now() > deadline_;
    }

    void check() const {
        if (expired()) throw Cancelled{};
    }

private:
    std::atomic<bool> cancelled_{false};
    std::chrono::steady_clock::time_point deadline_{};
    bool has_deadline_ = false;
};

inline void check_cancel(const CancelToken* token) {
    if (token) token->check();
}

enum class Orientation {
    Row,
    Column,
    Singleton, // one cell; compatible with both axes
    Rect,      // 2-D area reference targets
};

std::string_view orientation_name(Orientation o);

/// Maximal connected run of same-type cells (same canonical R1C1 formula for
/// formula cells).
struct TypeBasedGroup {
    std::string id;
    std::string sheet;
    CellType type = CellType::Empty;
    std::optional<std::string> formula_r1c1;
    std::vector<Coordinate> cells; // row-major sorted
};

struct Provenance {
    std::string pfg_id;
    int ref_index = 0; // position of the reference among the formula's ref slots

    bool operator==(const Provenance&) const = default;
    bool operator<(const Provenance& o) const {
        if (pfg_id != o.pfg_id) return pfg_id < o.pfg_id;
        return ref_index < o.ref_index;
    }
};

/// Cells a partitioned formula group's reference resolves to. Raw groups are
/// attached to their referring group; merged groups live on the worksheet
/// that contains their cells.
struct ReferenceGroup {
    std::string id;
    std::string sheet; // sheet of the referred cells
    Orientation orientation = Orientation::Singleton;
    std::vector<Coordinate> cells; // row-major sorted, deduplicated
    std::vector<Provenance> provenance;
};

/// One-dimensional slice of a formula group; the unit of refined smell
/// detection.
struct PartitionedFormulaGroup {
    std::string id;
    std::string sheet;
    Orientation orientation = Orientation::Singleton;
    std::vector<Coordinate> cells; // ordered along the axis
    std::string formula_r1c1;
    const Formula* formula = nullptr; // owned by the workbook's cells

    std::vector<ReferenceGroup> reference_groups; // raw, in ref-slot order
    std::vector<std::string> referred_pfgs;       // sorted pfg ids reached via rho
};

struct Block {
    std::string id;
    std::string sheet;
    Coordinate top_left, bottom_right;
    std::vector<std::string> member_ids; // group ids, sorted
};

enum class LayerKind { ColumnLayer, RowLayer };

struct HeaderLayer {
    std::string id;
    std::string block_id;
    LayerKind kind = LayerKind::ColumnLayer;
    int level = 1;                        // 1 = adjacent to the block
    std::vector<Coordinate> cells;        // full strip, including empty spots
    std::optional<Coordinate> meta_header;
};

struct MetaHeaderAssignment {
    Coordinate cell;
    std::string layer_id;
};

struct WorksheetModel {
    std::string name;
    std::vector<TypeBasedGroup> type_groups;
    std::vector<PartitionedFormulaGroup> formula_groups; // partitioned
    std::vector<ReferenceGroup> merged_reference_groups; // cells lie in this sheet
    std::set<Coordinate> non_blockable;
    std::vector<Block> blocks;
    std::vector<HeaderLayer> layers;
    std::vector<MetaHeaderAssignment> meta_headers;
    std::vector<Coordinate> unassigned_labels; // non-blockables in no layer, unassigned
};

/// Deterministic structural model of a workbook: equal workbooks produce
/// identical models.
struct StructureModel {
    const Workbook* workbook = nullptr;
    std::vector<WorksheetModel> sheets; // parallel to workbook sheet order
    bool cell_reference_cycle = false;
    bool group_reference_cycle = false;
    std::vector<std::string> warnings; // unresolvable references, downgrades, ...

    const WorksheetModel* sheet(std::string_view name) const;
    const PartitionedFormulaGroup* find_pfg(std::string_view id) const;
    /// pfg containing the cell, or nullptr.
    const PartitionedFormulaGroup* pfg_at(const SheetCoord& pos) const;
};

StructureModel build_structure_model(const Workbook& wb, const CancelToken* cancel = nullptr);

// --- stand-alone structure operations ---------------------------------------
// These are the building blocks used by build_structure_model; they are
// exposed for direct use and testing.

std::vector<TypeBasedGroup> type_based_groups(const Worksheet& ws);
std::vector<TypeBasedGroup> formula_groups(const Worksheet& ws);
std::vector<PartitionedFormulaGroup> partition_formula_group(const TypeBasedGroup& g);

std::vector<std::string> referred_formula_groups(const StructureModel& model,
                                                 const PartitionedFormulaGroup& g);
const std::vector<ReferenceGroup>& reference_groups_of(const PartitionedFormulaGroup& g);

std::vector<ReferenceGroup> merged_reference_groups(const StructureModel& model,
                                                    std::string_view sheet);
const std::set<Coordinate>& non_blockables(const StructureModel& model, std::string_view sheet);

std::vector<Block> blocks(const StructureModel& model, std::string_view sheet);
std::vector<HeaderLayer> header_layers(const StructureModel& model, const Block& block);
std::vector<MetaHeaderAssignment> assign_meta_headers(const StructureModel& model,
                                                      std::string_view sheet);

/// Block predicate: the bounding rectangle of the cells contains
/// no non-blockable cell. Throws Error("empty cell set") for an empty input.
bool is_block(const std::set<Coordinate>& cells, const std::set<Coordinate>& non_blockable);

/// True iff some cell of the group shares a row with a block cell at column
/// distance <= 2, or a column at row distance <= 2.
bool block_neighbor(const std::set<Coordinate>& block_cells,
                    const std::vector<Coordinate>& group_cells);

std::string group_range_string(const std::vector<Coordinate>& cells);

} // namespace sheetlint
