#include "sheetlint/smells.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace sheetlint {

std::string_view smell_kind_name(SmellKind k) {
    switch (k) {
    case SmellKind::BaselinePatternFinder: return "baseline-pattern-finder";
    case SmellKind::BaselineLongChain: return "baseline-long-chain";
    case SmellKind::BaselineFeatureEnvy: return "baseline-feature-envy";
    case SmellKind::GroupPatternFinder: return "group-pattern-finder";
    case SmellKind::GroupLongChain: return "group-long-chain";
    case SmellKind::GroupFeatureEnvy: return "group-feature-envy";
    case SmellKind::OverburdenedWorksheet: return "overburdened-worksheet";
    case SmellKind::InconsistentGroupReference: return "inconsistent-group-reference";
    case SmellKind::MissingHeader: return "missing-header";
    }
    return "baseline-pattern-finder";
}

std::optional<SmellKind> smell_kind_from_name(std::string_view name) {
    for (SmellKind k : {SmellKind::BaselinePatternFinder, SmellKind::BaselineLongChain,
                        SmellKind::BaselineFeatureEnvy, SmellKind::GroupPatternFinder,
                        SmellKind::GroupLongChain, SmellKind::GroupFeatureEnvy,
                        SmellKind::OverburdenedWorksheet, SmellKind::InconsistentGroupReference,
                        SmellKind::MissingHeader}) {
        if (smell_kind_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view risk_name(Risk r) {
    switch (r) {
    case Risk::None: return "none";
    case Risk::Low: return "low";
    case Risk::High: return "high";
    }
    return "none";
}

Thresholds Thresholds::defaults() {
    Thresholds t;
    t.bands["baseline-long-chain"] = {4, 7, std::nullopt};
    t.bands["group-long-chain"] = {4, 7, std::nullopt};
    t.bands["baseline-feature-envy"] = {3, 7, std::nullopt};
    t.bands["group-feature-envy"] = {3, 7, std::nullopt};
    t.bands["overburdened-worksheet-blocks"] = {4, 9, 5.0};
    t.bands["overburdened-worksheet-groups"] = {11, 37, 19.0};
    return t;
}

const ThresholdBand* Thresholds::band(std::string_view key) const {
    auto it = bands.find(std::string(key));
    return it == bands.end() ? nullptr : &it->second;
}

bool kind_has_thresholds(std::string_view kind_key) {
    return Thresholds::defaults().band(kind_key) != nullptr;
}

Risk classify(double value, std::string_view kind_key, const Thresholds& t) {
    const ThresholdBand* band = t.band(kind_key);
    if (!band) throw Error("kind is per-instance: " + std::string(kind_key));
    if (value < band->low) return Risk::None;
    if (value < band->high) return Risk::Low;
    return Risk::High;
}

Risk classify(double value, SmellKind kind, const Thresholds& t) {
    return classify(value, smell_kind_name(kind), t);
}

// --- baseline Pattern Finder ---------------------------------------------------

namespace {

constexpr int kEmptyCode = 0;

int type_code(const Cell* cell, bool evaluated) {
    if (!cell) return kEmptyCode;
    if (evaluated) {
        StaticType st = static_result_type(*cell);
        return 1 + static_cast<int>(st);
    }
    return 100 + static_cast<int>(cell->type);
}

/// Flag positions along one line (a column or a row). `codes` is 1-based over
/// the full line; a cell is flagged when it is the single deviant of some
/// 4-cell window and no cell within distance 5 shares its code.
void flag_line(const std::vector<int>& codes, int limit, std::vector<int>& flagged) {
    for (int start = 1; start + 3 <= limit; ++start) {
        int deviant = -1;
        for (int i = 0; i < 4; ++i) {
            int candidate = codes[static_cast<std::size_t>(start + i)];
            bool others_equal = true;
            int other_code = -1;
            for (int j = 0; j < 4; ++j) {
                if (j == i) continue;
                int cj = codes[static_cast<std::size_t>(start + j)];
                if (other_code == -1) other_code = cj;
                others_equal = others_equal && cj == other_code;
            }
            if (others_equal && candidate != other_code) {
                deviant = start + i;
                break;
            }
        }
        if (deviant < 0) continue;
        int code = codes[static_cast<std::size_t>(deviant)];
        bool unique = true;
        for (int d = 1; d <= 5 && unique; ++d) {
            if (deviant - d >= 1 && codes[static_cast<std::size_t>(deviant - d)] == code)
                unique = false;
            if (deviant + d <= limit && codes[static_cast<std::size_t>(deviant + d)] == code)
                unique = false;
        }
        if (unique) flagged.push_back(deviant);
    }
}

std::set<Coordinate> pattern_finder_axis(const Worksheet& ws, bool column_wise,
                                         bool include_border, bool evaluated) {
    std::set<Coordinate> flagged;
    const int limit = column_wise ? ws.bounds.row : ws.bounds.col;
    if (limit < 4) return flagged;

    std::set<int> used_lines;
    for (const auto& [coord, cell] : ws.cells)
        used_lines.insert(column_wise ? coord.col : coord.row);

    for (int line : used_lines) {
        std::vector<int> codes(static_cast<std::size_t>(limit) + 1, kEmptyCode);
        for (int p = 1; p <= limit; ++p) {
            Coordinate c = column_wise ? Coordinate{line, p} : Coordinate{p, line};
            codes[static_cast<std::size_t>(p)] = type_code(ws.find(c), evaluated);
        }
        std::vector<int> positions;
        flag_line(codes, limit, positions);
        for (int p : positions) {
            if (!include_border && (p <= 5 || p > limit - 5)) continue;
            flagged.insert(column_wise ? Coordinate{line, p} : Coordinate{p, line});
        }
    }
    return flagged;
}

} // namespace

std::vector<Coordinate> baseline_pattern_finder(const Worksheet& ws,
                                                const PatternFinderVariant& variant) {
    std::set<Coordinate> result;
    switch (variant.orientation) {
    case PatternFinderVariant::Axis::Column:
        result = pattern_finder_axis(ws, true, variant.include_border, variant.evaluated_types);
        break;
    case PatternFinderVariant::Axis::Row:
        result = pattern_finder_axis(ws, false, variant.include_border, variant.evaluated_types);
        break;
    case PatternFinderVariant::Axis::Combined: {
        std::set<Coordinate> cols =
            pattern_finder_axis(ws, true, variant.include_border, variant.evaluated_types);
        std::set<Coordinate> rows =
            pattern_finder_axis(ws, false, variant.include_border, variant.evaluated_types);
        std::set_intersection(cols.begin(), cols.end(), rows.begin(), rows.end(),
                              std::inserter(result, result.begin()));
        break;
    }
    }
    return {result.begin(), result.end()};
}

// --- calculation chains ---------------------------------------------------------

CellChains compute_cell_chains(const Workbook& wb, const CancelToken* cancel) {
    CellChains chains;
    std::map<SheetCoord, int> state; // 1 on stack, 2 done

    struct Frame {
        SheetCoord pos;
        std::vector<SheetCoord> targets;
        std::size_t next = 0;
        int best = -1; // -1 until a child contributes
    };

    auto formula_at = [&](const SheetCoord& pos) -> const Cell* {
        const Worksheet* ws = wb.sheet(pos.sheet);
        const Cell* cell = ws ? ws->find(pos.coord) : nullptr;
        return cell && cell->type == CellType::Formula ? cell : nullptr;
    };
    auto targets_of = [&](const Cell& cell) {
        std::vector<SheetCoord> out;
        try {
            auto refs = referenced_cells(wb, cell);
            out.assign(refs.begin(), refs.end());
        } catch (const RefError&) {
            // unresolved references contribute nothing to the chain
        }
        return out;
    };

    std::vector<Frame> stack;
    for (const Worksheet& ws : wb.sheets) {
        for (const auto& [coord, cell] : ws.cells) {
            if (cell.type != CellType::Formula) continue;
            SheetCoord start{ws.name, coord};
            if (state.count(start)) continue;

            state[start] = 1;
            stack.push_back({start, targets_of(cell)});
            while (!stack.empty()) {
                check_cancel(cancel);
                Frame& frame = stack.back();
                if (frame.next >= frame.targets.size()) {
                    int value = frame.targets.empty() ? 0 : 1 + std::max(frame.best, 0);
                    chains.length[frame.pos] = value;
                    state[frame.pos] = 2;
                    stack.pop_back();
                    if (!stack.empty())
                        stack.back().best = std::max(stack.back().best, value);
                    continue;
                }
                SheetCoord child = frame.targets[frame.next++];
                const Cell* child_cell = formula_at(child);
                if (!child_cell) {
                    frame.best = std::max(frame.best, 0);
                    continue;
                }
                auto it = state.find(child);
                if (it != state.end()) {
                    if (it->second == 1) {
                        chains.cycle = true; // back edge contributes 0
                        frame.best = std::max(frame.best, 0);
                    } else {
                        frame.best = std::max(frame.best, chains.length[child]);
                    }
                    continue;
                }
                state[child] = 1;
                stack.push_back({child, targets_of(*child_cell)});
            }
        }
    }
    return chains;
}

int baseline_chain_length(const Workbook& wb, const Cell& cell) {
    if (cell.type != CellType::Formula) return 0;
    CellChains chains = compute_cell_chains(wb);
    auto it = chains.length.find(SheetCoord{cell.sheet, cell.coord});
    return it == chains.length.end() ? 0 : it->second;
}

int baseline_feature_envy(const Workbook& wb, const Worksheet& ws) {
    int count = 0;
    for (const auto& [coord, cell] : ws.cells) {
        if (cell.type != CellType::Formula || !cell.formula) continue;
        for (const CellReference& r : cell.formula->cell_refs)
            if (r.sheet && *r.sheet != ws.name && wb.sheet(*r.sheet)) count++;
        for (const AreaReference& r : cell.formula->area_refs)
            if (r.sheet && *r.sheet != ws.name && wb.sheet(*r.sheet)) count++;
    }
    return count;
}

// --- structure-refined detectors -------------------------------------------------

std::vector<const ReferenceGroup*> group_pattern_finder(const StructureModel& model,
                                                        const WorksheetModel& wsm,
                                                        bool evaluated) {
    std::vector<const ReferenceGroup*> afflicted;
    const Worksheet* ws = model.workbook ? model.workbook->sheet(wsm.name) : nullptr;
    if (!ws) return afflicted;
    for (const ReferenceGroup& rg : wsm.merged_reference_groups) {
        std::set<int> codes;
        for (const Coordinate& c : rg.cells) codes.insert(type_code(ws->find(c), evaluated));
        if (codes.size() >= 2) afflicted.push_back(&rg);
    }
    return afflicted;
}

namespace {

std::string pfg_display(const PartitionedFormulaGroup& g) {
    return g.sheet + "!" + group_range_string(g.cells);
}

std::string ref_group_display(const ReferenceGroup& g) {
    return g.sheet + "!" + group_range_string(g.cells);
}

/// Leading reference group for a chain witness: the one with the smallest
/// display position.
const ReferenceGroup* leading_reference_group(const PartitionedFormulaGroup& g) {
    const ReferenceGroup* best = nullptr;
    for (const ReferenceGroup& rg : g.reference_groups) {
        if (!best) {
            best = &rg;
            continue;
        }
        auto key = [](const ReferenceGroup& r) {
            return std::make_tuple(r.sheet, r.cells.front(), r.cells.back());
        };
        if (key(rg) < key(*best)) best = &rg;
    }
    return best;
}

} // namespace

GroupChains compute_group_chains(const StructureModel& model, const CancelToken* cancel) {
    GroupChains chains;
    std::map<std::string, int> state;

    struct Frame {
        const PartitionedFormulaGroup* group;
        std::size_t next = 0;
        int best = -1;
        std::string best_witness;
    };

    std::vector<Frame> stack;
    for (const WorksheetModel& wsm : model.sheets) {
        for (const PartitionedFormulaGroup& pfg : wsm.formula_groups) {
            if (state.count(pfg.id)) continue;
            state[pfg.id] = 1;
            stack.push_back({&pfg, 0, -1, {}});
            while (!stack.empty()) {
                check_cancel(cancel);
                Frame& frame = stack.back();
                const PartitionedFormulaGroup& g = *frame.group;
                if (frame.next >= g.referred_pfgs.size()) {
                    int value;
                    std::string witness;
                    if (!g.referred_pfgs.empty()) {
                        value = 1 + std::max(frame.best, 0);
                        witness = frame.best_witness.empty()
                                      ? pfg_display(g)
                                      : frame.best_witness + " -> " + pfg_display(g);
                    } else if (!g.reference_groups.empty()) {
                        value = 1;
                        const ReferenceGroup* lead = leading_reference_group(g);
                        witness = ref_group_display(*lead) + " -> " + pfg_display(g);
                    } else {
                        value = 0;
                        witness = pfg_display(g);
                    }
                    chains.length[g.id] = value;
                    chains.witness[g.id] = witness;
                    state[g.id] = 2;
                    stack.pop_back();
                    if (!stack.empty()) {
                        Frame& parent = stack.back();
                        if (value > parent.best) {
                            parent.best = value;
                            parent.best_witness = witness;
                        }
                    }
                    continue;
                }
                const std::string& child_id = g.referred_pfgs[frame.next++];
                auto it = state.find(child_id);
                if (it != state.end()) {
                    if (it->second == 1) {
                        chains.cycle = true; // back edge on the recursion path
                        if (frame.best < 0) frame.best = 0;
                    } else if (chains.length[child_id] > frame.best) {
                        frame.best = chains.length[child_id];
                        frame.best_witness = chains.witness[child_id];
                    }
                    continue;
                }
                const PartitionedFormulaGroup* child = model.find_pfg(child_id);
                if (!child) continue;
                state[child_id] = 1;
                stack.push_back({child, 0, -1, {}});
            }
        }
    }
    return chains;
}

int group_longest_chain(const StructureModel& model, const PartitionedFormulaGroup& g) {
    GroupChains chains = compute_group_chains(model);
    auto it = chains.length.find(g.id);
    return it == chains.length.end() ? 0 : it->second;
}

int group_feature_envy(const StructureModel&, const WorksheetModel& wsm) {
    int count = 0;
    for (const PartitionedFormulaGroup& pfg : wsm.formula_groups)
        for (const ReferenceGroup& rg : pfg.reference_groups)
            if (rg.sheet != wsm.name) count++;
    return count;
}

int overburdened_worksheet(const WorksheetModel& wsm, OverburdenedMetric metric) {
    if (metric == OverburdenedMetric::Blocks) return static_cast<int>(wsm.blocks.size());
    int formula_group_count = 0;
    for (const TypeBasedGroup& g : wsm.type_groups)
        if (g.type == CellType::Formula) formula_group_count++;
    return formula_group_count;
}

std::vector<InconsistentReference> inconsistent_group_references(const StructureModel& model) {
    // cell -> owning partitioned formula group, per sheet
    std::map<std::string, std::map<Coordinate, const PartitionedFormulaGroup*>> owner;
    for (const WorksheetModel& wsm : model.sheets)
        for (const PartitionedFormulaGroup& pfg : wsm.formula_groups)
            for (const Coordinate& c : pfg.cells) owner[wsm.name][c] = &pfg;

    std::vector<InconsistentReference> out;
    for (const WorksheetModel& wsm : model.sheets) {
        for (const PartitionedFormulaGroup& g : wsm.formula_groups) {
            struct Hit {
                bool equal = false;
                bool strict_subset = false;
            };
            std::map<std::string, Hit> hits;
            for (const ReferenceGroup& rg : g.reference_groups) {
                auto sheet_owner = owner.find(rg.sheet);
                if (sheet_owner == owner.end()) continue;
                const PartitionedFormulaGroup* target = nullptr;
                bool all_in_one = true;
                for (const Coordinate& c : rg.cells) {
                    auto it = sheet_owner->second.find(c);
                    const PartitionedFormulaGroup* t = it == sheet_owner->second.end()
                                                           ? nullptr
                                                           : it->second;
                    if (!t || (target && t != target)) {
                        all_in_one = false;
                        break;
                    }
                    target = t;
                }
                if (!all_in_one || !target || target->id == g.id) continue;
                Hit& hit = hits[target->id];
                if (rg.cells.size() == target->cells.size())
                    hit.equal = true; // identical cell sets: a consistent reference
                else
                    hit.strict_subset = true;
            }
            for (const auto& [target_id, hit] : hits)
                if (hit.strict_subset && !hit.equal) out.push_back({g.id, target_id});
        }
    }
    std::sort(out.begin(), out.end(), [](const InconsistentReference& a,
                                         const InconsistentReference& b) {
        if (a.pfg_id != b.pfg_id) return a.pfg_id < b.pfg_id;
        return a.target_pfg_id < b.target_pfg_id;
    });
    return out;
}

std::vector<Coordinate> missing_headers(const StructureModel& model, const Block& block) {
    std::set<Coordinate> missing;
    const WorksheetModel* wsm = model.sheet(block.sheet);
    const Worksheet* ws = model.workbook ? model.workbook->sheet(block.sheet) : nullptr;
    if (!wsm || !ws) return {};
    for (const HeaderLayer& layer : wsm->layers) {
        if (layer.block_id != block.id) continue;
        for (const Coordinate& c : layer.cells)
            if (ws->type_at(c) == CellType::Empty) missing.insert(c);
    }
    return {missing.begin(), missing.end()};
}

} // namespace sheetlint
