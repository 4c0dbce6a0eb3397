#include "sheetlint/structure.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <unordered_map>

namespace sheetlint {

std::string_view orientation_name(Orientation o) {
    switch (o) {
    case Orientation::Row: return "row";
    case Orientation::Column: return "column";
    case Orientation::Singleton: return "singleton";
    case Orientation::Rect: return "rect";
    }
    return "singleton";
}

std::string group_range_string(const std::vector<Coordinate>& cells) {
    assert(!cells.empty());
    Coordinate lo = cells.front(), hi = cells.front();
    for (const Coordinate& c : cells) {
        lo.col = std::min(lo.col, c.col);
        lo.row = std::min(lo.row, c.row);
        hi.col = std::max(hi.col, c.col);
        hi.row = std::max(hi.row, c.row);
    }
    return range_to_string(lo, hi);
}

namespace {

Orientation classify_orientation(const std::vector<Coordinate>& cells) {
    if (cells.size() == 1) return Orientation::Singleton;
    bool same_col = true, same_row = true;
    for (const Coordinate& c : cells) {
        same_col = same_col && c.col == cells.front().col;
        same_row = same_row && c.row == cells.front().row;
    }
    if (same_col) return Orientation::Column;
    if (same_row) return Orientation::Row;
    return Orientation::Rect;
}

std::string make_group_id(char tag, const std::string& sheet,
                          const std::vector<Coordinate>& cells) {
    return std::string(1, tag) + ":" + sheet + "!" + group_range_string(cells);
}

} // namespace

std::vector<TypeBasedGroup> type_based_groups(const Worksheet& ws) {
    std::vector<TypeBasedGroup> groups;
    std::set<Coordinate> visited;

    auto formula_text = [](const Cell& cell) -> std::string {
        return cell.formula ? cell.formula->r1c1_text : std::string();
    };

    for (const auto& [coord, cell] : ws.cells) {
        if (visited.count(coord)) continue;
        const CellType type = cell.type;
        const std::string key = type == CellType::Formula ? formula_text(cell) : std::string();

        TypeBasedGroup g;
        g.sheet = ws.name;
        g.type = type;
        if (type == CellType::Formula) g.formula_r1c1 = key;

        // flood fill over same-type (and same-formula) neighbors
        std::deque<Coordinate> frontier{coord};
        visited.insert(coord);
        std::set<Coordinate> members;
        while (!frontier.empty()) {
            Coordinate cur = frontier.front();
            frontier.pop_front();
            members.insert(cur);
            for (const Coordinate& n : neighbors(cur)) {
                if (visited.count(n)) continue;
                const Cell* other = ws.find(n);
                if (!other || other->type != type) continue;
                if (type == CellType::Formula && formula_text(*other) != key) continue;
                visited.insert(n);
                frontier.push_back(n);
            }
        }
        g.cells.assign(members.begin(), members.end());
        g.id = make_group_id('t', ws.name, g.cells);
        groups.push_back(std::move(g));
    }

    std::sort(groups.begin(), groups.end(),
              [](const TypeBasedGroup& a, const TypeBasedGroup& b) {
                  return a.cells.front() < b.cells.front();
              });
    return groups;
}

std::vector<TypeBasedGroup> formula_groups(const Worksheet& ws) {
    std::vector<TypeBasedGroup> out;
    for (TypeBasedGroup& g : type_based_groups(ws))
        if (g.type == CellType::Formula) out.push_back(std::move(g));
    return out;
}

std::vector<PartitionedFormulaGroup> partition_formula_group(const TypeBasedGroup& g) {
    assert(g.type == CellType::Formula);

    auto runs_along = [&](bool column_wise) {
        // maximal contiguous runs per line of the chosen axis
        std::map<int, std::vector<int>> lines; // fixed index -> positions
        for (const Coordinate& c : g.cells) {
            if (column_wise)
                lines[c.col].push_back(c.row);
            else
                lines[c.row].push_back(c.col);
        }
        std::vector<std::vector<Coordinate>> runs;
        for (auto& [line, positions] : lines) {
            std::sort(positions.begin(), positions.end());
            std::vector<Coordinate> run;
            for (std::size_t i = 0; i < positions.size(); ++i) {
                if (!run.empty() && positions[i] != positions[i - 1] + 1) {
                    runs.push_back(std::move(run));
                    run.clear();
                }
                run.push_back(column_wise ? Coordinate{line, positions[i]}
                                          : Coordinate{positions[i], line});
            }
            if (!run.empty()) runs.push_back(std::move(run));
        }
        return runs;
    };

    Orientation base = classify_orientation(g.cells);
    std::vector<std::vector<Coordinate>> parts;
    if (base == Orientation::Singleton || base == Orientation::Column ||
        base == Orientation::Row) {
        parts.push_back(g.cells); // one-dimensional input passes through
    } else {
        auto column_runs = runs_along(true);
        auto row_runs = runs_along(false);
        // fewest partitions wins; ties go to column orientation
        parts = column_runs.size() <= row_runs.size() ? std::move(column_runs)
                                                      : std::move(row_runs);
    }

    std::vector<PartitionedFormulaGroup> out;
    for (std::vector<Coordinate>& cells : parts) {
        PartitionedFormulaGroup pfg;
        pfg.sheet = g.sheet;
        pfg.cells = std::move(cells);
        std::sort(pfg.cells.begin(), pfg.cells.end());
        pfg.orientation = classify_orientation(pfg.cells);
        pfg.formula_r1c1 = g.formula_r1c1.value_or("");
        pfg.id = make_group_id('g', g.sheet, pfg.cells);
        out.push_back(std::move(pfg));
    }
    std::sort(out.begin(), out.end(),
              [](const PartitionedFormulaGroup& a, const PartitionedFormulaGroup& b) {
                  return a.cells.front() < b.cells.front();
              });
    return out;
}

// --- model construction -------------------------------------------------------

namespace {

struct ModelBuilder {
    const Workbook& wb;
    const CancelToken* cancel;
    StructureModel model;
    std::map<std::string, std::pair<std::size_t, std::size_t>> pfg_index; // id -> (sheet, pfg)
    std::vector<std::map<Coordinate, std::size_t>> cell_to_pfg; // per sheet
    std::set<std::string> warning_set;

    explicit ModelBuilder(const Workbook& workbook, const CancelToken* token)
        : wb(workbook), cancel(token) {}

    void warn(std::string message) {
        if (warning_set.insert(message).second) model.warnings.push_back(std::move(message));
    }

    void run() {
        model.workbook = &wb;
        model.sheets.resize(wb.sheets.size());
        cell_to_pfg.resize(wb.sheets.size());
        for (const std::string& w : wb.load_warnings) warn(w);

        build_groups();
        build_reference_groups();
        build_referred_edges();
        build_merged_groups();
        build_non_blockables();
        build_blocks();
        build_layers();
        assign_meta_headers();
        detect_group_cycles();
        detect_cell_cycles();
    }

    void build_groups() {
        for (std::size_t si = 0; si < wb.sheets.size(); ++si) {
            check_cancel(cancel);
            const Worksheet& ws = wb.sheets[si];
            WorksheetModel& wsm = model.sheets[si];
            wsm.name = ws.name;
            wsm.type_groups = type_based_groups(ws);
            for (const TypeBasedGroup& g : wsm.type_groups) {
                if (g.type != CellType::Formula) continue;
                for (PartitionedFormulaGroup& pfg : partition_formula_group(g)) {
                    const Cell* sample = ws.find(pfg.cells.front());
                    pfg.formula = sample ? sample->formula.get() : nullptr;
                    wsm.formula_groups.push_back(std::move(pfg));
                }
            }
            std::sort(wsm.formula_groups.begin(), wsm.formula_groups.end(),
                      [](const PartitionedFormulaGroup& a, const PartitionedFormulaGroup& b) {
                          return a.cells.front() < b.cells.front();
                      });
            for (std::size_t gi = 0; gi < wsm.formula_groups.size(); ++gi) {
                pfg_index[wsm.formula_groups[gi].id] = {si, gi};
                for (const Coordinate& c : wsm.formula_groups[gi].cells)
                    cell_to_pfg[si][c] = gi;
            }
        }
    }

    void build_reference_groups() {
        for (std::size_t si = 0; si < wb.sheets.size(); ++si) {
            for (PartitionedFormulaGroup& pfg : model.sheets[si].formula_groups) {
                check_cancel(cancel);
                if (!pfg.formula) continue;
                const Formula& f = *pfg.formula;
                int slot = 0;
                for (const Token& tok : f.tokens) {
                    if (tok.kind == Token::Kind::CellRef) {
                        add_cell_ref_group(pfg, f.cell_refs[static_cast<std::size_t>(tok.ref_index)], slot);
                        slot++;
                    } else if (tok.kind == Token::Kind::AreaRef) {
                        add_area_ref_groups(pfg, f.area_refs[static_cast<std::size_t>(tok.ref_index)], slot);
                        slot++;
                    }
                }
            }
        }
    }

    void add_cell_ref_group(PartitionedFormulaGroup& pfg, const CellReference& r, int slot) {
        std::set<Coordinate> targets;
        std::string target_sheet;
        for (const Coordinate& origin : pfg.cells) {
            try {
                SheetCoord sc = deref_cell(wb, r, SheetPos{pfg.sheet, origin});
                target_sheet = sc.sheet;
                targets.insert(sc.coord);
            } catch (const RefError& e) {
                warn("unresolved reference in " + pfg.sheet + "!" + to_a1(origin) + ": " + e.what());
                return;
            }
        }
        if (targets.empty()) return;
        ReferenceGroup g;
        g.sheet = target_sheet;
        g.cells.assign(targets.begin(), targets.end());
        g.orientation = classify_orientation(g.cells);
        g.provenance = {Provenance{pfg.id, slot}};
        g.id = pfg.id + "/ref" + std::to_string(slot);
        pfg.reference_groups.push_back(std::move(g));
    }

    void add_area_ref_groups(PartitionedFormulaGroup& pfg, const AreaReference& r, int slot) {
        // one group per referring cell
        for (const Coordinate& origin : pfg.cells) {
            std::vector<SheetCoord> targets;
            try {
                targets = deref_area(wb, r, SheetPos{pfg.sheet, origin});
            } catch (const RefError& e) {
                warn("unresolved reference in " + pfg.sheet + "!" + to_a1(origin) + ": " + e.what());
                continue;
            }
            if (targets.empty()) continue;
            ReferenceGroup g;
            g.sheet = targets.front().sheet;
            for (SheetCoord& sc : targets) g.cells.push_back(sc.coord);
            std::sort(g.cells.begin(), g.cells.end());
            g.cells.erase(std::unique(g.cells.begin(), g.cells.end()), g.cells.end());
            g.orientation = classify_orientation(g.cells);
            g.provenance = {Provenance{pfg.id, slot}};
            g.id = pfg.id + "/ref" + std::to_string(slot) + "@" + to_a1(origin);
            pfg.reference_groups.push_back(std::move(g));
        }
    }

    void build_referred_edges() {
        for (std::size_t si = 0; si < wb.sheets.size(); ++si) {
            for (PartitionedFormulaGroup& pfg : model.sheets[si].formula_groups) {
                check_cancel(cancel);
                std::set<std::string> referred;
                for (const ReferenceGroup& rg : pfg.reference_groups) {
                    const Worksheet* target_ws = wb.sheet(rg.sheet);
                    if (!target_ws) continue;
                    std::size_t ti = static_cast<std::size_t>(target_ws - wb.sheets.data());
                    for (const Coordinate& c : rg.cells) {
                        auto it = cell_to_pfg[ti].find(c);
                        if (it == cell_to_pfg[ti].end()) continue;
                        const std::string& id = model.sheets[ti].formula_groups[it->second].id;
                        if (id != pfg.id) referred.insert(id);
                    }
                }
                pfg.referred_pfgs.assign(referred.begin(), referred.end());
            }
        }
    }

    struct Draft {
        Orientation orientation;
        std::vector<Coordinate> cells;
        std::vector<Provenance> provenance;
    };

    void build_merged_groups() {
        // gather raw groups per target sheet, workbook-wide
        std::map<std::string, std::vector<const ReferenceGroup*>> by_sheet;
        for (const WorksheetModel& wsm : model.sheets)
            for (const PartitionedFormulaGroup& pfg : wsm.formula_groups)
                for (const ReferenceGroup& rg : pfg.reference_groups)
                    by_sheet[rg.sheet].push_back(&rg);

        for (std::size_t si = 0; si < wb.sheets.size(); ++si) {
            check_cancel(cancel);
            auto it = by_sheet.find(wb.sheets[si].name);
            if (it == by_sheet.end()) continue;
            model.sheets[si].merged_reference_groups = merge_groups(it->second, wb.sheets[si].name);
        }
    }

    std::vector<ReferenceGroup> merge_groups(const std::vector<const ReferenceGroup*>& raw,
                                             const std::string& sheet) {
        struct Interval {
            int line; // column index for column-oriented, row index for row-oriented
            int lo, hi;
            std::vector<Provenance> provenance;
            bool directional; // contains a group that is genuinely Row/Column
        };

        std::vector<Interval> column_side, row_pool;
        std::map<std::vector<Coordinate>, Draft> rects;
        std::vector<Interval> singletons;

        for (const ReferenceGroup* g : raw) {
            switch (g->orientation) {
            case Orientation::Column:
                column_side.push_back({g->cells.front().col, g->cells.front().row,
                                       g->cells.back().row, g->provenance, true});
                break;
            case Orientation::Row:
                row_pool.push_back({g->cells.front().row, g->cells.front().col,
                                    g->cells.back().col, g->provenance, true});
                break;
            case Orientation::Singleton:
                singletons.push_back({g->cells.front().col, g->cells.front().row,
                                      g->cells.front().row, g->provenance, false});
                break;
            case Orientation::Rect: {
                Draft& d = rects[g->cells];
                d.orientation = Orientation::Rect;
                d.cells = g->cells;
                d.provenance.insert(d.provenance.end(), g->provenance.begin(),
                                    g->provenance.end());
                break;
            }
            }
        }

        // Column pass first: singletons are orientation-compatible with both
        // axes, so a singleton merges into an overlapping column run before
        // the row pass sees it.
        auto sweep = [&](std::vector<Interval> intervals, bool column_wise,
                         std::vector<Interval>& leftover_singletons) {
            std::vector<Draft> merged;
            std::map<int, std::vector<Interval>> lines;
            for (Interval& iv : intervals) lines[iv.line].push_back(iv);
            for (auto& [line, ivs] : lines) {
                std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
                    if (a.lo != b.lo) return a.lo < b.lo;
                    return a.hi < b.hi;
                });
                std::size_t i = 0;
                while (i < ivs.size()) {
                    Interval cur = ivs[i++];
                    while (i < ivs.size() && ivs[i].lo <= cur.hi) {
                        cur.hi = std::max(cur.hi, ivs[i].hi);
                        cur.directional = cur.directional || ivs[i].directional;
                        cur.provenance.insert(cur.provenance.end(), ivs[i].provenance.begin(),
                                              ivs[i].provenance.end());
                        i++;
                    }
                    if (!cur.directional && cur.lo == cur.hi) {
                        leftover_singletons.push_back(cur);
                        continue;
                    }
                    Draft d;
                    d.orientation = cur.lo == cur.hi
                                        ? Orientation::Singleton
                                        : (column_wise ? Orientation::Column : Orientation::Row);
                    for (int p = cur.lo; p <= cur.hi; ++p)
                        d.cells.push_back(column_wise ? Coordinate{line, p} : Coordinate{p, line});
                    std::sort(d.cells.begin(), d.cells.end());
                    d.provenance = std::move(cur.provenance);
                    merged.push_back(std::move(d));
                }
            }
            return merged;
        };

        std::vector<Interval> column_input = std::move(column_side);
        for (Interval& s : singletons) column_input.push_back(std::move(s));
        std::vector<Interval> deferred;
        std::vector<Draft> merged = sweep(std::move(column_input), true, deferred);

        // move deferred singletons into the row pass (line = row, span = col)
        for (Interval& s : deferred)
            row_pool.push_back({s.hi, s.line, s.line, std::move(s.provenance), false});
        std::vector<Interval> leftover;
        for (Draft& d : sweep(std::move(row_pool), false, leftover)) merged.push_back(std::move(d));
        for (Interval& s : leftover) {
            // row-pass convention: line = row, lo = column
            Draft d;
            d.orientation = Orientation::Singleton;
            d.cells = {Coordinate{s.lo, s.line}};
            d.provenance = std::move(s.provenance);
            merged.push_back(std::move(d));
        }
        for (auto& [cells, d] : rects) merged.push_back(std::move(d));

        std::vector<ReferenceGroup> out;
        for (Draft& d : merged) {
            ReferenceGroup g;
            g.sheet = sheet;
            g.orientation = d.orientation;
            g.cells = std::move(d.cells);
            g.provenance = std::move(d.provenance);
            std::sort(g.provenance.begin(), g.provenance.end());
            g.provenance.erase(std::unique(g.provenance.begin(), g.provenance.end()),
                               g.provenance.end());
            out.push_back(std::move(g));
        }
        std::sort(out.begin(), out.end(), [](const ReferenceGroup& a, const ReferenceGroup& b) {
            if (!(a.cells.front() == b.cells.front())) return a.cells.front() < b.cells.front();
            if (!(a.cells.back() == b.cells.back())) return a.cells.back() < b.cells.back();
            return a.orientation < b.orientation;
        });
        for (ReferenceGroup& g : out) g.id = make_group_id('r', sheet, g.cells);
        return out;
    }

    void build_non_blockables() {
        for (std::size_t si = 0; si < wb.sheets.size(); ++si) {
            check_cancel(cancel);
            const Worksheet& ws = wb.sheets[si];
            WorksheetModel& wsm = model.sheets[si];
            std::set<Coordinate> grouped;
            for (const PartitionedFormulaGroup& pfg : wsm.formula_groups)
                grouped.insert(pfg.cells.begin(), pfg.cells.end());
            for (const ReferenceGroup& rg : wsm.merged_reference_groups)
                grouped.insert(rg.cells.begin(), rg.cells.end());
            for (const auto& [coord, cell] : ws.cells)
                if (!grouped.count(coord)) wsm.non_blockable.insert(coord);
        }
    }

    struct BlockEntry {
        const std::string* id;
        const std::vector<Coordinate>* cells;
        int kind_rank; // partitioned formula groups before reference groups
    };

    static bool rect_contains_non_blockable(const std::set<Coordinate>& nb, Coordinate lo,
                                            Coordinate hi) {
        for (auto it = nb.lower_bound(Coordinate{lo.col, lo.row}); it != nb.end(); ++it) {
            if (it->row > hi.row) break;
            if (it->row >= lo.row && it->col >= lo.col && it->col <= hi.col) return true;
        }
        return false;
    }

    void build_blocks() {
        for (std::size_t si = 0; si < wb.sheets.size(); ++si) {
            check_cancel(cancel);
            WorksheetModel& wsm = model.sheets[si];

            std::vector<BlockEntry> entries;
            for (const PartitionedFormulaGroup& pfg : wsm.formula_groups)
                entries.push_back({&pfg.id, &pfg.cells, 0});
            for (const ReferenceGroup& rg : wsm.merged_reference_groups)
                entries.push_back({&rg.id, &rg.cells, 1});

            auto rect_of = [](const std::vector<Coordinate>& cells) {
                Coordinate lo = cells.front(), hi = cells.front();
                for (const Coordinate& c : cells) {
                    lo.col = std::min(lo.col, c.col);
                    lo.row = std::min(lo.row, c.row);
                    hi.col = std::max(hi.col, c.col);
                    hi.row = std::max(hi.row, c.row);
                }
                return std::make_pair(lo, hi);
            };

            // deterministic iteration: row-major by top-left corner
            std::sort(entries.begin(), entries.end(), [&](const BlockEntry& a, const BlockEntry& b) {
                auto [alo, ahi] = rect_of(*a.cells);
                auto [blo, bhi] = rect_of(*b.cells);
                if (!(alo == blo)) return alo < blo;
                if (!(ahi == bhi)) return ahi < bhi;
                if (a.kind_rank != b.kind_rank) return a.kind_rank < b.kind_rank;
                return *a.id < *b.id;
            });

            std::vector<bool> consumed(entries.size(), false);
            for (std::size_t seed = 0; seed < entries.size(); ++seed) {
                if (consumed[seed]) continue;
                check_cancel(cancel);
                consumed[seed] = true;

                std::map<int, std::set<int>> rows_cols, cols_rows; // block cell index
                Coordinate lo = (*entries[seed].cells).front(), hi = lo;
                std::set<std::string> members{*entries[seed].id};
                auto absorb = [&](const std::vector<Coordinate>& cells) {
                    for (const Coordinate& c : cells) {
                        rows_cols[c.row].insert(c.col);
                        cols_rows[c.col].insert(c.row);
                        lo.col = std::min(lo.col, c.col);
                        lo.row = std::min(lo.row, c.row);
                        hi.col = std::max(hi.col, c.col);
                        hi.row = std::max(hi.row, c.row);
                    }
                };
                absorb(*entries[seed].cells);

                auto near_in = [](const std::set<int>& values, int v) {
                    auto it = values.lower_bound(v - 2);
                    return it != values.end() && *it <= v + 2;
                };
                auto is_neighbor = [&](const std::vector<Coordinate>& cells) {
                    for (const Coordinate& c : cells) {
                        auto row_it = rows_cols.find(c.row);
                        if (row_it != rows_cols.end() && near_in(row_it->second, c.col)) return true;
                        auto col_it = cols_rows.find(c.col);
                        if (col_it != cols_rows.end() && near_in(col_it->second, c.row)) return true;
                    }
                    return false;
                };

                for (std::size_t i = 0; i < entries.size(); ++i) {
                    if (i == seed || members.count(*entries[i].id)) continue;
                    check_cancel(cancel);
                    if (!is_neighbor(*entries[i].cells)) continue;
                    auto [glo, ghi] = rect_of(*entries[i].cells);
                    Coordinate nlo{std::min(lo.col, glo.col), std::min(lo.row, glo.row)};
                    Coordinate nhi{std::max(hi.col, ghi.col), std::max(hi.row, ghi.row)};
                    if (rect_contains_non_blockable(wsm.non_blockable, nlo, nhi)) continue;
                    absorb(*entries[i].cells);
                    members.insert(*entries[i].id);
                    consumed[i] = true;
                }

                Block b;
                b.sheet = wsm.name;
                b.top_left = lo;
                b.bottom_right = hi;
                b.member_ids.assign(members.begin(), members.end());
                b.id = "b:" + wsm.name + "!" + range_to_string(lo, hi);
                wsm.blocks.push_back(std::move(b));
            }

            std::sort(wsm.blocks.begin(), wsm.blocks.end(), [](const Block& a, const Block& b) {
                if (!(a.top_left == b.top_left)) return a.top_left < b.top_left;
                return a.bottom_right < b.bottom_right;
            });
        }
    }

    void build_layers() {
        for (WorksheetModel& wsm : model.sheets) {
            check_cancel(cancel);
            auto intersects_other_block = [&](const Block& self, Coordinate lo, Coordinate hi) {
                for (const Block& other : wsm.blocks) {
                    if (other.id == self.id) continue;
                    bool overlap = !(hi.col < other.top_left.col || lo.col > other.bottom_right.col ||
                                     hi.row < other.top_left.row || lo.row > other.bottom_right.row);
                    if (overlap) return true;
                }
                return false;
            };
            auto strip_has_non_blockable = [&](Coordinate lo, Coordinate hi) {
                return rect_contains_non_blockable(wsm.non_blockable, lo, hi);
            };

            for (const Block& b : wsm.blocks) {
                int level = 1;
                for (int row = b.top_left.row - 1; row >= 1; --row, ++level) {
                    Coordinate lo{b.top_left.col, row}, hi{b.bottom_right.col, row};
                    if (intersects_other_block(b, lo, hi)) break;
                    if (!strip_has_non_blockable(lo, hi)) break;
                    HeaderLayer layer;
                    layer.block_id = b.id;
                    layer.kind = LayerKind::ColumnLayer;
                    layer.level = level;
                    for (int col = lo.col; col <= hi.col; ++col) layer.cells.push_back({col, row});
                    layer.id = b.id + "/col" + std::to_string(level);
                    wsm.layers.push_back(std::move(layer));
                }
                level = 1;
                for (int col = b.top_left.col - 1; col >= 1; --col, ++level) {
                    Coordinate lo{col, b.top_left.row}, hi{col, b.bottom_right.row};
                    if (intersects_other_block(b, lo, hi)) break;
                    if (!strip_has_non_blockable(lo, hi)) break;
                    HeaderLayer layer;
                    layer.block_id = b.id;
                    layer.kind = LayerKind::RowLayer;
                    layer.level = level;
                    for (int row = lo.row; row <= hi.row; ++row) layer.cells.push_back({col, row});
                    layer.id = b.id + "/row" + std::to_string(level);
                    wsm.layers.push_back(std::move(layer));
                }
            }
        }
    }

    void assign_meta_headers() {
        for (WorksheetModel& wsm : model.sheets) {
            check_cancel(cancel);
            std::set<Coordinate> in_layer;
            for (const HeaderLayer& layer : wsm.layers)
                in_layer.insert(layer.cells.begin(), layer.cells.end());

            for (const Coordinate& c : wsm.non_blockable) {
                if (in_layer.count(c)) continue;
                HeaderLayer* row_match = nullptr;
                HeaderLayer* col_match = nullptr;
                for (HeaderLayer& layer : wsm.layers) {
                    if (layer.kind == LayerKind::RowLayer) {
                        // directly above the layer's topmost cell
                        if (!row_match && c.col == layer.cells.front().col &&
                            c.row == layer.cells.front().row - 1)
                            row_match = &layer;
                    } else {
                        // directly left of the layer's leftmost cell
                        if (!col_match && c.row == layer.cells.front().row &&
                            c.col == layer.cells.front().col - 1)
                            col_match = &layer;
                    }
                }
                HeaderLayer* chosen = row_match ? row_match : col_match; // row layer wins ties
                if (chosen) {
                    if (!chosen->meta_header) chosen->meta_header = c;
                    wsm.meta_headers.push_back({c, chosen->id});
                } else {
                    wsm.unassigned_labels.push_back(c);
                }
            }
        }
    }

    void detect_group_cycles() {
        // DFS over the referred-formula-group graph
        std::map<std::string, int> state; // 0 unseen, 1 on stack, 2 done
        std::vector<std::pair<const PartitionedFormulaGroup*, std::size_t>> stack;

        auto find_group = [&](const std::string& id) -> const PartitionedFormulaGroup* {
            auto it = pfg_index.find(id);
            if (it == pfg_index.end()) return nullptr;
            return &model.sheets[it->second.first].formula_groups[it->second.second];
        };

        for (const WorksheetModel& wsm : model.sheets) {
            for (const PartitionedFormulaGroup& pfg : wsm.formula_groups) {
                if (state[pfg.id]) continue;
                stack.push_back({&pfg, 0});
                state[pfg.id] = 1;
                while (!stack.empty()) {
                    check_cancel(cancel);
                    auto& [cur, next] = stack.back();
                    if (next >= cur->referred_pfgs.size()) {
                        state[cur->id] = 2;
                        stack.pop_back();
                        continue;
                    }
                    const std::string& child_id = cur->referred_pfgs[next++];
                    int s = state[child_id];
                    if (s == 1) {
                        model.group_reference_cycle = true;
                        continue;
                    }
                    if (s == 2) continue;
                    const PartitionedFormulaGroup* child = find_group(child_id);
                    if (!child) continue;
                    state[child_id] = 1;
                    stack.push_back({child, 0});
                }
            }
        }
    }

    void detect_cell_cycles() {
        std::map<SheetCoord, int> state;
        struct Frame {
            SheetCoord pos;
            std::vector<SheetCoord> targets;
            std::size_t next = 0;
        };
        std::vector<Frame> stack;

        auto targets_of = [&](const SheetCoord& pos) {
            std::vector<SheetCoord> out;
            const Worksheet* ws = wb.sheet(pos.sheet);
            const Cell* cell = ws ? ws->find(pos.coord) : nullptr;
            if (!cell || cell->type != CellType::Formula) return out;
            try {
                auto refs = referenced_cells(wb, *cell);
                out.assign(refs.begin(), refs.end());
            } catch (const RefError&) {
                // unresolved references are already warned about
            }
            return out;
        };

        for (const Worksheet& ws : wb.sheets) {
            for (const auto& [coord, cell] : ws.cells) {
                if (cell.type != CellType::Formula) continue;
                SheetCoord start{ws.name, coord};
                if (state[start]) continue;
                state[start] = 1;
                stack.push_back({start, targets_of(start)});
                while (!stack.empty()) {
                    check_cancel(cancel);
                    Frame& frame = stack.back();
                    if (frame.next >= frame.targets.size()) {
                        state[frame.pos] = 2;
                        stack.pop_back();
                        continue;
                    }
                    SheetCoord child = frame.targets[frame.next++];
                    const Worksheet* cws = wb.sheet(child.sheet);
                    const Cell* ccell = cws ? cws->find(child.coord) : nullptr;
                    if (!ccell || ccell->type != CellType::Formula) continue;
                    int s = state[child];
                    if (s == 1) {
                        model.cell_reference_cycle = true;
                        continue;
                    }
                    if (s == 2) continue;
                    state[child] = 1;
                    stack.push_back({child, targets_of(child)});
                }
            }
        }
    }
};

} // namespace

StructureModel build_structure_model(const Workbook& wb, const CancelToken* cancel) {
    ModelBuilder builder(wb, cancel);
    builder.run();
    return std::move(builder.model);
}

const WorksheetModel* StructureModel::sheet(std::string_view name) const {
    for (const WorksheetModel& wsm : sheets)
        if (wsm.name == name) return &wsm;
    return nullptr;
}

const PartitionedFormulaGroup* StructureModel::find_pfg(std::string_view id) const {
    for (const WorksheetModel& wsm : sheets)
        for (const PartitionedFormulaGroup& pfg : wsm.formula_groups)
            if (pfg.id == id) return &pfg;
    return nullptr;
}

const PartitionedFormulaGroup* StructureModel::pfg_at(const SheetCoord& pos) const {
    const WorksheetModel* wsm = sheet(pos.sheet);
    if (!wsm) return nullptr;
    for (const PartitionedFormulaGroup& pfg : wsm->formula_groups)
        if (std::binary_search(pfg.cells.begin(), pfg.cells.end(), pos.coord))
            return &pfg;
    return nullptr;
}

std::vector<std::string> referred_formula_groups(const StructureModel&,
                                                 const PartitionedFormulaGroup& g) {
    return g.referred_pfgs;
}

const std::vector<ReferenceGroup>& reference_groups_of(const PartitionedFormulaGroup& g) {
    return g.reference_groups;
}

std::vector<ReferenceGroup> merged_reference_groups(const StructureModel& model,
                                                    std::string_view sheet) {
    const WorksheetModel* wsm = model.sheet(sheet);
    if (!wsm) return {};
    return wsm->merged_reference_groups;
}

const std::set<Coordinate>& non_blockables(const StructureModel& model, std::string_view sheet) {
    static const std::set<Coordinate> empty;
    const WorksheetModel* wsm = model.sheet(sheet);
    return wsm ? wsm->non_blockable : empty;
}

std::vector<Block> blocks(const StructureModel& model, std::string_view sheet) {
    const WorksheetModel* wsm = model.sheet(sheet);
    return wsm ? wsm->blocks : std::vector<Block>{};
}

std::vector<HeaderLayer> header_layers(const StructureModel& model, const Block& block) {
    std::vector<HeaderLayer> out;
    const WorksheetModel* wsm = model.sheet(block.sheet);
    if (!wsm) return out;
    for (const HeaderLayer& layer : wsm->layers)
        if (layer.block_id == block.id) out.push_back(layer);
    return out;
}

std::vector<MetaHeaderAssignment> assign_meta_headers(const StructureModel& model,
                                                      std::string_view sheet) {
    const WorksheetModel* wsm = model.sheet(sheet);
    return wsm ? wsm->meta_headers : std::vector<MetaHeaderAssignment>{};
}

bool is_block(const std::set<Coordinate>& cells, const std::set<Coordinate>& non_blockable) {
    if (cells.empty()) throw Error("empty cell set");
    auto [lo, hi] = bounding_rect(cells);
    for (auto it = non_blockable.lower_bound(Coordinate{lo.col, lo.row});
         it != non_blockable.end(); ++it) {
        if (it->row > hi.row) break;
        if (it->row >= lo.row && it->col >= lo.col && it->col <= hi.col) return false;
    }
    return true;
}

bool block_neighbor(const std::set<Coordinate>& block_cells,
                    const std::vector<Coordinate>& group_cells) {
    for (const Coordinate& g : group_cells)
        for (const Coordinate& b : block_cells) {
            if (g.row == b.row && std::abs(g.col - b.col) <= 2) return true;
            if (g.col == b.col && std::abs(g.row - b.row) <= 2) return true;
        }
    return false;
}

} // namespace sheetlint
