#include "sheetlint/report.hpp"
#include "sheetlint/structure.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace sheetlint;
using testsupport::cells_of;

namespace {

std::set<std::set<Coordinate>> group_cell_sets(const std::vector<TypeBasedGroup>& groups) {
    std::set<std::set<Coordinate>> out;
    for (const TypeBasedGroup& g : groups) out.insert({g.cells.begin(), g.cells.end()});
    return out;
}

std::set<std::set<Coordinate>> expected_sets(const std::vector<std::string>& specs) {
    std::set<std::set<Coordinate>> out;
    for (const std::string& spec : specs) out.insert(cells_of(spec));
    return out;
}

std::set<std::set<Coordinate>> ref_group_sets(const std::vector<ReferenceGroup>& groups) {
    std::set<std::set<Coordinate>> out;
    for (const ReferenceGroup& g : groups) out.insert({g.cells.begin(), g.cells.end()});
    return out;
}

} // namespace

TEST_CASE("type-based groups of the coffee planning workbook") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");

    CHECK(group_cell_sets(type_based_groups(*wb.sheet("Department1"))) ==
          expected_sets({"A1", "B2;A3:F3", "A4:E7", "F4:F7", "A8", "B8:F8"}));

    CHECK(group_cell_sets(type_based_groups(*wb.sheet("Total"))) ==
          expected_sets({"A1", "B2", "A3", "B3:D3", "E3", "A4:A7", "A8", "B4:B8", "C4:C8",
                         "D4:D8", "E4:E8"}));

    CHECK(group_cell_sets(type_based_groups(*wb.sheet("Investment"))) ==
          expected_sets({"A1:A5", "B3", "B4", "B5", "A7:A11;B8:E8", "B9:D11", "E9:E11"}));

    Worksheet empty;
    empty.name = "Empty";
    CHECK(type_based_groups(empty).empty());

    // partition property: disjoint cover of the non-empty cells
    for (const Worksheet& ws : wb.sheets) {
        std::set<Coordinate> covered;
        std::size_t total = 0;
        for (const TypeBasedGroup& g : type_based_groups(ws)) {
            total += g.cells.size();
            covered.insert(g.cells.begin(), g.cells.end());
        }
        CHECK(total == ws.cells.size());
        CHECK(covered.size() == ws.cells.size());
    }
}

TEST_CASE("formula groups of the coffee planning workbook") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    CHECK(group_cell_sets(formula_groups(*wb.sheet("Department1"))) ==
          expected_sets({"B8:F8", "F4:F7"}));
    CHECK(group_cell_sets(formula_groups(*wb.sheet("Total"))) ==
          expected_sets({"B4:B8", "C4:C8", "D4:D8", "E4:E8"}));
    CHECK(group_cell_sets(formula_groups(*wb.sheet("Investment"))) ==
          expected_sets({"B3", "B5", "E9:E11"}));
}

TEST_CASE("formula group partitioning") {
    SUBCASE("one-dimensional groups pass through") {
        Workbook wb = testsupport::load_fixture("coffee_planning.json");
        for (const TypeBasedGroup& g : formula_groups(*wb.sheet("Department1"))) {
            auto parts = partition_formula_group(g);
            REQUIRE(parts.size() == 1);
            CHECK(parts[0].cells == g.cells);
        }
    }

    SUBCASE("a 2x3 rectangle partitions into two rows of three") {
        // two rows, three columns of copy-equivalent formulas
        testsupport::SheetBuilder b("S");
        for (int col = 2; col <= 4; ++col)
            for (int row = 2; row <= 3; ++row)
                b.formula(column_letters(col) + std::to_string(row), "$A$1");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));

        auto groups = formula_groups(wb.sheets[0]);
        REQUIRE(groups.size() == 1);
        auto parts = partition_formula_group(groups[0]);
        REQUIRE(parts.size() == 2); // 2 row partitions beat 3 column partitions
        for (const auto& p : parts) {
            CHECK(p.orientation == Orientation::Row);
            CHECK(p.cells.size() == 3);
        }
    }

    SUBCASE("square ties go to column orientation") {
        testsupport::SheetBuilder b("S");
        for (int col = 2; col <= 3; ++col)
            for (int row = 2; row <= 3; ++row)
                b.formula(column_letters(col) + std::to_string(row), "$A$1");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));
        auto parts = partition_formula_group(formula_groups(wb.sheets[0])[0]);
        REQUIRE(parts.size() == 2);
        CHECK(parts[0].orientation == Orientation::Column);
    }

    SUBCASE("singletons record singleton orientation") {
        Workbook wb = testsupport::load_fixture("coffee_planning.json");
        auto groups = formula_groups(*wb.sheet("Investment"));
        for (const TypeBasedGroup& g : groups) {
            if (g.cells.size() != 1) continue;
            auto parts = partition_formula_group(g);
            REQUIRE(parts.size() == 1);
            CHECK(parts[0].orientation == Orientation::Singleton);
        }
    }
}

TEST_CASE("reference groups and referred formula groups") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);

    SUBCASE("Investment!E9:E11 has five reference-based groups") {
        const PartitionedFormulaGroup* g = model.find_pfg("g:Investment!E9:E11");
        REQUIRE(g);
        CHECK(ref_group_sets(g->reference_groups) ==
              expected_sets({"B4", "B5", "B9:B11", "C9:C11", "D9:D11"}));
        for (const ReferenceGroup& rg : g->reference_groups) CHECK(rg.sheet == "Investment");
    }

    SUBCASE("Department1!F4:F7 has one area group per cell") {
        const PartitionedFormulaGroup* g = model.find_pfg("g:Department1!F4:F7");
        REQUIRE(g);
        CHECK(ref_group_sets(g->reference_groups) ==
              expected_sets({"B4:E4", "B5:E5", "B6:E6", "B7:E7"}));
    }

    SUBCASE("a formula group without references has none") {
        testsupport::SheetBuilder b("S");
        b.formula("A1", "1+2");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook toy = testsupport::make_workbook(std::move(sheets));
        StructureModel toy_model = build_structure_model(toy);
        CHECK(toy_model.sheets[0].formula_groups[0].reference_groups.empty());
    }

    SUBCASE("referred formula groups") {
        const PartitionedFormulaGroup* b8f8 = model.find_pfg("g:Department1!B8:F8");
        REQUIRE(b8f8);
        CHECK(b8f8->referred_pfgs == std::vector<std::string>{"g:Department1!F4:F7"});

        const PartitionedFormulaGroup* f4f7 = model.find_pfg("g:Department1!F4:F7");
        REQUIRE(f4f7);
        CHECK(f4f7->referred_pfgs.empty());

        const PartitionedFormulaGroup* e9 = model.find_pfg("g:Investment!E9:E11");
        REQUIRE(e9);
        CHECK(e9->referred_pfgs == std::vector<std::string>{"g:Investment!B5"});
    }
}

TEST_CASE("merging of overlapping reference-based groups") {
    SUBCASE("overlapping column spans unite") {
        testsupport::SheetBuilder b("S");
        b.formula("G1", "SUM(B4:B6)").formula("H1", "SUM(B5:B8)");
        for (int row = 4; row <= 8; ++row) b.number("B" + std::to_string(row), row);
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));
        StructureModel model = build_structure_model(wb);
        CHECK(ref_group_sets(model.sheets[0].merged_reference_groups) ==
              expected_sets({"B4:B8"}));
    }

    SUBCASE("a singleton is absorbed by an overlapping row group") {
        testsupport::SheetBuilder b("S");
        b.formula("G1", "SUM(B4:E4)").formula("H2", "D4*2");
        for (int col = 2; col <= 5; ++col) b.number(column_letters(col) + "4", col);
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));
        StructureModel model = build_structure_model(wb);
        CHECK(ref_group_sets(model.sheets[0].merged_reference_groups) ==
              expected_sets({"B4:E4"}));
        // provenance from both referring groups is retained
        const ReferenceGroup& merged = model.sheets[0].merged_reference_groups[0];
        CHECK(merged.provenance.size() == 2);
    }

    SUBCASE("adjacent but non-overlapping singletons stay separate") {
        testsupport::SheetBuilder b("S");
        b.formula("I1", "B3+1").formula("K1", "B4*1");
        b.number("B3", 1).number("B4", 2);
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));
        StructureModel model = build_structure_model(wb);
        CHECK(ref_group_sets(model.sheets[0].merged_reference_groups) ==
              expected_sets({"B3", "B4"}));
    }

    SUBCASE("coffee planning workbook merged groups") {
        Workbook wb = testsupport::load_fixture("coffee_planning.json");
        StructureModel model = build_structure_model(wb);

        CHECK(ref_group_sets(model.sheet("Investment")->merged_reference_groups) ==
              expected_sets({"B3", "B4", "B5", "B9:B11", "C9:C11", "D9:D11"}));

        // the F column groups referenced from Total unite with the local F4:F7
        CHECK(ref_group_sets(model.sheet("Department1")->merged_reference_groups) ==
              expected_sets({"B4:B7", "C4:C7", "D4:D7", "E4:E7", "F4:F8", "B4:E4", "B5:E5",
                             "B6:E6", "B7:E7"}));

        CHECK(ref_group_sets(model.sheet("Total")->merged_reference_groups) ==
              expected_sets({"B4:D4", "B5:D5", "B6:D6", "B7:D7", "B8:D8", "E8"}));

        // post-merge: at most one row- and one column-oriented group per cell
        for (const WorksheetModel& wsm : model.sheets) {
            std::map<Coordinate, int> row_hits, col_hits;
            for (const ReferenceGroup& rg : wsm.merged_reference_groups) {
                for (const Coordinate& c : rg.cells) {
                    if (rg.orientation == Orientation::Row) row_hits[c]++;
                    if (rg.orientation == Orientation::Column) col_hits[c]++;
                }
            }
            for (const auto& [c, n] : row_hits) CHECK(n <= 1);
            for (const auto& [c, n] : col_hits) CHECK(n <= 1);
        }
    }
}

TEST_CASE("non-blockable cells of the coffee planning workbook") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);

    CHECK(model.sheet("Department1")->non_blockable == cells_of("A1;B2;A3:F3;A4:A8"));
    // Total's label row ends at column E
    CHECK(model.sheet("Total")->non_blockable == cells_of("A1;B2;A3:E3;A4:A8"));
    CHECK(model.sheet("Investment")->non_blockable == cells_of("A1:A5;A7:A11;B8:E8"));

    // a worksheet whose every non-empty cell is grouped has none
    testsupport::SheetBuilder b("S");
    b.number("A1", 1).formula("A2", "A1+1");
    std::vector<testsupport::SheetBuilder> sheets;
    sheets.push_back(std::move(b));
    Workbook toy = testsupport::make_workbook(std::move(sheets));
    StructureModel toy_model = build_structure_model(toy);
    CHECK(toy_model.sheets[0].non_blockable.empty());
}

TEST_CASE("block predicate and block neighbors") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);
    const std::set<Coordinate>& nb = model.sheet("Department1")->non_blockable;

    CHECK(is_block(testsupport::coords({"B4", "D4"}), nb));
    CHECK_FALSE(is_block(testsupport::coords({"A4", "D4"}), nb)); // A4 is non-blockable
    CHECK(is_block(testsupport::coords({"B4"}), nb));
    CHECK_THROWS_WITH_AS(is_block({}, nb), doctest::Contains("empty cell set"), Error);

    std::set<Coordinate> block = cells_of("B4:B8");
    auto group_cells = [](const std::string& spec) {
        auto s = cells_of(spec);
        return std::vector<Coordinate>(s.begin(), s.end());
    };
    CHECK(block_neighbor(block, group_cells("D4:D8")));  // one column gap
    CHECK_FALSE(block_neighbor(block, group_cells("E4:E8"))); // two-column gap
    CHECK(block_neighbor(block, group_cells("B5:B6"))); // inside
}

TEST_CASE("block creation on the coffee planning workbook") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);

    auto block_rects = [&](const char* sheet) {
        std::set<std::string> out;
        for (const Block& b : model.sheet(sheet)->blocks)
            out.insert(range_to_string(b.top_left, b.bottom_right));
        return out;
    };

    CHECK(block_rects("Department1") == std::set<std::string>{"B4:F8"});
    CHECK(block_rects("Department2") == std::set<std::string>{"B4:F8"});
    CHECK(block_rects("Department3") == std::set<std::string>{"B4:F8"});
    CHECK(block_rects("Total") == std::set<std::string>{"B4:E8"});
    CHECK(block_rects("Investment") == std::set<std::string>{"B3:B5", "B9:E11"});

    // every group belongs to at least one block
    for (const WorksheetModel& wsm : model.sheets) {
        std::set<std::string> in_blocks;
        for (const Block& b : wsm.blocks)
            in_blocks.insert(b.member_ids.begin(), b.member_ids.end());
        for (const PartitionedFormulaGroup& g : wsm.formula_groups) CHECK(in_blocks.count(g.id));
        for (const ReferenceGroup& g : wsm.merged_reference_groups) CHECK(in_blocks.count(g.id));
    }

    // no block area contains a non-blockable cell
    for (const WorksheetModel& wsm : model.sheets)
        for (const Block& b : wsm.blocks)
            for (const Coordinate& c : wsm.non_blockable) {
                bool inside = c.col >= b.top_left.col && c.col <= b.bottom_right.col &&
                              c.row >= b.top_left.row && c.row <= b.bottom_right.row;
                CHECK_FALSE(inside);
            }
}

TEST_CASE("blocks split by a non-blockable barrier") {
    // row-oriented groups cut by a label column: two disjoint blocks
    testsupport::SheetBuilder left("Rows");
    left.formula("A1", "SUM(A3:C3)").formula("B1", "SUM(A4:C4)");
    left.number("A3", 1).number("B3", 2).number("C3", 3);
    left.number("A4", 4).number("B4", 5).number("C4", 6);
    left.text("D1", "label").text("D2", "label").text("D3", "label").text("D4", "label");
    left.formula("E1", "SUM(E3:E4)").number("E3", 7).number("E4", 8);

    std::vector<testsupport::SheetBuilder> sheets;
    sheets.push_back(std::move(left));
    Workbook wb = testsupport::make_workbook(std::move(sheets));
    StructureModel model = build_structure_model(wb);
    const WorksheetModel& wsm = model.sheets[0];
    REQUIRE(wsm.blocks.size() == 2);
    // the label column is inside neither block
    for (const Block& b : wsm.blocks) {
        CHECK((b.bottom_right.col < 4 || b.top_left.col > 4));
    }
}

TEST_CASE("column-oriented groups may join several blocks") {
    // four column groups; a label below the first column forbids one large
    // block, so a second block forms to the right and re-absorbs the middle
    // columns
    testsupport::SheetBuilder b("Cols");
    b.number("A1", 5).text("B6", "label");
    auto column = [&](char col, int top, int bottom, int salt) {
        for (int row = top; row <= bottom; ++row)
            b.formula(std::string(1, col) + std::to_string(row),
                      "$A$1+" + std::to_string(salt));
    };
    column('B', 2, 5, 1);
    column('C', 2, 5, 2);
    column('D', 2, 8, 3);
    column('E', 2, 5, 4);

    std::vector<testsupport::SheetBuilder> sheets;
    sheets.push_back(std::move(b));
    Workbook wb = testsupport::make_workbook(std::move(sheets));
    StructureModel model = build_structure_model(wb);
    const WorksheetModel& wsm = model.sheets[0];

    std::set<std::string> rects;
    for (const Block& blk : wsm.blocks)
        rects.insert(range_to_string(blk.top_left, blk.bottom_right));
    CHECK(rects == std::set<std::string>{"A1", "B2:E5", "C2:E8"});

    // the C and E column groups belong to both computation blocks
    auto members_of = [&](const std::string& rect) {
        for (const Block& blk : wsm.blocks)
            if (range_to_string(blk.top_left, blk.bottom_right) == rect)
                return std::set<std::string>(blk.member_ids.begin(), blk.member_ids.end());
        return std::set<std::string>{};
    };
    auto first = members_of("B2:E5");
    auto second = members_of("C2:E8");
    CHECK(first.count("g:Cols!C2:C5"));
    CHECK(second.count("g:Cols!C2:C5"));
    CHECK(first.count("g:Cols!E2:E5"));
    CHECK(second.count("g:Cols!E2:E5"));
    CHECK_FALSE(second.count("g:Cols!B2:B5"));
    CHECK_FALSE(first.count("g:Cols!D2:D8"));
}

TEST_CASE("header layers of the coffee planning workbook") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);

    auto layers_of = [&](const char* sheet, const char* block_rect) {
        std::vector<std::pair<std::string, std::string>> out; // (kind+level, strip)
        const WorksheetModel* wsm = model.sheet(sheet);
        for (const HeaderLayer& l : wsm->layers) {
            if (l.block_id != std::string("b:") + sheet + "!" + block_rect) continue;
            std::string kind = (l.kind == LayerKind::ColumnLayer ? "col" : "row") +
                               std::to_string(l.level);
            out.emplace_back(kind, group_range_string(l.cells));
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    using Layers = std::vector<std::pair<std::string, std::string>>;
    CHECK(layers_of("Department1", "B4:F8") ==
          Layers{{"col1", "B3:F3"}, {"col2", "B2:F2"}, {"row1", "A4:A8"}});
    CHECK(layers_of("Total", "B4:E8") ==
          Layers{{"col1", "B3:E3"}, {"col2", "B2:E2"}, {"row1", "A4:A8"}});
    CHECK(layers_of("Investment", "B3:B5") == Layers{{"row1", "A3:A5"}});
    CHECK(layers_of("Investment", "B9:E11") == Layers{{"col1", "B8:E8"}, {"row1", "A9:A11"}});

    // a block flush against the sheet edges has no layers
    testsupport::SheetBuilder b("S");
    b.number("A1", 1).formula("B1", "A1*2");
    std::vector<testsupport::SheetBuilder> sheets;
    sheets.push_back(std::move(b));
    Workbook toy = testsupport::make_workbook(std::move(sheets));
    StructureModel toy_model = build_structure_model(toy);
    CHECK(toy_model.sheets[0].layers.empty());

    // layers never overlap a block and column layers span the block's columns
    for (const WorksheetModel& wsm : model.sheets) {
        for (const HeaderLayer& l : wsm.layers) {
            const Block* owner = nullptr;
            for (const Block& blk : wsm.blocks)
                if (blk.id == l.block_id) owner = &blk;
            REQUIRE(owner);
            if (l.kind == LayerKind::ColumnLayer) {
                CHECK(l.cells.front().col == owner->top_left.col);
                CHECK(l.cells.back().col == owner->bottom_right.col);
            } else {
                CHECK(l.cells.front().row == owner->top_left.row);
                CHECK(l.cells.back().row == owner->bottom_right.row);
            }
            for (const Block& blk : wsm.blocks)
                for (const Coordinate& c : l.cells) {
                    bool inside = c.col >= blk.top_left.col && c.col <= blk.bottom_right.col &&
                                  c.row >= blk.top_left.row && c.row <= blk.bottom_right.row;
                    CHECK_FALSE(inside);
                }
        }
    }
}

TEST_CASE("meta-header assignment of the coffee planning workbook") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);

    auto assignments = [&](const char* sheet) {
        std::map<std::string, std::string> out;
        for (const MetaHeaderAssignment& m : model.sheet(sheet)->meta_headers) {
            const WorksheetModel* wsm = model.sheet(sheet);
            for (const HeaderLayer& l : wsm->layers)
                if (l.id == m.layer_id) out[to_a1(m.cell)] = group_range_string(l.cells);
        }
        return out;
    };

    CHECK(assignments("Department1") == std::map<std::string, std::string>{{"A3", "A4:A8"}});
    CHECK(assignments("Total") == std::map<std::string, std::string>{{"A3", "A4:A8"}});
    CHECK(assignments("Investment") ==
          std::map<std::string, std::string>{{"A2", "A3:A5"}, {"A8", "A9:A11"}});

    auto unassigned = [&](const char* sheet) {
        std::set<std::string> out;
        for (const Coordinate& c : model.sheet(sheet)->unassigned_labels) out.insert(to_a1(c));
        return out;
    };
    CHECK(unassigned("Department1") == std::set<std::string>{"A1"});
    CHECK(unassigned("Total") == std::set<std::string>{"A1"});
    CHECK(unassigned("Investment") == std::set<std::string>{"A1", "A7"});
}

TEST_CASE("a constants-only workbook yields an empty computation model") {
    Workbook wb = testsupport::load_fixture("preprocess_basic/constants.json");
    StructureModel model = build_structure_model(wb);
    const WorksheetModel& wsm = model.sheets[0];
    CHECK_FALSE(wsm.type_groups.empty()); // the constants still form type groups
    CHECK(wsm.formula_groups.empty());
    CHECK(wsm.merged_reference_groups.empty());
    CHECK(wsm.blocks.empty());
    CHECK(wsm.layers.empty());
    // every non-empty cell is non-blockable
    CHECK(wsm.non_blockable.size() == wb.sheets[0].cells.size());
}

TEST_CASE("structure model is deterministic") {
    Workbook wb1 = testsupport::load_fixture("coffee_planning.json");
    Workbook wb2 = testsupport::load_fixture("coffee_planning.json");
    CHECK(model_to_json(build_structure_model(wb1)) == model_to_json(build_structure_model(wb2)));
}

TEST_CASE("the text report lists blocks, layers, and meta-headers") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);
    std::string text = model_to_text(model);
    CHECK(text.find("Block Department1!B4:F8") != std::string::npos);
    CHECK(text.find("Block Investment!B9:E11") != std::string::npos);
    CHECK(text.find("Column layer Department1!B3:F3") != std::string::npos);
    CHECK(text.find("Row layer Investment!A3:A5") != std::string::npos);
    CHECK(text.find("Meta-header Total!A3") != std::string::npos);
}
