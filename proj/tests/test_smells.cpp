#include "sheetlint/smells.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace sheetlint;
using testsupport::cells_of;

TEST_CASE("threshold classification") {
    Thresholds t = Thresholds::defaults();

    CHECK(classify(7, "group-long-chain", t) == Risk::High);
    CHECK(classify(7, "baseline-feature-envy", t) == Risk::High);
    CHECK(classify(0, "group-long-chain", t) == Risk::None);
    CHECK(classify(4, "group-long-chain", t) == Risk::Low);
    CHECK(classify(3, "group-feature-envy", t) == Risk::Low);

    // directed boundary cases for the novel smell defaults
    CHECK(classify(3, "overburdened-worksheet-blocks", t) == Risk::None);
    CHECK(classify(4, "overburdened-worksheet-blocks", t) == Risk::Low);
    CHECK(classify(5, "overburdened-worksheet-blocks", t) == Risk::Low);
    CHECK(classify(8, "overburdened-worksheet-blocks", t) == Risk::Low);
    CHECK(classify(9, "overburdened-worksheet-blocks", t) == Risk::High);
    CHECK(classify(10, "overburdened-worksheet-groups", t) == Risk::None);
    CHECK(classify(11, "overburdened-worksheet-groups", t) == Risk::Low);
    CHECK(classify(36, "overburdened-worksheet-groups", t) == Risk::Low);
    CHECK(classify(37, "overburdened-worksheet-groups", t) == Risk::High);

    CHECK_THROWS_WITH_AS(classify(1, "missing-header", t),
                         doctest::Contains("kind is per-instance"), Error);
    CHECK_THROWS_AS(classify(1, SmellKind::BaselinePatternFinder, t), Error);
    CHECK_THROWS_AS(classify(1, "inconsistent-group-reference", t), Error);

    // the 80% marks ride along in configuration without affecting results
    CHECK(t.band("overburdened-worksheet-blocks")->medium == 5.0);
    CHECK(t.band("overburdened-worksheet-groups")->medium == 19.0);
}

TEST_CASE("baseline calculation chains") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");

    SUBCASE("the coffee planning workbook's longest chain") {
        const Worksheet& inv = *wb.sheet("Investment");
        CellChains chains = compute_cell_chains(wb);
        CHECK_FALSE(chains.cycle);
        for (const char* addr : {"E9", "E10", "E11"})
            CHECK(chains.length.at(SheetCoord{"Investment", parse_a1(addr)}) == 7);
        CHECK(baseline_chain_length(wb, *inv.find(parse_a1("E9"))) == 7);
        // input cells have chain length zero
        CHECK(baseline_chain_length(wb, *inv.find(parse_a1("B4"))) == 0);
        // intermediate stations of the witness path
        CHECK(chains.length.at(SheetCoord{"Department1", parse_a1("F4")}) == 1);
        CHECK(chains.length.at(SheetCoord{"Department1", parse_a1("F8")}) == 2);
        CHECK(chains.length.at(SheetCoord{"Total", parse_a1("B8")}) == 3);
        CHECK(chains.length.at(SheetCoord{"Total", parse_a1("E8")}) == 4);
        CHECK(chains.length.at(SheetCoord{"Investment", parse_a1("B3")}) == 5);
        CHECK(chains.length.at(SheetCoord{"Investment", parse_a1("B5")}) == 6);
    }

    SUBCASE("a three-cell chain") {
        testsupport::SheetBuilder b("S");
        b.number("A1", 1).formula("B1", "A1+1").formula("C1", "B1+1");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook toy = testsupport::make_workbook(std::move(sheets));
        CHECK(baseline_chain_length(toy, *toy.sheets[0].find(parse_a1("C1"))) == 2);
        CHECK(baseline_chain_length(toy, *toy.sheets[0].find(parse_a1("B1"))) == 1);
        // a formula without references follows no reference at all
        testsupport::SheetBuilder c("T");
        c.formula("A1", "1+2");
        std::vector<testsupport::SheetBuilder> sheets2;
        sheets2.push_back(std::move(c));
        Workbook toy2 = testsupport::make_workbook(std::move(sheets2));
        CHECK(baseline_chain_length(toy2, *toy2.sheets[0].find(parse_a1("A1"))) == 0);
    }

    SUBCASE("circular references are cut and flagged") {
        testsupport::SheetBuilder b("S");
        b.formula("A1", "B1").formula("B1", "A1");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook toy = testsupport::make_workbook(std::move(sheets));
        CellChains chains = compute_cell_chains(toy);
        CHECK(chains.cycle);
        for (const auto& [pos, len] : chains.length) CHECK(len <= 2);

        StructureModel model = build_structure_model(toy);
        CHECK(model.cell_reference_cycle);
    }
}

TEST_CASE("group calculation chains") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);
    GroupChains chains = compute_group_chains(model);

    CHECK(chains.length.at("g:Investment!E9:E11") == 7);
    CHECK(chains.length.at("g:Investment!B5") == 6);
    CHECK(chains.length.at("g:Investment!B3") == 5);
    CHECK(chains.length.at("g:Total!E4:E8") == 4);
    CHECK(chains.length.at("g:Total!B4:B8") == 3);
    CHECK(chains.length.at("g:Department1!B8:F8") == 2);
    CHECK(chains.length.at("g:Department1!F4:F7") == 1); // only reference groups
    CHECK_FALSE(chains.cycle);

    CHECK(group_longest_chain(model, *model.find_pfg("g:Investment!E9:E11")) == 7);

    // one deterministic witness path for the whole group
    CHECK(chains.witness.at("g:Investment!E9:E11") ==
          "Department1!B4:E4 -> Department1!F4:F7 -> Department1!B8:F8 -> Total!B4:B8 -> "
          "Total!E4:E8 -> Investment!B3 -> Investment!B5 -> Investment!E9:E11");

    // monotone recursion in the acyclic model
    for (const WorksheetModel& wsm : model.sheets)
        for (const PartitionedFormulaGroup& g : wsm.formula_groups)
            for (const std::string& target : g.referred_pfgs)
                CHECK(chains.length.at(g.id) >= 1 + chains.length.at(target));

    SUBCASE("a group without any references has chain zero") {
        testsupport::SheetBuilder b("S");
        b.formula("A1", "1+2");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook toy = testsupport::make_workbook(std::move(sheets));
        StructureModel toy_model = build_structure_model(toy);
        GroupChains toy_chains = compute_group_chains(toy_model);
        CHECK(toy_chains.length.at("g:S!A1") == 0);
    }

    SUBCASE("group-level cycles terminate and are flagged") {
        // X = {A1, A2} references two cells of Y; Y = {B3, B4} references back
        // into X with a shifted offset, so the cell graph stays acyclic.
        testsupport::SheetBuilder b("S");
        b.formula("A1", "B3").formula("A2", "B4"); // both R[2]C[1]
        b.formula("B3", "A2").formula("B4", "A3"); // both R[-1]C[-1]
        b.number("A3", 1);
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook toy = testsupport::make_workbook(std::move(sheets));
        StructureModel toy_model = build_structure_model(toy);
        CHECK(toy_model.group_reference_cycle);
        CHECK_FALSE(toy_model.cell_reference_cycle);
        GroupChains toy_chains = compute_group_chains(toy_model);
        CHECK(toy_chains.cycle);
        for (const auto& [id, len] : toy_chains.length) CHECK(len <= 3);
    }
}

TEST_CASE("feature envy") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);

    // per reference occurrence: B4:D8 of Total holds 15 cross-sheet references
    CHECK(baseline_feature_envy(wb, *wb.sheet("Total")) == 15);
    CHECK(baseline_feature_envy(wb, *wb.sheet("Department1")) == 0);
    CHECK(baseline_feature_envy(wb, *wb.sheet("Investment")) == 1);

    // per group connection: one per referring column group
    CHECK(group_feature_envy(model, *model.sheet("Total")) == 3);
    CHECK(group_feature_envy(model, *model.sheet("Department1")) == 0);
    CHECK(group_feature_envy(model, *model.sheet("Investment")) == 1);
}

TEST_CASE("overburdened worksheet metrics") {
    Workbook wb = testsupport::load_fixture("coffee_planning.json");
    StructureModel model = build_structure_model(wb);

    CHECK(overburdened_worksheet(*model.sheet("Investment"), OverburdenedMetric::Blocks) == 2);
    CHECK(overburdened_worksheet(*model.sheet("Department1"), OverburdenedMetric::Blocks) == 1);
    CHECK(overburdened_worksheet(*model.sheet("Total"), OverburdenedMetric::Groups) == 4);
    CHECK(overburdened_worksheet(*model.sheet("Investment"), OverburdenedMetric::Groups) == 3);

    Workbook empty;
    empty.sheets.push_back(Worksheet{"E", {}, {0, 0}});
    StructureModel empty_model = build_structure_model(empty);
    CHECK(overburdened_worksheet(empty_model.sheets[0], OverburdenedMetric::Blocks) == 0);
    CHECK(overburdened_worksheet(empty_model.sheets[0], OverburdenedMetric::Groups) == 0);
}

TEST_CASE("inconsistent formula group references") {
    SUBCASE("the coffee planning workbook reports exactly one pair") {
        Workbook wb = testsupport::load_fixture("coffee_planning.json");
        StructureModel model = build_structure_model(wb);
        auto pairs = inconsistent_group_references(model);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].pfg_id == "g:Investment!B3");
        CHECK(pairs[0].target_pfg_id == "g:Total!E4:E8");
    }

    SUBCASE("an exactly matching reference group is consistent") {
        testsupport::SheetBuilder b("S");
        // f-group B1:B3; a second group references it whole
        b.formula("B1", "A1+0").formula("B2", "A2+0").formula("B3", "A3+0");
        b.number("A1", 1).number("A2", 2).number("A3", 3);
        b.formula("D2", "SUM(B1:B3)");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));
        StructureModel model = build_structure_model(wb);
        CHECK(inconsistent_group_references(model).empty());
    }

    SUBCASE("a strict two-cell prefix of a five-cell group is reported") {
        testsupport::SheetBuilder b("S");
        for (int row = 1; row <= 5; ++row)
            b.formula("B" + std::to_string(row), "A" + std::to_string(row) + "+0");
        for (int row = 1; row <= 5; ++row) b.number("A" + std::to_string(row), row);
        b.formula("D2", "SUM(B1:B2)");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));
        StructureModel model = build_structure_model(wb);
        auto pairs = inconsistent_group_references(model);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].pfg_id == "g:S!D2");
        CHECK(pairs[0].target_pfg_id == "g:S!B1:B5");

        // verify the definition's two conjuncts by direct set computation
        const PartitionedFormulaGroup* g = model.find_pfg("g:S!D2");
        const PartitionedFormulaGroup* target = model.find_pfg("g:S!B1:B5");
        REQUIRE(g);
        REQUIRE(target);
        std::set<Coordinate> target_cells(target->cells.begin(), target->cells.end());
        bool any_equal = false, any_overlap = false;
        for (const ReferenceGroup& rg : g->reference_groups) {
            std::set<Coordinate> cells(rg.cells.begin(), rg.cells.end());
            if (cells == target_cells) any_equal = true;
            std::vector<Coordinate> overlap;
            std::set_intersection(cells.begin(), cells.end(), target_cells.begin(),
                                  target_cells.end(), std::back_inserter(overlap));
            if (!overlap.empty()) any_overlap = true;
        }
        CHECK_FALSE(any_equal);
        CHECK(any_overlap);
    }
}

TEST_CASE("missing headers") {
    SUBCASE("the cleared header fixture reports exactly D3") {
        Workbook wb = testsupport::load_fixture("department_missing_header.json");
        StructureModel model = build_structure_model(wb);
        const WorksheetModel& wsm = model.sheets[0];
        REQUIRE(wsm.blocks.size() == 1);
        CHECK(range_to_string(wsm.blocks[0].top_left, wsm.blocks[0].bottom_right) == "B4:F8");
        std::vector<Coordinate> missing = missing_headers(model, wsm.blocks[0]);
        CHECK(missing == std::vector<Coordinate>{parse_a1("D3")});
        // returned coordinates are layer cells of empty type
        const Workbook* owner = model.workbook;
        for (const Coordinate& c : missing)
            CHECK(owner->sheet(wsm.name)->type_at(c) == CellType::Empty);
    }

    SUBCASE("fully labeled blocks report nothing") {
        Workbook wb = testsupport::load_fixture("coffee_planning.json");
        StructureModel model = build_structure_model(wb);
        const WorksheetModel* inv = model.sheet("Investment");
        for (const Block& b : inv->blocks) CHECK(missing_headers(model, b).empty());
    }

    SUBCASE("a block without layers reports nothing") {
        testsupport::SheetBuilder b("S");
        b.number("A1", 1).formula("B1", "A1*2");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));
        StructureModel model = build_structure_model(wb);
        REQUIRE(model.sheets[0].blocks.size() == 1);
        CHECK(missing_headers(model, model.sheets[0].blocks[0]).empty());
    }
}

TEST_CASE("group pattern finder") {
    SUBCASE("the overwritten-formula fixture flags exactly the group holding D4") {
        Workbook wb = testsupport::load_fixture("coffee_planning_overwritten.json");
        StructureModel model = build_structure_model(wb);
        std::vector<std::pair<std::string, std::string>> flagged;
        for (const WorksheetModel& wsm : model.sheets)
            for (const ReferenceGroup* rg : group_pattern_finder(model, wsm, false))
                flagged.emplace_back(wsm.name, group_range_string(rg->cells));
        REQUIRE(flagged.size() == 1);
        CHECK(flagged[0] == std::pair<std::string, std::string>{"Total", "B4:D4"});
    }

    SUBCASE("the unmodified example is clean in both modes") {
        Workbook wb = testsupport::load_fixture("coffee_planning.json");
        StructureModel model = build_structure_model(wb);
        for (const WorksheetModel& wsm : model.sheets) {
            CHECK(group_pattern_finder(model, wsm, false).empty());
            CHECK(group_pattern_finder(model, wsm, true).empty());
        }
    }

    SUBCASE("uniform and all-empty groups are never reported") {
        testsupport::SheetBuilder b("S");
        // E1's area reference covers empty cells only: one type, no report
        b.formula("E1", "SUM(B2:B4)");
        // G1's area reference covers a uniform string pair
        b.formula("G1", "SUM(H2:H3)");
        b.text("H2", "a").text("H3", "b");
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));
        StructureModel model = build_structure_model(wb);
        CHECK(group_pattern_finder(model, model.sheets[0], false).empty());
    }

    SUBCASE("the report iff the member type set has two or more entries") {
        Workbook wb = testsupport::load_fixture("coffee_planning_overwritten.json");
        StructureModel model = build_structure_model(wb);
        for (const WorksheetModel& wsm : model.sheets) {
            auto flagged = group_pattern_finder(model, wsm, false);
            const Worksheet* ws = wb.sheet(wsm.name);
            for (const ReferenceGroup& rg : wsm.merged_reference_groups) {
                std::set<CellType> types;
                for (const Coordinate& c : rg.cells) types.insert(ws->type_at(c));
                bool is_flagged =
                    std::find(flagged.begin(), flagged.end(), &rg) != flagged.end();
                CHECK(is_flagged == (types.size() >= 2));
            }
        }
    }
}

namespace {

/// Straight-line re-statement of the window rules, written independently of
/// the sweep in the library: for every coordinate, check every window
/// position, the 5-distance rule, and the border rule.
std::set<Coordinate> pattern_finder_oracle(const Worksheet& ws, bool column_wise,
                                           bool include_border) {
    std::set<Coordinate> out;
    int lines = column_wise ? ws.bounds.col : ws.bounds.row;
    int limit = column_wise ? ws.bounds.row : ws.bounds.col;
    auto type_at = [&](int line, int p) {
        Coordinate c = column_wise ? Coordinate{line, p} : Coordinate{p, line};
        const Cell* cell = ws.find(c);
        if (!cell) return static_cast<int>(StaticType::Empty) + 1000;
        return static_cast<int>(static_result_type(*cell)) + 1000;
    };
    for (int line = 1; line <= lines; ++line) {
        for (int p = 1; p <= limit; ++p) {
            bool candidate = false;
            for (int start = std::max(1, p - 3); start <= p && start + 3 <= limit; ++start) {
                int mine = type_at(line, p);
                bool others_same = true;
                int other = -1;
                for (int i = start; i < start + 4; ++i) {
                    if (i == p) continue;
                    int t = type_at(line, i);
                    if (other == -1) other = t;
                    if (t != other) others_same = false;
                }
                if (others_same && other != -1 && mine != other) candidate = true;
            }
            if (!candidate) continue;
            bool unique = true;
            for (int d = 1; d <= 5; ++d) {
                if (p - d >= 1 && type_at(line, p - d) == type_at(line, p)) unique = false;
                if (p + d <= limit && type_at(line, p + d) == type_at(line, p)) unique = false;
            }
            if (!unique) continue;
            if (!include_border && (p <= 5 || p > limit - 5)) continue;
            out.insert(column_wise ? Coordinate{line, p} : Coordinate{p, line});
        }
    }
    return out;
}

std::set<Coordinate> run_pf(const Worksheet& ws, PatternFinderVariant::Axis axis, bool border) {
    PatternFinderVariant v;
    v.orientation = axis;
    v.include_border = border;
    auto flagged = baseline_pattern_finder(ws, v);
    return {flagged.begin(), flagged.end()};
}

} // namespace

TEST_CASE("baseline pattern finder on the synthetic mini corpus") {
    using Axis = PatternFinderVariant::Axis;
    Workbook survey = testsupport::load_fixture("minicorpus/survey.json");
    Workbook inventory = testsupport::load_fixture("minicorpus/inventory.json");
    Workbook grades = testsupport::load_fixture("minicorpus/grades.json");

    // hand-enumerated expectations
    CHECK(run_pf(survey.sheets[0], Axis::Column, false) == cells_of("A7"));
    CHECK(run_pf(survey.sheets[0], Axis::Column, true) == cells_of("A7;B3"));
    CHECK(run_pf(survey.sheets[0], Axis::Row, false).empty());
    CHECK(run_pf(inventory.sheets[0], Axis::Column, false).empty());
    CHECK(run_pf(inventory.sheets[0], Axis::Row, false) == cells_of("G2;H3"));
    CHECK(run_pf(inventory.sheets[0], Axis::Row, true) == cells_of("G2;H3"));
    CHECK(run_pf(grades.sheets[0], Axis::Column, false) == cells_of("G7"));
    CHECK(run_pf(grades.sheets[0], Axis::Row, false) == cells_of("G7"));
    CHECK(run_pf(grades.sheets[0], Axis::Combined, false) == cells_of("G7"));
    CHECK(run_pf(grades.sheets[0], Axis::Combined, true) == cells_of("G7"));

    // the 5-distance rule suppresses the paired deviations in column C
    CHECK(run_pf(survey.sheets[0], Axis::Column, true).count(parse_a1("C6")) == 0);
    CHECK(run_pf(survey.sheets[0], Axis::Column, true).count(parse_a1("C11")) == 0);

    // a uniform all-numeric column never fires
    testsupport::SheetBuilder b("U");
    for (int row = 1; row <= 14; ++row) b.number("A" + std::to_string(row), row);
    std::vector<testsupport::SheetBuilder> sheets;
    sheets.push_back(std::move(b));
    Workbook uniform = testsupport::make_workbook(std::move(sheets));
    CHECK(run_pf(uniform.sheets[0], Axis::Column, true).empty());

    // agreement with the independent oracle on every variant
    for (const Workbook* wb : {&survey, &inventory, &grades}) {
        const Worksheet& ws = wb->sheets[0];
        for (bool border : {false, true}) {
            CHECK(run_pf(ws, Axis::Column, border) == pattern_finder_oracle(ws, true, border));
            CHECK(run_pf(ws, Axis::Row, border) == pattern_finder_oracle(ws, false, border));
        }
    }
}

TEST_CASE("baseline pattern finder agrees with the oracle on random sheets") {
    std::mt19937 rng(0xbead);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int round = 0; round < 100; ++round) {
        testsupport::SheetBuilder b("R");
        for (int col = 1; col <= 13; ++col) {
            for (int row = 1; row <= 13; ++row) {
                double kind = unit(rng);
                std::string addr = column_letters(col) + std::to_string(row);
                if (kind < 0.45) continue; // empty
                if (kind < 0.8)
                    b.number(addr, std::floor(unit(rng) * 9));
                else if (kind < 0.92)
                    b.text(addr, "s");
                else
                    b.formula(addr, "$A$1", CellValue::numeric(1));
            }
        }
        std::vector<testsupport::SheetBuilder> sheets;
        sheets.push_back(std::move(b));
        Workbook wb = testsupport::make_workbook(std::move(sheets));
        const Worksheet& ws = wb.sheets[0];
        for (bool border : {false, true}) {
            REQUIRE(run_pf(ws, PatternFinderVariant::Axis::Column, border) ==
                    pattern_finder_oracle(ws, true, border));
            REQUIRE(run_pf(ws, PatternFinderVariant::Axis::Row, border) ==
                    pattern_finder_oracle(ws, false, border));
        }
    }
}

TEST_CASE("evaluated types hide formula cells that compute the common type") {
    Workbook grades = testsupport::load_fixture("minicorpus/grades.json");
    const Worksheet& ws = grades.sheets[0];
    // F6 holds a formula with a cached numeric value inside a numeric column
    PatternFinderVariant v;
    v.orientation = PatternFinderVariant::Axis::Column;
    v.include_border = true;
    v.evaluated_types = true;
    auto flagged = baseline_pattern_finder(ws, v);
    CHECK(std::find(flagged.begin(), flagged.end(), parse_a1("F6")) == flagged.end());

    // with stored types the formula cell deviates from its numeric column
    v.evaluated_types = false;
    flagged = baseline_pattern_finder(ws, v);
    CHECK(std::find(flagged.begin(), flagged.end(), parse_a1("F6")) != flagged.end());
}
