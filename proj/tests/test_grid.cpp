#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace sheetlint;
using testsupport::cells_of;
using testsupport::coords;

TEST_CASE("column letters round-trip") {
    CHECK(column_letters(1) == "A");
    CHECK(column_letters(26) == "Z");
    CHECK(column_letters(27) == "AA");
    CHECK(column_letters(52) == "AZ");
    CHECK(column_letters(53) == "BA");
    CHECK(column_letters(702) == "ZZ");
    CHECK(column_letters(703) == "AAA");
    for (int col : {1, 5, 26, 27, 300, 702, 703, 16384})
        CHECK(column_from_letters(column_letters(col)) == col);
    CHECK(parse_a1("B5") == Coordinate{2, 5});
    CHECK(to_a1(Coordinate{2, 5}) == "B5");
    CHECK_THROWS(parse_a1("5B"));
    CHECK_THROWS(parse_a1("B0"));
    CHECK_THROWS(parse_a1(""));
}

TEST_CASE("neighbors at Manhattan distance one") {
    auto set_of = [](std::vector<Coordinate> v) { return std::set<Coordinate>(v.begin(), v.end()); };

    CHECK(set_of(neighbors(parse_a1("B5"))) == coords({"B4", "B6", "A5", "C5"}));
    CHECK(set_of(neighbors(parse_a1("A1"))) == coords({"A2", "B1"}));

    // brute force over a 5x5 grid
    Coordinate c = parse_a1("C3");
    std::set<Coordinate> expected;
    for (int col = 1; col <= 5; ++col)
        for (int row = 1; row <= 5; ++row)
            if (std::abs(col - c.col) + std::abs(row - c.row) == 1)
                expected.insert(Coordinate{col, row});
    CHECK(set_of(neighbors(c)) == expected);

    // symmetry on in-bounds coordinates
    for (int col = 1; col <= 4; ++col)
        for (int row = 1; row <= 4; ++row) {
            Coordinate p{col, row};
            for (const Coordinate& q : neighbors(p)) {
                auto back = neighbors(q);
                CHECK(std::find(back.begin(), back.end(), p) != back.end());
            }
        }
}

TEST_CASE("connected cell sets") {
    CHECK(connected(coords({"B4"})));
    CHECK(connected(coords({"A1", "A2", "B2"})));
    CHECK_FALSE(connected(coords({"A1", "B2"})));
    CHECK(connected(cells_of("A4:E7")));
    CHECK_THROWS_WITH_AS(connected({}), doctest::Contains("empty cell set"), Error);
}

TEST_CASE("area spans the bounding rectangle") {
    auto as_set = [](std::vector<Coordinate> v) { return std::set<Coordinate>(v.begin(), v.end()); };

    CHECK(as_set(area(coords({"A3", "B4", "C2"}))) == cells_of("A2:C4"));
    CHECK(as_set(area(coords({"B4"}))) == coords({"B4"}));
    CHECK(as_set(area(coords({"A1", "C1"}))) == coords({"A1", "B1", "C1"}));
    CHECK_THROWS_WITH_AS(area({}), doctest::Contains("empty cell set"), Error);

    // idempotence and containment
    std::set<Coordinate> input = coords({"B2", "D5", "C3"});
    auto once = as_set(area(input));
    CHECK(as_set(area(once)) == once);
    CHECK(std::includes(once.begin(), once.end(), input.begin(), input.end()));
}

TEST_CASE("cell_type of stored and absent cells") {
    Workbook wb = testsupport::make_workbook([] {
        std::vector<testsupport::SheetBuilder> sheets;
        testsupport::SheetBuilder b("S");
        b.text("A1", "Q1").number("B1", 3.5).formula("C1", "A1&B1");
        sheets.push_back(std::move(b));
        return sheets;
    }());
    const Worksheet& ws = wb.sheets[0];
    CHECK(cell_type(ws, parse_a1("A1")) == CellType::String);
    CHECK(cell_type(ws, parse_a1("B1")) == CellType::Numeric);
    CHECK(cell_type(ws, parse_a1("C1")) == CellType::Formula); // formula is dominant
    CHECK(cell_type(ws, parse_a1("Z9")) == CellType::Empty);
    CHECK(cell_type(nullptr) == CellType::Empty);
}
