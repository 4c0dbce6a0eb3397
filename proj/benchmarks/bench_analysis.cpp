#include "sheetlint/document.hpp"
#include "sheetlint/eval.hpp"
#include "sheetlint/formula.hpp"
#include "sheetlint/smells.hpp"
#include "sheetlint/structure.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace sheetlint;

/// A dense data sheet: label row/column, an input matrix, and per-row and
/// per-column aggregate formulas. Scales with `size`.
Workbook make_grid_workbook(int size) {
    Workbook wb;
    Worksheet ws;
    ws.name = "Data";
    auto put = [&](int col, int row, Cell cell) {
        cell.sheet = ws.name;
        cell.coord = {col, row};
        ws.bounds.col = std::max(ws.bounds.col, col);
        ws.bounds.row = std::max(ws.bounds.row, row);
        ws.cells.emplace(Coordinate{col, row}, std::move(cell));
    };

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> value(1, 99);

    for (int col = 2; col <= size + 1; ++col) {
        Cell label;
        label.type = CellType::String;
        label.literal = CellValue::string("c" + std::to_string(col));
        put(col, 1, label);
    }
    for (int row = 2; row <= size + 1; ++row) {
        Cell label;
        label.type = CellType::String;
        label.literal = CellValue::string("r" + std::to_string(row));
        put(1, row, label);
        for (int col = 2; col <= size + 1; ++col) {
            Cell cell;
            cell.type = CellType::Numeric;
            cell.literal = CellValue::numeric(value(rng));
            put(col, row, cell);
        }
    }
    int total_col = size + 2;
    for (int row = 2; row <= size + 1; ++row) {
        Cell cell;
        cell.type = CellType::Formula;
        std::string text = "SUM(B" + std::to_string(row) + ":" +
                           column_letters(size + 1) + std::to_string(row) + ")";
        cell.formula = std::make_shared<Formula>(
            parse_formula_a1(text, SheetPos{ws.name, {total_col, row}}));
        put(total_col, row, cell);
    }
    int total_row = size + 2;
    for (int col = 2; col <= total_col; ++col) {
        Cell cell;
        cell.type = CellType::Formula;
        std::string text = "SUM(" + column_letters(col) + "2:" + column_letters(col) +
                           std::to_string(size + 1) + ")";
        cell.formula = std::make_shared<Formula>(
            parse_formula_a1(text, SheetPos{ws.name, {col, total_row}}));
        put(col, total_row, cell);
    }
    wb.sheets.push_back(std::move(ws));
    return wb;
}

void BM_ParseFormulaA1(benchmark::State& state) {
    SheetPos origin{"Investment", {5, 9}};
    for (auto _ : state) {
        Formula f = parse_formula_a1("B9+C9*$B$5+D9*$B$4", origin);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_ParseFormulaA1);

void BM_RenderRoundTrip(benchmark::State& state) {
    SheetPos origin{"Data", {10, 10}};
    Formula f = parse_formula_a1("SUM(A1:C10)*J$2+IF(B2>0,1,-1)", origin);
    for (auto _ : state) {
        std::string a1 = render_a1(f, origin.coord);
        benchmark::DoNotOptimize(a1);
    }
}
BENCHMARK(BM_RenderRoundTrip);

void BM_BuildStructureModel(benchmark::State& state) {
    Workbook wb = make_grid_workbook(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        StructureModel model = build_structure_model(wb);
        benchmark::DoNotOptimize(model);
    }
}
BENCHMARK(BM_BuildStructureModel)->Arg(8)->Arg(32)->Arg(64);

void BM_CellChains(benchmark::State& state) {
    Workbook wb = make_grid_workbook(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        CellChains chains = compute_cell_chains(wb);
        benchmark::DoNotOptimize(chains);
    }
}
BENCHMARK(BM_CellChains)->Arg(32)->Arg(64);

void BM_QuartileSeries(benchmark::State& state) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1000.0);
    std::vector<double> values(10000);
    for (double& v : values) v = dist(rng);
    for (auto _ : state) {
        QuartileSeries series = quartile_series(values, 1);
        benchmark::DoNotOptimize(series);
    }
}
BENCHMARK(BM_QuartileSeries);

} // namespace

BENCHMARK_MAIN();
