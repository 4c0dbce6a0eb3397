#include "sheetlint/eval.hpp"

#include "sheetlint/document.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace sheetlint {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    double intpart;
    if (std::modf(v, &intpart) == 0.0 && std::abs(v) < 9.0e15)
        return std::to_string(static_cast<long long>(v));
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

/// Two-decimal rendering for the human-readable summary; trailing zeros
/// trimmed. CSV output keeps full precision via format_number.
std::string format_stat(double v) {
    double rounded = std::round(v * 100.0) / 100.0;
    std::string out = format_number(rounded);
    return out;
}

Subject cell_subject(const std::string& sheet, Coordinate c) {
    return Subject{SubjectKind::Cell, sheet, sheet + "!" + to_a1(c)};
}

Subject sheet_subject(const std::string& sheet) {
    return Subject{SubjectKind::Worksheet, sheet, sheet};
}

std::vector<SmellReport> run_baseline_pattern_finder(const Workbook& wb,
                                                     PatternFinderVariant::Axis axis,
                                                     bool include_border,
                                                     const std::string& detector_id) {
    std::vector<SmellReport> out;
    PatternFinderVariant variant;
    variant.orientation = axis;
    variant.include_border = include_border;
    variant.evaluated_types = true;
    for (const Worksheet& ws : wb.sheets) {
        for (const Coordinate& c : baseline_pattern_finder(ws, variant)) {
            SmellReport r;
            r.kind = SmellKind::BaselinePatternFinder;
            r.detector = detector_id;
            r.subject = cell_subject(ws.name, c);
            r.metric = 1;
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<SmellReport> run_group_pattern_finder(const Workbook&, const StructureModel& model,
                                                  bool evaluated,
                                                  const std::string& detector_id) {
    std::vector<SmellReport> out;
    for (const WorksheetModel& wsm : model.sheets) {
        for (const ReferenceGroup* rg : group_pattern_finder(model, wsm, evaluated)) {
            SmellReport r;
            r.kind = SmellKind::GroupPatternFinder;
            r.detector = detector_id;
            r.subject = Subject{SubjectKind::Group, wsm.name, rg->id};
            r.metric = 1;
            r.detail = "mixed cell types in " + rg->sheet + "!" + group_range_string(rg->cells);
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<SmellReport> run_baseline_long_chain(const Workbook& wb, const Thresholds& t) {
    std::vector<SmellReport> out;
    CellChains chains = compute_cell_chains(wb);
    for (const Worksheet& ws : wb.sheets) {
        for (const auto& [coord, cell] : ws.cells) {
            if (cell.type != CellType::Formula) continue;
            auto it = chains.length.find(SheetCoord{ws.name, coord});
            if (it == chains.length.end()) continue;
            SmellReport r;
            r.kind = SmellKind::BaselineLongChain;
            r.detector = "baseline-long-chain";
            r.subject = cell_subject(ws.name, coord);
            r.metric = it->second;
            r.risk = classify(r.metric, "baseline-long-chain", t);
            if (chains.cycle) r.detail = "workbook contains circular references";
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<SmellReport> run_group_long_chain(const StructureModel& model, const Thresholds& t) {
    std::vector<SmellReport> out;
    GroupChains chains = compute_group_chains(model);
    for (const WorksheetModel& wsm : model.sheets) {
        for (const PartitionedFormulaGroup& pfg : wsm.formula_groups) {
            SmellReport r;
            r.kind = SmellKind::GroupLongChain;
            r.detector = "group-long-chain";
            r.subject = Subject{SubjectKind::Group, wsm.name, pfg.id};
            r.metric = chains.length.at(pfg.id);
            r.risk = classify(r.metric, "group-long-chain", t);
            r.detail = chains.witness.at(pfg.id);
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<SmellReport> run_feature_envy(const Workbook& wb, const StructureModel& model,
                                          const Thresholds& t, bool group_based) {
    std::vector<SmellReport> out;
    for (std::size_t si = 0; si < wb.sheets.size(); ++si) {
        const Worksheet& ws = wb.sheets[si];
        SmellReport r;
        r.kind = group_based ? SmellKind::GroupFeatureEnvy : SmellKind::BaselineFeatureEnvy;
        r.detector = group_based ? "group-feature-envy" : "baseline-feature-envy";
        r.subject = sheet_subject(ws.name);
        r.metric = group_based ? group_feature_envy(model, model.sheets[si])
                               : baseline_feature_envy(wb, ws);
        r.risk = classify(r.metric, r.detector, t);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SmellReport> run_overburdened(const StructureModel& model, const Thresholds& t,
                                          OverburdenedMetric metric) {
    std::vector<SmellReport> out;
    const std::string id = metric == OverburdenedMetric::Blocks
                               ? "overburdened-worksheet-blocks"
                               : "overburdened-worksheet-groups";
    for (const WorksheetModel& wsm : model.sheets) {
        SmellReport r;
        r.kind = SmellKind::OverburdenedWorksheet;
        r.detector = id;
        r.subject = sheet_subject(wsm.name);
        r.metric = overburdened_worksheet(wsm, metric);
        r.risk = classify(r.metric, id, t);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SmellReport> run_inconsistent_refs(const StructureModel& model) {
    std::vector<SmellReport> out;
    for (const InconsistentReference& pair : inconsistent_group_references(model)) {
        const PartitionedFormulaGroup* g = model.find_pfg(pair.pfg_id);
        const PartitionedFormulaGroup* target = model.find_pfg(pair.target_pfg_id);
        SmellReport r;
        r.kind = SmellKind::InconsistentGroupReference;
        r.detector = "inconsistent-group-reference";
        r.subject = Subject{SubjectKind::Group, g ? g->sheet : "", pair.pfg_id};
        r.metric = 1;
        if (target)
            r.detail = "refers to part of " + target->sheet + "!" +
                       group_range_string(target->cells);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SmellReport> run_missing_header(const StructureModel& model) {
    std::vector<SmellReport> out;
    for (const WorksheetModel& wsm : model.sheets) {
        for (const Block& block : wsm.blocks) {
            std::vector<Coordinate> missing = missing_headers(model, block);
            if (missing.empty()) continue;
            SmellReport r;
            r.kind = SmellKind::MissingHeader;
            r.detector = "missing-header";
            r.subject = Subject{SubjectKind::Block, wsm.name, block.id};
            r.metric = static_cast<double>(missing.size());
            std::string cells;
            for (const Coordinate& c : missing) {
                if (!cells.empty()) cells += ", ";
                cells += to_a1(c);
            }
            r.detail = "vacant header spots: " + cells;
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<DetectorSpec> make_registry() {
    using Axis = PatternFinderVariant::Axis;
    using G = DetectorSpec::Granularity;
    std::vector<DetectorSpec> registry;

    auto add = [&](std::string id, SmellKind kind, G granularity, auto fn) {
        registry.push_back(DetectorSpec{std::move(id), kind, granularity, std::move(fn)});
    };

    auto pf = [&](const std::string& id, Axis axis, bool border) {
        add(id, SmellKind::BaselinePatternFinder, G::Occurrence,
            [id, axis, border](const Workbook& wb, const StructureModel&, const Thresholds&) {
                return run_baseline_pattern_finder(wb, axis, border, id);
            });
    };
    pf("baseline-pattern-finder-col", Axis::Column, false);
    pf("baseline-pattern-finder-col-border", Axis::Column, true);
    pf("baseline-pattern-finder-row", Axis::Row, false);
    pf("baseline-pattern-finder-row-border", Axis::Row, true);
    pf("baseline-pattern-finder-combined", Axis::Combined, false);
    pf("baseline-pattern-finder-combined-border", Axis::Combined, true);

    add("group-pattern-finder", SmellKind::GroupPatternFinder, G::Occurrence,
        [](const Workbook& wb, const StructureModel& model, const Thresholds&) {
            return run_group_pattern_finder(wb, model, false, "group-pattern-finder");
        });
    add("group-pattern-finder-evaluated", SmellKind::GroupPatternFinder, G::Occurrence,
        [](const Workbook& wb, const StructureModel& model, const Thresholds&) {
            return run_group_pattern_finder(wb, model, true, "group-pattern-finder-evaluated");
        });

    add("baseline-long-chain", SmellKind::BaselineLongChain, G::EntityMetric,
        [](const Workbook& wb, const StructureModel&, const Thresholds& t) {
            return run_baseline_long_chain(wb, t);
        });
    add("group-long-chain", SmellKind::GroupLongChain, G::EntityMetric,
        [](const Workbook&, const StructureModel& model, const Thresholds& t) {
            return run_group_long_chain(model, t);
        });

    add("baseline-feature-envy", SmellKind::BaselineFeatureEnvy, G::EntityMetric,
        [](const Workbook& wb, const StructureModel& model, const Thresholds& t) {
            return run_feature_envy(wb, model, t, false);
        });
    add("group-feature-envy", SmellKind::GroupFeatureEnvy, G::EntityMetric,
        [](const Workbook& wb, const StructureModel& model, const Thresholds& t) {
            return run_feature_envy(wb, model, t, true);
        });

    add("overburdened-worksheet-blocks", SmellKind::OverburdenedWorksheet, G::EntityMetric,
        [](const Workbook&, const StructureModel& model, const Thresholds& t) {
            return run_overburdened(model, t, OverburdenedMetric::Blocks);
        });
    add("overburdened-worksheet-groups", SmellKind::OverburdenedWorksheet, G::EntityMetric,
        [](const Workbook&, const StructureModel& model, const Thresholds& t) {
            return run_overburdened(model, t, OverburdenedMetric::Groups);
        });

    add("inconsistent-group-reference", SmellKind::InconsistentGroupReference, G::Occurrence,
        [](const Workbook&, const StructureModel& model, const Thresholds&) {
            return run_inconsistent_refs(model);
        });
    add("missing-header", SmellKind::MissingHeader, G::Occurrence,
        [](const Workbook&, const StructureModel& model, const Thresholds&) {
            return run_missing_header(model);
        });

    return registry;
}

} // namespace

const std::vector<DetectorSpec>& detector_registry() {
    static const std::vector<DetectorSpec> registry = make_registry();
    return registry;
}

const DetectorSpec* find_detector(std::string_view id) {
    for (const DetectorSpec& spec : detector_registry())
        if (spec.id == id) return &spec;
    return nullptr;
}

std::vector<std::string> resolve_detector_selection(const std::vector<std::string>& selection) {
    const std::vector<DetectorSpec>& registry = detector_registry();
    std::set<std::string> chosen;

    for (const std::string& name : selection) {
        if (name == "all") {
            for (const DetectorSpec& spec : registry) chosen.insert(spec.id);
            continue;
        }
        if (find_detector(name)) {
            chosen.insert(name);
            continue;
        }
        // smell-kind aliases expand to their default variants
        if (name == "baseline-pattern-finder") {
            chosen.insert("baseline-pattern-finder-col");
            continue;
        }
        if (name == "overburdened-worksheet") {
            chosen.insert("overburdened-worksheet-blocks");
            chosen.insert("overburdened-worksheet-groups");
            continue;
        }
        std::string valid = "all";
        for (const DetectorSpec& spec : registry) valid += ", " + spec.id;
        throw Error("unknown detector '" + name + "' (valid: " + valid + ")");
    }

    std::vector<std::string> ordered;
    for (const DetectorSpec& spec : registry)
        if (chosen.count(spec.id)) ordered.push_back(spec.id);
    return ordered;
}

std::vector<SmellReport> run_detector(const DetectorSpec& spec, const Workbook& wb,
                                      const StructureModel& model, const Thresholds& thresholds) {
    return spec.run(wb, model, thresholds);
}

QuartileSeries quartile_series(std::vector<double> values, int step_percent) {
    if (values.empty()) throw Error("empty value list");
    if (step_percent < 1 || step_percent > 100) throw Error("invalid percentile step");
    std::sort(values.begin(), values.end());
    QuartileSeries series;
    const std::size_t n = values.size();
    for (int p = step_percent; p <= 100; p += step_percent) {
        // smallest value v with at least p% of the values <= v
        std::size_t count = (n * static_cast<std::size_t>(p) + 99) / 100; // ceil(n*p/100)
        if (count == 0) count = 1;
        series.points.emplace_back(p, values[count - 1]);
    }
    if (series.points.empty() || series.points.back().first != 100)
        series.points.emplace_back(100, values.back());
    return series;
}

namespace detail {

TimedResult<int> run_with_timeout_impl(const std::function<int(const CancelToken&)>& task,
                                       std::chrono::milliseconds limit) {
    auto token = std::make_shared<CancelToken>(limit);
    auto future = std::async(std::launch::async, [task, token]() { return task(*token); });

    TimedResult<int> out;
    if (future.wait_for(limit) != std::future_status::ready) {
        token->cancel();
        out.status = TaskStatus::TimedOut;
        try {
            future.get(); // join; the task unwinds at its next checkpoint
        } catch (...) {
        }
        return out;
    }
    try {
        out.value = future.get();
        out.status = TaskStatus::Completed;
    } catch (const CancelToken::Cancelled&) {
        out.status = TaskStatus::TimedOut;
    } catch (const std::exception& e) {
        out.status = TaskStatus::Errored;
        out.error = e.what();
    }
    return out;
}

} // namespace detail

namespace {

int resolve_workers(int configured, std::size_t file_count) {
    int workers = configured;
    if (workers <= 0) {
        if (const char* env = std::getenv("SHEETLINT_THREADS")) {
            workers = std::atoi(env);
        }
    }
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
    return std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(file_count, 1))));
}

struct PerFileResult {
    FileOutcome outcome;
    std::vector<MetricRecord> records;
};

PerFileResult analyze_file(const std::string& path, const std::vector<std::string>& detector_ids,
                           const Thresholds& thresholds, std::chrono::milliseconds limit) {
    PerFileResult result;
    result.outcome.path = path;

    auto task = [&](const CancelToken& token) -> int {
        Workbook wb = load_workbook(path);
        token.check();
        StructureModel model = build_structure_model(wb, &token);
        std::vector<MetricRecord> records;
        std::vector<std::string> worksheets;
        for (const Worksheet& ws : wb.sheets) worksheets.push_back(ws.name);
        for (const std::string& id : detector_ids) {
            token.check();
            const DetectorSpec* spec = find_detector(id);
            for (const SmellReport& report : spec->run(wb, model, thresholds)) {
                records.push_back(MetricRecord{id, path, report.subject.sheet,
                                               report.subject.id, report.metric});
            }
        }
        result.records = std::move(records);
        result.outcome.worksheets = std::move(worksheets);
        return 0;
    };

    TimedResult<int> timed = run_with_timeout<int>(task, limit);
    result.outcome.status = timed.status;
    result.outcome.error = timed.error;
    if (timed.status != TaskStatus::Completed) {
        result.records.clear(); // a timed-out or errored file leaves no partial records
        result.outcome.worksheets.clear();
    }
    return result;
}

void append_summary(EvalResult& result, const std::vector<std::string>& detector_ids,
                    const Thresholds& thresholds, int quartile_step) {
    // universe: every worksheet of every analyzed file
    std::vector<std::pair<std::string, std::string>> universe; // (file, worksheet)
    for (const FileOutcome& outcome : result.files)
        if (outcome.status == TaskStatus::Completed)
            for (const std::string& ws : outcome.worksheets) universe.emplace_back(outcome.path, ws);
    result.worksheets_analyzed = static_cast<long long>(universe.size());

    auto median_of = [](std::vector<double> values) {
        if (values.empty()) return 0.0;
        std::sort(values.begin(), values.end());
        std::size_t n = values.size();
        return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    };

    for (const std::string& id : detector_ids) {
        const DetectorSpec* spec = find_detector(id);
        DetectorSummary summary;
        summary.detector = id;

        std::map<std::pair<std::string, std::string>, double> detections_by_ws;
        for (const auto& [file, ws] : universe) detections_by_ws[{file, ws}] = 0.0;

        std::vector<double> metric_values;
        for (const MetricRecord& record : result.records) {
            if (record.detector != id) continue;
            summary.entities++;
            metric_values.push_back(record.value);
            double detections = 0.0;
            if (spec->granularity == DetectorSpec::Granularity::Occurrence) {
                detections = record.value;
            } else {
                const ThresholdBand* band = thresholds.band(id);
                if (band && record.value >= band->low) detections = 1.0;
            }
            auto it = detections_by_ws.find({record.file, record.worksheet});
            if (it != detections_by_ws.end()) it->second += detections;
        }

        std::vector<double> per_ws;
        per_ws.reserve(detections_by_ws.size());
        double total = 0.0;
        long long positive = 0;
        double positive_sum = 0.0;
        for (const auto& [key, value] : detections_by_ws) {
            per_ws.push_back(value);
            total += value;
            if (value > 0) {
                positive++;
                positive_sum += value;
            }
        }
        summary.detections_total = static_cast<long long>(total);
        summary.detections_average = per_ws.empty() ? 0.0 : total / static_cast<double>(per_ws.size());
        summary.detections_median = median_of(per_ws);
        summary.worksheets_positive = positive;
        summary.worksheets_positive_pct =
            per_ws.empty() ? 0.0 : 100.0 * static_cast<double>(positive) / static_cast<double>(per_ws.size());
        summary.detections_average_positive =
            positive == 0 ? 0.0 : positive_sum / static_cast<double>(positive);

        if (!metric_values.empty()) {
            double sum = 0.0;
            for (double v : metric_values) sum += v;
            summary.metric_average = sum / static_cast<double>(metric_values.size());
            summary.metric_median = median_of(metric_values);
        }

        // quartile input: record metrics for entity detectors, per-worksheet
        // detection counts for per-instance detectors
        std::vector<double> quartile_input =
            spec->granularity == DetectorSpec::Granularity::EntityMetric ? metric_values : per_ws;
        if (!quartile_input.empty()) {
            QuartileSeries series = quartile_series(std::move(quartile_input), quartile_step);
            series.kind = id;
            result.quartiles.emplace(id, std::move(series));
        }

        result.summaries.push_back(std::move(summary));
    }
}

} // namespace

EvalResult evaluate_corpus_in_memory(const EvalConfig& config) {
    if (config.timeout_seconds <= 0) throw Error("timeout must be positive");
    if (config.quartile_step < 1 || config.quartile_step > 100)
        throw Error("quartile_step must lie in 1..100");
    std::vector<std::string> detector_ids = resolve_detector_selection(config.detectors);

    EvalResult result;
    result.preprocess = preprocess_corpus(config.corpus_dir, config.filter);

    const std::vector<std::string>& files = result.preprocess.accepted;
    const auto limit = std::chrono::milliseconds(
        static_cast<long long>(config.timeout_seconds * 1000.0));

    std::vector<PerFileResult> per_file(files.size());
    const int workers = resolve_workers(config.workers, files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t index = next.fetch_add(1);
            if (index >= files.size()) break;
            per_file[index] = analyze_file(files[index], detector_ids, config.thresholds, limit);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (PerFileResult& pf : per_file) {
        result.files.push_back(std::move(pf.outcome));
        for (MetricRecord& record : pf.records) result.records.push_back(std::move(record));
    }
    std::sort(result.records.begin(), result.records.end(),
              [](const MetricRecord& a, const MetricRecord& b) {
                  if (a.detector != b.detector) return a.detector < b.detector;
                  if (a.file != b.file) return a.file < b.file;
                  if (a.worksheet != b.worksheet) return a.worksheet < b.worksheet;
                  return a.subject < b.subject;
              });

    append_summary(result, detector_ids, config.thresholds, config.quartile_step);
    return result;
}

EvalResult evaluate_corpus(const EvalConfig& config) {
    namespace fs = std::filesystem;
    EvalResult result = evaluate_corpus_in_memory(config);

    fs::create_directories(config.output_dir);
    {
        std::ofstream out(config.output_dir / "records.csv", std::ios::binary);
        out << records_to_csv(result.records);
    }
    for (const auto& [id, series] : result.quartiles) {
        std::ofstream out(config.output_dir / ("quartiles_" + id + ".csv"), std::ios::binary);
        out << quartiles_to_csv(series);
    }
    {
        std::ofstream out(config.output_dir / "summary.txt", std::ios::binary);
        out << summary_to_text(result);
    }
    {
        std::ofstream out(config.output_dir / "summary.json", std::ios::binary);
        out << summary_to_json(result);
    }
    return result;
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        out += c;
        if (c == '"') out += '"';
    }
    out += "\"";
    return out;
}

} // namespace

std::string records_to_csv(const std::vector<MetricRecord>& records) {
    std::string out = "kind,file,worksheet,subject,metric_value\n";
    for (const MetricRecord& r : records) {
        out += csv_escape(r.detector) + "," + csv_escape(r.file) + "," + csv_escape(r.worksheet) +
               "," + csv_escape(r.subject) + "," + format_number(r.value) + "\n";
    }
    return out;
}

std::string quartiles_to_csv(const QuartileSeries& series) {
    std::string out = "kind,percentile,value\n";
    for (const auto& [percentile, value] : series.points)
        out += csv_escape(series.kind) + "," + std::to_string(percentile) + "," +
               format_number(value) + "\n";
    return out;
}

std::string summary_to_text(const EvalResult& result) {
    std::ostringstream out;
    long long analyzed = 0, timed_out = 0, errored = 0;
    for (const FileOutcome& f : result.files) {
        if (f.status == TaskStatus::Completed) analyzed++;
        if (f.status == TaskStatus::TimedOut) timed_out++;
        if (f.status == TaskStatus::Errored) errored++;
    }
    out << "sheetlint corpus evaluation\n";
    out << "files total:      " << result.preprocess.total_files << "\n";
    out << "files accepted:   " << result.preprocess.accepted.size() << "\n";
    out << "  excluded unreadable:    " << result.preprocess.excluded_unreadable << "\n";
    out << "  excluded unprocessable: " << result.preprocess.excluded_unprocessable << "\n";
    out << "  excluded no formulas:   " << result.preprocess.excluded_no_formulas << "\n";
    out << "files analyzed:   " << analyzed << "\n";
    out << "files timed out:  " << timed_out << "\n";
    out << "files errored:    " << errored << "\n";
    for (const FileOutcome& f : result.files) {
        if (f.status == TaskStatus::TimedOut) out << "  timed out: " << f.path << "\n";
        if (f.status == TaskStatus::Errored)
            out << "  errored:   " << f.path << " (" << f.error << ")\n";
    }
    out << "worksheets:       " << result.worksheets_analyzed << "\n";
    out << "\n";
    for (const DetectorSummary& s : result.summaries) {
        out << "detector: " << s.detector << "\n";
        out << "  entities:                " << s.entities << "\n";
        out << "  metric avg / median:     " << format_stat(s.metric_average) << " / "
            << format_stat(s.metric_median) << "\n";
        out << "  detections total:        " << s.detections_total << "\n";
        out << "  detections avg / median: " << format_stat(s.detections_average) << " / "
            << format_stat(s.detections_median) << "\n";
        out << "  worksheets (>0):         " << s.worksheets_positive << " ("
            << format_stat(s.worksheets_positive_pct) << "%)\n";
        out << "  detections avg (>0):     " << format_stat(s.detections_average_positive)
            << "\n";
        out << "\n";
    }
    return out.str();
}

std::string summary_to_json(const EvalResult& result) {
    ordered_json doc;
    doc["total_files"] = result.preprocess.total_files;
    doc["accepted"] = result.preprocess.accepted.size();
    doc["excluded_unreadable"] = result.preprocess.excluded_unreadable;
    doc["excluded_unprocessable"] = result.preprocess.excluded_unprocessable;
    doc["excluded_no_formulas"] = result.preprocess.excluded_no_formulas;
    doc["worksheets_analyzed"] = result.worksheets_analyzed;
    doc["files"] = ordered_json::array();
    for (const FileOutcome& f : result.files) {
        ordered_json jf;
        jf["path"] = f.path;
        jf["status"] = f.status == TaskStatus::Completed
                           ? "analyzed"
                           : (f.status == TaskStatus::TimedOut ? "timed-out" : "errored");
        if (!f.error.empty()) jf["error"] = f.error;
        doc["files"].push_back(std::move(jf));
    }
    doc["detectors"] = ordered_json::array();
    for (const DetectorSummary& s : result.summaries) {
        ordered_json js;
        js["detector"] = s.detector;
        js["entities"] = s.entities;
        js["metric_average"] = s.metric_average;
        js["metric_median"] = s.metric_median;
        js["detections_total"] = s.detections_total;
        js["detections_average"] = s.detections_average;
        js["detections_median"] = s.detections_median;
        js["worksheets_positive"] = s.worksheets_positive;
        js["worksheets_positive_pct"] = s.worksheets_positive_pct;
        js["detections_average_positive"] = s.detections_average_positive;
        doc["detectors"].push_back(std::move(js));
    }
    return doc.dump(2) + "\n";
}

namespace {

Thresholds parse_thresholds_json(const json& source) {
    Thresholds t = Thresholds::defaults();
    const json* bands = &source;
    if (source.is_object() && source.contains("thresholds")) bands = &source["thresholds"];
    if (!bands->is_object()) throw Error("thresholds must be an object");
    for (auto it = bands->begin(); it != bands->end(); ++it) {
        const json& entry = it.value();
        if (!entry.is_object() || !entry.contains("low") || !entry.contains("high"))
            throw Error("threshold '" + it.key() + "' needs 'low' and 'high'");
        ThresholdBand band;
        band.low = entry["low"].get<double>();
        band.high = entry["high"].get<double>();
        if (entry.contains("medium")) band.medium = entry["medium"].get<double>();
        if (band.low > band.high)
            throw Error("threshold '" + it.key() + "': low must not exceed high");
        t.bands[it.key()] = band;
    }
    return t;
}

json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open config: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("config parse error in " + path.string() + ": " + e.what());
    }
}

} // namespace

Thresholds load_thresholds(const std::filesystem::path& path) {
    return parse_thresholds_json(parse_json_file(path));
}

EvalConfig load_eval_config(const std::filesystem::path& path) {
    json doc = parse_json_file(path);
    if (!doc.is_object()) throw Error("config must be an object: " + path.string());

    EvalConfig config;
    if (doc.contains("corpus_dir")) config.corpus_dir = doc["corpus_dir"].get<std::string>();
    if (doc.contains("output_dir")) config.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("detectors")) {
        config.detectors.clear();
        for (const json& d : doc["detectors"]) config.detectors.push_back(d.get<std::string>());
    }
    if (doc.contains("timeout_seconds")) config.timeout_seconds = doc["timeout_seconds"].get<double>();
    if (config.timeout_seconds <= 0) throw Error("config: timeout_seconds must be positive");
    if (doc.contains("workers")) config.workers = doc["workers"].get<int>();
    if (doc.contains("quartile_step")) config.quartile_step = doc["quartile_step"].get<int>();
    if (doc.contains("filter"))
        config.filter = preprocess_filter_from_name(doc["filter"].get<std::string>());
    if (doc.contains("thresholds")) config.thresholds = parse_thresholds_json(doc);
    return config;
}

} // namespace sheetlint
