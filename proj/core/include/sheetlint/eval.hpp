#pragma once

#include "sheetlint/preprocess.hpp"
#include "sheetlint/smells.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sheetlint {

// --- detector registry -------------------------------------------------------

/// A runnable detector configuration. `id` is the stable name used on the
/// command line, in CSV output, and in threshold configuration.
struct DetectorSpec {
    std::string id;
    SmellKind kind;
    /// Entities carry a metric each (chains, envy, overburdened); occurrences
    /// are per-instance findings aggregated per worksheet.
    enum class Granularity { EntityMetric, Occurrence } granularity;
    std::function<std::vector<SmellReport>(const Workbook&, const StructureModel&,
                                           const Thresholds&)> run;
};

const std::vector<DetectorSpec>& detector_registry();
const DetectorSpec* find_detector(std::string_view id);

/// Expand detector selections: exact ids pass through, smell-kind names
/// expand to their default variants, "all" selects everything. Throws Error
/// listing valid names for an unknown selection.
std::vector<std::string> resolve_detector_selection(const std::vector<std::string>& selection);

/// Run one detector over every worksheet of a workbook.
std::vector<SmellReport> run_detector(const DetectorSpec& spec, const Workbook& wb,
                                      const StructureModel& model, const Thresholds& thresholds);

// --- records and aggregation --------------------------------------------------

struct MetricRecord {
    std::string detector;
    std::string file;
    std::string worksheet;
    std::string subject;
    double value = 0.0;
};

struct QuartileSeries {
    std::string kind;
    std::vector<std::pair<int, double>> points; // (percentile, value), non-decreasing
};

/// Point at percentile p = smallest value v such that at least p% of the
/// values are <= v, emitted at the given step. Throws Error for empty input.
QuartileSeries quartile_series(std::vector<double> values, int step_percent = 1);

// --- timeout -----------------------------------------------------------------

enum class TaskStatus { Completed, TimedOut, Errored };

template <typename T>
struct TimedResult {
    TaskStatus status = TaskStatus::Completed;
    std::optional<T> value;
    std::string error;
};

namespace detail {
TimedResult<int> run_with_timeout_impl(const std::function<int(const CancelToken&)>& task,
                                       std::chrono::milliseconds limit);
}

/// Run the task with a cooperative deadline. The task receives a CancelToken
/// it must poll; once the limit passes, the token trips, the task unwinds,
/// and a timed-out marker is returned with no partial result.
template <typename T>
TimedResult<T> run_with_timeout(const std::function<T(const CancelToken&)>& task,
                                std::chrono::milliseconds limit) {
    std::optional<T> slot;
    auto wrapped = [&](const CancelToken& token) {
        slot = task(token);
        return 0;
    };
    TimedResult<int> raw = detail::run_with_timeout_impl(wrapped, limit);
    TimedResult<T> out;
    out.status = raw.status;
    out.error = raw.error;
    if (raw.status == TaskStatus::Completed) out.value = std::move(slot);
    return out;
}

// --- corpus evaluation ---------------------------------------------------------

struct EvalConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path output_dir;
    std::vector<std::string> detectors{"all"};
    double timeout_seconds = 300.0;
    Thresholds thresholds = Thresholds::defaults();
    PreprocessFilter filter = PreprocessFilter::Complete;
    int workers = 0; // 0 = SHEETLINT_THREADS env or hardware concurrency
    int quartile_step = 1;
};

EvalConfig load_eval_config(const std::filesystem::path& path);
Thresholds load_thresholds(const std::filesystem::path& path);

struct FileOutcome {
    std::string path;
    TaskStatus status = TaskStatus::Completed;
    std::string error;
    std::vector<std::string> worksheets;
};

struct DetectorSummary {
    std::string detector;
    long long entities = 0;          // records emitted
    double metric_average = 0.0;     // over record values
    double metric_median = 0.0;
    long long detections_total = 0;  // occurrences / entities at low risk or above
    double detections_average = 0.0; // per worksheet
    double detections_median = 0.0;
    long long worksheets_positive = 0;
    double worksheets_positive_pct = 0.0;
    double detections_average_positive = 0.0;
};

struct EvalResult {
    PreprocessReport preprocess;
    std::vector<FileOutcome> files;   // analyzed, timed out, errored
    std::vector<MetricRecord> records; // sorted, excluding timed-out/errored files
    std::vector<DetectorSummary> summaries;
    long long worksheets_analyzed = 0;
    std::map<std::string, QuartileSeries> quartiles; // per detector
};

/// Run the selected detectors over every accepted corpus file under a
/// per-file timeout, writing records.csv, per-detector quartile CSVs,
/// summary.txt, and summary.json into the output directory. Results are
/// independent of worker scheduling.
EvalResult evaluate_corpus(const EvalConfig& config);

/// Aggregation without touching the filesystem (used by tests and the
/// single-file command).
EvalResult evaluate_corpus_in_memory(const EvalConfig& config);

std::string records_to_csv(const std::vector<MetricRecord>& records);
std::string quartiles_to_csv(const QuartileSeries& series);
std::string summary_to_text(const EvalResult& result);
std::string summary_to_json(const EvalResult& result);

} // namespace sheetlint
