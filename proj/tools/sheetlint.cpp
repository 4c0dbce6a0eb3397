// sheetlint command line front end: preprocess corpora, inspect inferred
// structure, report smells, and run batch evaluations.

#include "sheetlint/document.hpp"
#include "sheetlint/eval.hpp"
#include "sheetlint/preprocess.hpp"
#include "sheetlint/report.hpp"
#include "sheetlint/smells.hpp"
#include "sheetlint/structure.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace sheetlint;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFailOn = 2;

int cmd_preprocess(const std::string& dir, const std::string& filter_name,
                   const std::string& out_path) {
    PreprocessFilter filter = preprocess_filter_from_name(filter_name);
    PreprocessReport report = preprocess_corpus(dir, filter);
    std::string rendered = preprocess_report_json(report, filter, dir);
    if (out_path.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error("cannot write report: " + out_path);
        out << rendered;
        std::cout << "preprocess report written to " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_analyze(const std::string& file, const std::string& format) {
    Workbook wb = load_workbook(file);
    StructureModel model = build_structure_model(wb);
    std::cout << (format == "json" ? model_to_json(model) : model_to_text(model));
    return kExitOk;
}

Risk parse_risk(const std::string& name) {
    if (name == "none") return Risk::None;
    if (name == "low") return Risk::Low;
    if (name == "high") return Risk::High;
    throw Error("unknown risk level '" + name + "' (expected none, low, or high)");
}

int cmd_smells(const std::string& file, std::vector<std::string> detectors,
               const std::string& thresholds_path, const std::string& format,
               const std::string& min_risk_name, const std::string& fail_on_name) {
    Thresholds thresholds = Thresholds::defaults();
    if (!thresholds_path.empty()) thresholds = load_thresholds(thresholds_path);

    if (detectors.empty()) detectors = {"all"};
    std::vector<std::string> ids = resolve_detector_selection(detectors);

    Workbook wb = load_workbook(file);
    StructureModel model = build_structure_model(wb);

    Risk min_risk = parse_risk(min_risk_name);
    std::vector<SmellReport> all;
    std::vector<SmellReport> shown;
    for (const std::string& id : ids) {
        const DetectorSpec* spec = find_detector(id);
        for (SmellReport& report : run_detector(*spec, wb, model, thresholds)) {
            // per-instance findings are always shown; thresholded metrics are
            // filtered by risk level
            bool visible = !report.risk || *report.risk >= min_risk;
            all.push_back(report);
            if (visible) shown.push_back(std::move(report));
        }
    }

    std::cout << (format == "json" ? smells_to_json(shown) : smells_to_text(shown));

    if (!fail_on_name.empty()) {
        Risk fail_on = parse_risk(fail_on_name);
        for (const SmellReport& report : all)
            if (report.risk && *report.risk >= fail_on && fail_on != Risk::None)
                return kExitFailOn;
    }
    return kExitOk;
}

int cmd_evaluate(const std::string& dir, const std::string& config_path,
                 const std::string& out_dir) {
    EvalConfig config;
    if (!config_path.empty()) config = load_eval_config(config_path);
    if (!dir.empty()) config.corpus_dir = dir;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (config.corpus_dir.empty()) throw Error("no corpus directory given");
    if (config.output_dir.empty()) config.output_dir = "sheetlint-eval";

    EvalResult result = evaluate_corpus(config);
    std::cout << summary_to_text(result);
    std::cout << "records and quartile series written to " << config.output_dir.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spreadsheet structure analysis and smell detection"};
    app.require_subcommand(1);

    // preprocess
    std::string pre_dir, pre_filter = "complete", pre_out;
    CLI::App* pre = app.add_subcommand("preprocess", "classify and filter a corpus directory");
    pre->add_option("dir", pre_dir, "corpus directory")->required();
    pre->add_option("--filter", pre_filter, "complete | readable-only | has-formulas")
        ->default_val("complete");
    pre->add_option("--out", pre_out, "write the JSON report to this path");

    // analyze
    std::string an_file, an_format = "text";
    CLI::App* an = app.add_subcommand("analyze", "print the inferred structure model");
    an->add_option("file", an_file, "workbook file")->required();
    an->add_option("--format", an_format, "text | json")->default_val("text");

    // smells
    std::string sm_file, sm_thresholds, sm_format = "text", sm_min_risk = "high", sm_fail_on;
    std::vector<std::string> sm_detectors;
    CLI::App* sm = app.add_subcommand("smells", "run smell detectors on one workbook");
    sm->add_option("file", sm_file, "workbook file")->required();
    sm->add_option("--detectors", sm_detectors, "detector ids or smell kinds (default: all)")
        ->delimiter(',');
    sm->add_option("--thresholds", sm_thresholds, "threshold configuration (JSON)");
    sm->add_option("--format", sm_format, "text | json")->default_val("text");
    sm->add_option("--min-risk", sm_min_risk,
                   "lowest risk level shown for thresholded smells (none | low | high)")
        ->default_val("high");
    sm->add_option("--fail-on", sm_fail_on, "exit nonzero when a smell reaches this risk level");

    // evaluate
    std::string ev_dir, ev_config, ev_out;
    CLI::App* ev = app.add_subcommand("evaluate", "run the corpus evaluation harness");
    ev->add_option("dir", ev_dir, "corpus directory");
    ev->add_option("--config", ev_config, "evaluation configuration (JSON)");
    ev->add_option("--out", ev_out, "output directory for CSVs and summaries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (pre->parsed()) return cmd_preprocess(pre_dir, pre_filter, pre_out);
        if (an->parsed()) return cmd_analyze(an_file, an_format);
        if (sm->parsed())
            return cmd_smells(sm_file, sm_detectors, sm_thresholds, sm_format, sm_min_risk,
                              sm_fail_on);
        if (ev->parsed()) return cmd_evaluate(ev_dir, ev_config, ev_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
