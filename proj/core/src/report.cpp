#include "sheetlint/report.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace sheetlint {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json cells_json(const std::vector<Coordinate>& cells) {
    ordered_json out = ordered_json::array();
    for (const Coordinate& c : cells) out.push_back(to_a1(c));
    return out;
}

ordered_json coord_set_json(const std::set<Coordinate>& cells) {
    ordered_json out = ordered_json::array();
    for (const Coordinate& c : cells) out.push_back(to_a1(c));
    return out;
}

} // namespace

std::string model_to_json(const StructureModel& model) {
    ordered_json doc;
    doc["workbook"] = model.workbook ? model.workbook->source_path : "";
    doc["cell_reference_cycle"] = model.cell_reference_cycle;
    doc["group_reference_cycle"] = model.group_reference_cycle;
    doc["warnings"] = model.warnings;
    doc["sheets"] = ordered_json::array();

    for (const WorksheetModel& wsm : model.sheets) {
        ordered_json jws;
        jws["name"] = wsm.name;

        jws["type_based_groups"] = ordered_json::array();
        for (const TypeBasedGroup& g : wsm.type_groups) {
            ordered_json jg;
            jg["id"] = g.id;
            jg["type"] = std::string(cell_type_name(g.type));
            if (g.formula_r1c1) jg["formula"] = *g.formula_r1c1;
            jg["cells"] = cells_json(g.cells);
            jws["type_based_groups"].push_back(std::move(jg));
        }

        jws["partitioned_formula_groups"] = ordered_json::array();
        for (const PartitionedFormulaGroup& g : wsm.formula_groups) {
            ordered_json jg;
            jg["id"] = g.id;
            jg["orientation"] = std::string(orientation_name(g.orientation));
            jg["formula"] = g.formula_r1c1;
            jg["range"] = group_range_string(g.cells);
            jg["cells"] = cells_json(g.cells);
            jg["referred_formula_groups"] = g.referred_pfgs;
            jg["reference_groups"] = ordered_json::array();
            for (const ReferenceGroup& rg : g.reference_groups) {
                ordered_json jr;
                jr["id"] = rg.id;
                jr["sheet"] = rg.sheet;
                jr["orientation"] = std::string(orientation_name(rg.orientation));
                jr["range"] = group_range_string(rg.cells);
                jg["reference_groups"].push_back(std::move(jr));
            }
            jws["partitioned_formula_groups"].push_back(std::move(jg));
        }

        jws["merged_reference_groups"] = ordered_json::array();
        for (const ReferenceGroup& rg : wsm.merged_reference_groups) {
            ordered_json jr;
            jr["id"] = rg.id;
            jr["orientation"] = std::string(orientation_name(rg.orientation));
            jr["range"] = group_range_string(rg.cells);
            jr["cells"] = cells_json(rg.cells);
            jr["provenance"] = ordered_json::array();
            for (const Provenance& p : rg.provenance) {
                ordered_json jp;
                jp["group"] = p.pfg_id;
                jp["ref_index"] = p.ref_index;
                jr["provenance"].push_back(std::move(jp));
            }
            jws["merged_reference_groups"].push_back(std::move(jr));
        }

        jws["non_blockable"] = coord_set_json(wsm.non_blockable);

        jws["blocks"] = ordered_json::array();
        for (const Block& b : wsm.blocks) {
            ordered_json jb;
            jb["id"] = b.id;
            jb["rect"] = range_to_string(b.top_left, b.bottom_right);
            jb["members"] = b.member_ids;
            jws["blocks"].push_back(std::move(jb));
        }

        jws["header_layers"] = ordered_json::array();
        for (const HeaderLayer& layer : wsm.layers) {
            ordered_json jl;
            jl["id"] = layer.id;
            jl["block"] = layer.block_id;
            jl["kind"] = layer.kind == LayerKind::ColumnLayer ? "column" : "row";
            jl["level"] = layer.level;
            jl["cells"] = cells_json(layer.cells);
            if (layer.meta_header) jl["meta_header"] = to_a1(*layer.meta_header);
            jws["header_layers"].push_back(std::move(jl));
        }

        jws["meta_headers"] = ordered_json::array();
        for (const MetaHeaderAssignment& m : wsm.meta_headers) {
            ordered_json jm;
            jm["cell"] = to_a1(m.cell);
            jm["layer"] = m.layer_id;
            jws["meta_headers"].push_back(std::move(jm));
        }

        jws["unassigned_labels"] = cells_json(wsm.unassigned_labels);

        doc["sheets"].push_back(std::move(jws));
    }
    return doc.dump(2) + "\n";
}

std::string model_to_text(const StructureModel& model) {
    std::ostringstream out;
    out << "Workbook " << (model.workbook ? model.workbook->source_path : "") << "\n";
    for (const std::string& w : model.warnings) out << "Warning: " << w << "\n";
    if (model.cell_reference_cycle) out << "Warning: circular cell references\n";
    if (model.group_reference_cycle) out << "Warning: circular group references\n";

    for (const WorksheetModel& wsm : model.sheets) {
        out << "\nWorksheet " << wsm.name << "\n";

        out << "  Type-based groups:\n";
        for (const TypeBasedGroup& g : wsm.type_groups) {
            out << "    " << cell_type_name(g.type) << " " << wsm.name << "!"
                << group_range_string(g.cells) << " (" << g.cells.size() << " cells";
            if (g.formula_r1c1) out << ", formula " << *g.formula_r1c1;
            out << ")\n";
        }

        out << "  Partitioned formula groups:\n";
        for (const PartitionedFormulaGroup& g : wsm.formula_groups) {
            out << "    " << wsm.name << "!" << group_range_string(g.cells) << " ["
                << orientation_name(g.orientation) << "] = " << g.formula_r1c1 << "\n";
            for (const ReferenceGroup& rg : g.reference_groups)
                out << "      ref -> " << rg.sheet << "!" << group_range_string(rg.cells) << "\n";
            for (const std::string& id : g.referred_pfgs)
                out << "      refers to group " << id << "\n";
        }

        out << "  Merged reference groups:\n";
        for (const ReferenceGroup& rg : wsm.merged_reference_groups)
            out << "    " << wsm.name << "!" << group_range_string(rg.cells) << " ["
                << orientation_name(rg.orientation) << "]\n";

        out << "  Non-blockable cells:";
        for (const Coordinate& c : wsm.non_blockable) out << " " << to_a1(c);
        out << "\n";

        for (const Block& b : wsm.blocks)
            out << "  Block " << wsm.name << "!" << range_to_string(b.top_left, b.bottom_right)
                << " (" << b.member_ids.size() << " groups)\n";

        for (const HeaderLayer& layer : wsm.layers) {
            out << "  " << (layer.kind == LayerKind::ColumnLayer ? "Column layer " : "Row layer ")
                << wsm.name << "!" << group_range_string(layer.cells) << " level " << layer.level
                << " of " << layer.block_id;
            if (layer.meta_header) out << " (meta-header " << to_a1(*layer.meta_header) << ")";
            out << "\n";
        }

        for (const MetaHeaderAssignment& m : wsm.meta_headers)
            out << "  Meta-header " << wsm.name << "!" << to_a1(m.cell) << " -> " << m.layer_id
                << "\n";
        if (!wsm.unassigned_labels.empty()) {
            out << "  Unassigned labels:";
            for (const Coordinate& c : wsm.unassigned_labels) out << " " << to_a1(c);
            out << "\n";
        }
    }
    return out.str();
}

std::string smells_to_json(const std::vector<SmellReport>& reports) {
    ordered_json doc = ordered_json::array();
    for (const SmellReport& r : reports) {
        ordered_json jr;
        jr["kind"] = std::string(smell_kind_name(r.kind));
        jr["detector"] = r.detector;
        jr["subject"] = r.subject.id;
        jr["worksheet"] = r.subject.sheet;
        jr["metric"] = r.metric;
        if (r.risk) jr["risk"] = std::string(risk_name(*r.risk));
        if (!r.detail.empty()) jr["detail"] = r.detail;
        doc.push_back(std::move(jr));
    }
    return doc.dump(2) + "\n";
}

std::string smells_to_text(const std::vector<SmellReport>& reports) {
    std::ostringstream out;
    std::string current;
    for (const SmellReport& r : reports) {
        if (r.detector != current) {
            current = r.detector;
            out << current << ":\n";
        }
        out << "  " << r.subject.id << "  metric=" << r.metric;
        if (r.risk) out << "  risk=" << risk_name(*r.risk);
        if (!r.detail.empty()) out << "\n    " << r.detail;
        out << "\n";
    }
    if (reports.empty()) out << "no smells reported\n";
    return out.str();
}

} // namespace sheetlint
