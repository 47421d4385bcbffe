#include "bmz/io.hpp"

namespace bmz::io {

namespace {

Rational parse_rational_or_throw(const json& j, const std::string& where) {
    if (!j.is_string())
        throw ParseError(where + ": coordinates must be rational strings");
    const auto parsed = parse_rational(j.get<std::string>());
    if (!parsed)
        throw ParseError(where + ": malformed rational \"" + j.get<std::string>() +
                         "\"");
    return *parsed;
}

}  // namespace

CollectionDocument collection_document_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    CollectionDocument doc;
    if (!j.contains("format_version") || !j["format_version"].is_number_integer())
        throw ParseError("missing integer format_version");
    doc.format_version = j["format_version"].get<int>();
    if (doc.format_version != 1)
        throw ParseError("unsupported format_version " +
                         std::to_string(doc.format_version));
    for (const char* key : {"d", "r"})
        if (!j.contains(key) || !j[key].is_number_integer())
            throw ParseError(std::string("missing integer field ") + key);
    doc.collection.d = j["d"].get<int>();
    doc.collection.r = j["r"].get<int>();
    if (!j.contains("points") || !j["points"].is_array())
        throw ParseError("missing points array");
    int pi = 0;
    for (const auto& pj : j["points"]) {
        if (!pj.is_array()) throw ParseError("points must be coordinate arrays");
        QVector pt;
        int ci = 0;
        for (const auto& cj : pj) {
            pt.push_back(parse_rational_or_throw(
                cj, "point " + std::to_string(pi + 1) + " coordinate " +
                        std::to_string(ci + 1)));
            ++ci;
        }
        doc.collection.points.push_back(std::move(pt));
        ++pi;
    }
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw ParseError("label must be a string");
        doc.label = j["label"].get<std::string>();
    }
    if (j.contains("provenance")) {
        if (!j["provenance"].is_string())
            throw ParseError("provenance must be a string");
        doc.provenance = j["provenance"].get<std::string>();
    }
    return doc;
}

CollectionDocument parse_collection_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return collection_document_from_json(j);
}

json collection_document_to_json(const CollectionDocument& doc) {
    json j;
    j["format_version"] = doc.format_version;
    j["d"] = doc.collection.d;
    j["r"] = doc.collection.r;
    json points = json::array();
    for (const auto& pt : doc.collection.points) points.push_back(vector_json(pt));
    j["points"] = points;
    if (doc.label) j["label"] = *doc.label;
    if (doc.provenance) j["provenance"] = *doc.provenance;
    return j;
}

std::string serialize_collection_document(const CollectionDocument& doc) {
    return collection_document_to_json(doc).dump(2) + "\n";
}

ColoredClassesDocument parse_colored_classes(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    ColoredClassesDocument doc;
    if (j.contains("format_version")) {
        if (!j["format_version"].is_number_integer())
            throw ParseError("format_version must be an integer");
        doc.format_version = j["format_version"].get<int>();
    }
    if (!j.contains("d") || !j["d"].is_number_integer())
        throw ParseError("missing integer field d");
    doc.d = j["d"].get<int>();
    if (!j.contains("classes") || !j["classes"].is_array())
        throw ParseError("missing classes array");
    int ki = 0;
    for (const auto& cls : j["classes"]) {
        if (!cls.is_array()) throw ParseError("classes must be arrays of points");
        std::vector<QVector> points;
        int pi = 0;
        for (const auto& pj : cls) {
            if (!pj.is_array()) throw ParseError("points must be coordinate arrays");
            QVector pt;
            int ci = 0;
            for (const auto& cj : pj) {
                pt.push_back(parse_rational_or_throw(
                    cj, "class " + std::to_string(ki + 1) + " point " +
                            std::to_string(pi + 1) + " coordinate " +
                            std::to_string(ci + 1)));
                ++ci;
            }
            points.push_back(std::move(pt));
            ++pi;
        }
        doc.classes.push_back(std::move(points));
        ++ki;
    }
    if (j.contains("z")) {
        if (!j["z"].is_array()) throw ParseError("z must be a coordinate array");
        QVector z;
        int ci = 0;
        for (const auto& cj : j["z"]) {
            z.push_back(parse_rational_or_throw(
                cj, "z coordinate " + std::to_string(ci + 1)));
            ++ci;
        }
        doc.z = std::move(z);
    }
    return doc;
}

json rational_json(const Rational& q) { return to_string(q); }

json vector_json(const QVector& v) {
    json arr = json::array();
    for (const auto& q : v) arr.push_back(rational_json(q));
    return arr;
}

json placement_json(const RookPlacement& p) {
    json boards = json::array();
    for (int k = 0; k <= p.d; ++k) {
        json rows = json::array();
        for (int col = 0; col < p.r - 1; ++col) rows.push_back(p.row(k, col) + 1);
        boards.push_back(rows);
    }
    return json{{"boards", boards}};
}

json degree_report_json(const DegreeReport& report) {
    json hits = json::array();
    for (const auto& h : report.hits) {
        json lambdas = json::array();
        for (const auto& l : h.hit.barycentric) lambdas.push_back(rational_json(l));
        hits.push_back(json{{"placement_index", h.placement_index},
                            {"placement", placement_json(h.placement)},
                            {"csgn", h.signs.csgn},
                            {"gsgn", h.signs.gsgn},
                            {"sgn", h.signs.sgn},
                            {"t", rational_json(h.hit.t)},
                            {"barycentric", lambdas}});
    }
    return json{{"ray", vector_json(report.ray_direction)},
                {"degree", report.degree},
                {"modulus", report.modulus},
                {"residue", report.residue},
                {"hit_count", report.hits.size()},
                {"hits", hits}};
}

json degree_error_json(const DegreeError& error) {
    return json{{"failure", error.failure == DegreeFailure::NonGenericRay
                                ? "non-generic-ray"
                                : "degenerate-facet"},
                {"placement_index", error.placement_index},
                {"placement", placement_json(error.placement)}};
}

json genpos_report_json(const GenPosReport& report) {
    json violations = json::array();
    for (const auto& v : report.violations)
        violations.push_back(json{{"placement_index", v.placement_index},
                                  {"placement", placement_json(v.placement)},
                                  {"condition", v.condition},
                                  {"point", v.point}});
    json j;
    j["sufficiently_general"] = report.sufficiently_general
                                    ? json(*report.sufficiently_general)
                                    : json(nullptr);
    j["almost_general"] =
        report.almost_general ? json(*report.almost_general) : json(nullptr);
    j["violation_count"] = report.violation_count;
    j["violations"] = violations;
    return j;
}

json census_json(const CensusResult& census) {
    json entries = json::array();
    for (const auto& e : census.tverberg)
        entries.push_back(json{{"placement_index", e.placement_index},
                               {"placement", placement_json(e.placement)},
                               {"witness", vector_json(e.witness)}});
    return json{{"tverberg_count", census.tverberg.size()},
                {"class_count", census.class_count},
                {"classes_fully_tverberg", census.classes_fully_tverberg},
                {"partitions", entries}};
}

json motion_trace_json(const MotionTrace& trace) {
    json samples = json::array();
    for (const auto& s : trace.samples) {
        json sj{{"t", rational_json(s.t)},
                {"sufficiently_general", s.sufficiently_general}};
        sj["degree"] = s.degree ? json(*s.degree) : json(nullptr);
        sj["residue"] = s.residue ? json(*s.residue) : json(nullptr);
        samples.push_back(sj);
    }
    json j{{"modulus", trace.modulus}, {"samples", samples}};
    j["residue"] = trace.residue ? json(*trace.residue) : json(nullptr);
    return j;
}

json search_log_json(const SearchLog& log) {
    json finds = json::array();
    for (const auto& f : log.found) {
        CollectionDocument doc;
        doc.collection = f.collection;
        finds.push_back(json{{"trial", f.trial},
                             {"collection", collection_document_to_json(doc)},
                             {"degree_report", degree_report_json(f.report)},
                             {"census", census_json(f.census)}});
    }
    return json{{"seed", log.seed},
                {"trials", log.trials},
                {"skipped", log.skipped},
                {"found", finds}};
}

json sign_case_json(const SignCaseReport& report) {
    json preds = json::array();
    for (const auto& p : report.predicates)
        preds.push_back(json{{"name", p.name}, {"sign", p.sign}});
    return json{{"case", report.case_id},
                {"placement", placement_json(report.placement)},
                {"csgn", report.signs.csgn},
                {"gsgn", report.signs.gsgn},
                {"sgn", report.signs.sgn},
                {"predicates", preds},
                {"dictionary_condition", report.dictionary_condition},
                {"sign_zero_iff_condition", report.sign_zero_iff_condition}};
}

json colored_solve_json(const ColoredSolveResult& result) {
    json classes = json::array();
    for (std::size_t i = 0; i < result.class_points.size(); ++i) {
        json indices = json::array();
        for (int idx : result.class_indices[i]) indices.push_back(idx + 1);
        json pts = json::array();
        for (const auto& pt : result.class_points[i]) pts.push_back(vector_json(pt));
        classes.push_back(json{{"point_indices", indices}, {"points", pts}});
    }
    return json{{"placement", placement_json(result.placement)},
                {"classes", classes},
                {"witness", vector_json(result.witness)}};
}

}  // namespace bmz::io
