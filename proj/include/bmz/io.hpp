#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bmz/degree.hpp"
#include "bmz/experiments.hpp"
#include "bmz/genpos.hpp"
#include "bmz/model.hpp"

// File formats and report serialization. Collections travel as UTF-8 JSON
// documents with every coordinate an exact "numerator/denominator" string;
// parse(serialize(c)) == c bit-for-bit. Keys serialize in sorted order, so
// identical inputs yield byte-identical outputs.

namespace bmz::io {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CollectionDocument {
    int format_version = 1;
    BmzCollection collection;
    std::optional<std::string> label;
    std::optional<std::string> provenance;
};

// Structural/parse failures throw ParseError; shape and distinctness issues
// are left to validate_collection so callers can report violations.
CollectionDocument collection_document_from_json(const json& j);
CollectionDocument parse_collection_document(const std::string& text);
json collection_document_to_json(const CollectionDocument& doc);
std::string serialize_collection_document(const CollectionDocument& doc);

struct ColoredClassesDocument {
    int format_version = 1;
    int d = 0;
    std::vector<std::vector<QVector>> classes;  // d+1 classes, equal sizes
    std::optional<QVector> z;
};

ColoredClassesDocument parse_colored_classes(const std::string& text);

json rational_json(const Rational& q);
json vector_json(const QVector& v);
json placement_json(const RookPlacement& p);  // 1-based board rows

json degree_report_json(const DegreeReport& report);
json degree_error_json(const DegreeError& error);
json genpos_report_json(const GenPosReport& report);
json census_json(const CensusResult& census);
json motion_trace_json(const MotionTrace& trace);
json search_log_json(const SearchLog& log);
json sign_case_json(const SignCaseReport& report);
json colored_solve_json(const ColoredSolveResult& result);

}  // namespace bmz::io
