#include "biokg/rrf.hpp"

#include "biokg/util.hpp"

#include <algorithm>

namespace biokg::rrf {

namespace {

const std::map<std::string, int>& default_columns(TableKind kind) {
    // UMLS 2024AA column positions.
    static const std::map<std::string, int> conso = {
        {"cui", 0},    {"lat", 1},       {"term_status", 2}, {"is_pref", 6},
        {"source", 11}, {"term_type", 12}, {"name", 14},      {"suppress", 16},
    };
    static const std::map<std::string, int> def = {
        {"cui", 0}, {"source", 4}, {"definition", 5}, {"suppress", 6}};
    static const std::map<std::string, int> sty = {
        {"cui", 0}, {"type_id", 1}, {"type_name", 3}};
    static const std::map<std::string, int> rel = {
        {"cui1", 0}, {"rel", 3}, {"cui2", 4}, {"rela", 7}, {"source", 10}};
    switch (kind) {
        case TableKind::Conso: return conso;
        case TableKind::Def: return def;
        case TableKind::Sty: return sty;
        case TableKind::Rel: return rel;
    }
    return conso;
}

LineError missing_field(const char* field) {
    return LineError{MalformedReason::MissingRequiredField,
                     std::string("missing_required_field: ") + field};
}

} // namespace

const char* table_kind_name(TableKind kind) {
    switch (kind) {
        case TableKind::Conso: return "CONSO";
        case TableKind::Def: return "DEF";
        case TableKind::Sty: return "STY";
        case TableKind::Rel: return "REL";
    }
    return "?";
}

const char* malformed_reason_name(MalformedReason reason) {
    switch (reason) {
        case MalformedReason::TooFewFields: return "too_few_fields";
        case MalformedReason::InvalidEncoding: return "invalid_encoding";
        case MalformedReason::MissingRequiredField: return "missing_required_field";
    }
    return "?";
}

TableSchema TableSchema::defaults(TableKind kind) {
    TableSchema schema;
    schema.kind = kind;
    schema.columns = default_columns(kind);
    schema.recompute_min_columns();
    return schema;
}

int TableSchema::column(const std::string& field) const {
    auto it = columns.find(field);
    if (it == columns.end())
        throw Error(ErrorKind::ConfigError,
                    "schema for " + std::string(table_kind_name(kind)) + " has no field '" +
                        field + "'");
    return it->second;
}

void TableSchema::set_column(const std::string& field, int index) {
    if (index < 0)
        throw Error(ErrorKind::ConfigError, "schema column index must be >= 0: " + field);
    if (!default_columns(kind).count(field))
        throw Error(ErrorKind::ConfigError,
                    "unknown schema field '" + field + "' for table " + table_kind_name(kind));
    columns[field] = index;
    recompute_min_columns();
}

void TableSchema::recompute_min_columns() {
    int max_index = -1;
    for (const auto& [_, idx] : columns) max_index = std::max(max_index, idx);
    min_columns = max_index + 1;
}

void IngestReport::note_malformed(uint64_t line_number, const std::string& reason) {
    if (first_malformed_lines.size() < kSampleCap)
        first_malformed_lines.emplace_back(line_number, reason);
}

std::variant<RawFields, LineError> parse_line(std::string_view line, const TableSchema& schema) {
    if (!valid_utf8(line))
        return LineError{MalformedReason::InvalidEncoding, "invalid_encoding"};
    RawFields fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('|', start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    // trailing '|' produces one empty field past the last column
    if (!line.empty() && line.back() == '|') fields.pop_back();
    if (static_cast<int>(fields.size()) < schema.min_columns)
        return LineError{MalformedReason::TooFewFields,
                         "too_few_fields: got " + std::to_string(fields.size()) + ", need " +
                             std::to_string(schema.min_columns)};
    return fields;
}

std::variant<ConsoRow, LineError> decode_conso(const RawFields& fields, const TableSchema& schema,
                                               uint64_t line_number) {
    ConsoRow row;
    row.cui = fields[static_cast<std::size_t>(schema.column("cui"))];
    row.lat = fields[static_cast<std::size_t>(schema.column("lat"))];
    row.term_status = fields[static_cast<std::size_t>(schema.column("term_status"))];
    row.is_pref = fields[static_cast<std::size_t>(schema.column("is_pref"))];
    row.source = fields[static_cast<std::size_t>(schema.column("source"))];
    row.term_type = fields[static_cast<std::size_t>(schema.column("term_type"))];
    row.name = trim(fields[static_cast<std::size_t>(schema.column("name"))]);
    row.suppress = fields[static_cast<std::size_t>(schema.column("suppress"))];
    row.line_number = line_number;
    if (row.cui.empty()) return missing_field("cui");
    if (row.name.empty()) return missing_field("name");
    return row;
}

std::variant<DefRow, LineError> decode_def(const RawFields& fields, const TableSchema& schema,
                                           uint64_t line_number) {
    DefRow row;
    row.cui = fields[static_cast<std::size_t>(schema.column("cui"))];
    row.source = fields[static_cast<std::size_t>(schema.column("source"))];
    row.definition = trim(fields[static_cast<std::size_t>(schema.column("definition"))]);
    row.suppress = fields[static_cast<std::size_t>(schema.column("suppress"))];
    row.line_number = line_number;
    if (row.cui.empty()) return missing_field("cui");
    if (row.definition.empty()) return missing_field("definition");
    return row;
}

std::variant<StyRow, LineError> decode_sty(const RawFields& fields, const TableSchema& schema,
                                           uint64_t line_number) {
    StyRow row;
    row.cui = fields[static_cast<std::size_t>(schema.column("cui"))];
    row.type_id = fields[static_cast<std::size_t>(schema.column("type_id"))];
    row.type_name = trim(fields[static_cast<std::size_t>(schema.column("type_name"))]);
    row.line_number = line_number;
    if (row.cui.empty()) return missing_field("cui");
    if (row.type_name.empty()) return missing_field("type_name");
    return row;
}

std::variant<RelRow, LineError> decode_rel(const RawFields& fields, const TableSchema& schema,
                                           uint64_t line_number) {
    RelRow row;
    row.cui1 = fields[static_cast<std::size_t>(schema.column("cui1"))];
    row.rel = fields[static_cast<std::size_t>(schema.column("rel"))];
    row.cui2 = fields[static_cast<std::size_t>(schema.column("cui2"))];
    const std::string& rela = fields[static_cast<std::size_t>(schema.column("rela"))];
    row.rela = rela.empty() ? std::nullopt : std::optional<std::string>(rela);
    row.source = fields[static_cast<std::size_t>(schema.column("source"))];
    row.line_number = line_number;
    if (row.cui1.empty()) return missing_field("cui1");
    if (row.cui2.empty()) return missing_field("cui2");
    if (row.rel.empty()) return missing_field("rel");
    return row;
}

namespace {

std::string encode_fields(const std::vector<std::pair<int, std::string_view>>& values,
                          int min_columns) {
    int width = min_columns;
    for (const auto& [idx, _] : values) width = std::max(width, idx + 1);
    std::vector<std::string> cols(static_cast<std::size_t>(width));
    for (const auto& [idx, value] : values) cols[static_cast<std::size_t>(idx)] = value;
    std::string line;
    for (const auto& col : cols) {
        line += col;
        line += '|';
    }
    return line;
}

} // namespace

std::string encode_conso(const ConsoRow& row, const TableSchema& schema) {
    return encode_fields({{schema.column("cui"), row.cui},
                          {schema.column("lat"), row.lat},
                          {schema.column("term_status"), row.term_status},
                          {schema.column("is_pref"), row.is_pref},
                          {schema.column("source"), row.source},
                          {schema.column("term_type"), row.term_type},
                          {schema.column("name"), row.name},
                          {schema.column("suppress"), row.suppress}},
                         schema.min_columns);
}

std::string encode_def(const DefRow& row, const TableSchema& schema) {
    return encode_fields({{schema.column("cui"), row.cui},
                          {schema.column("source"), row.source},
                          {schema.column("definition"), row.definition},
                          {schema.column("suppress"), row.suppress}},
                         schema.min_columns);
}

std::string encode_sty(const StyRow& row, const TableSchema& schema) {
    return encode_fields({{schema.column("cui"), row.cui},
                          {schema.column("type_id"), row.type_id},
                          {schema.column("type_name"), row.type_name}},
                         schema.min_columns);
}

std::string encode_rel(const RelRow& row, const TableSchema& schema) {
    return encode_fields({{schema.column("cui1"), row.cui1},
                          {schema.column("rel"), row.rel},
                          {schema.column("cui2"), row.cui2},
                          {schema.column("rela"), row.rela.value_or("")},
                          {schema.column("source"), row.source}},
                         schema.min_columns);
}

} // namespace biokg::rrf
