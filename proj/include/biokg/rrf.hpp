#pragma once

#include "biokg/errors.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace biokg::rrf {

enum class TableKind { Conso, Def, Sty, Rel };

const char* table_kind_name(TableKind kind);

// Column layout of one RRF table. Defaults follow the public UMLS 2024AA
// column documentation; every index is overridable from the config file
// because licensed layouts drift across releases.
struct TableSchema {
    TableKind kind;
    std::map<std::string, int> columns; // field name -> zero-based column
    int min_columns = 0;

    static TableSchema defaults(TableKind kind);

    int column(const std::string& field) const;
    void set_column(const std::string& field, int index);

    bool operator==(const TableSchema&) const = default;

private:
    void recompute_min_columns();
};

struct ConsoRow {
    std::string cui;
    std::string lat;         // 3-letter language code
    std::string term_status; // TS
    std::string is_pref;     // ISPREF
    std::string source;      // SAB
    std::string term_type;   // TTY
    std::string name;        // STR, trimmed
    std::string suppress;
    uint64_t line_number = 0;

    bool operator==(const ConsoRow&) const = default;
};

struct DefRow {
    std::string cui;
    std::string source;
    std::string definition; // trimmed
    std::string suppress;
    uint64_t line_number = 0;

    bool operator==(const DefRow&) const = default;
};

struct StyRow {
    std::string cui;
    std::string type_id;   // TUI
    std::string type_name; // STY label, trimmed
    uint64_t line_number = 0;

    bool operator==(const StyRow&) const = default;
};

struct RelRow {
    std::string cui1;
    std::string rel;                  // general relation code
    std::string cui2;
    std::optional<std::string> rela;  // specific label; absent when column empty
    std::string source;
    uint64_t line_number = 0;

    bool operator==(const RelRow&) const = default;
};

enum class MalformedReason { TooFewFields, InvalidEncoding, MissingRequiredField };

struct LineError {
    MalformedReason reason;
    std::string detail;
};

using RawFields = std::vector<std::string>;

// Splits on '|' and drops the final empty field produced by a trailing
// delimiter. Rejects lines with fewer than schema.min_columns fields or
// invalid UTF-8.
std::variant<RawFields, LineError> parse_line(std::string_view line, const TableSchema& schema);

std::variant<ConsoRow, LineError> decode_conso(const RawFields& fields, const TableSchema& schema,
                                               uint64_t line_number);
std::variant<DefRow, LineError> decode_def(const RawFields& fields, const TableSchema& schema,
                                           uint64_t line_number);
std::variant<StyRow, LineError> decode_sty(const RawFields& fields, const TableSchema& schema,
                                           uint64_t line_number);
std::variant<RelRow, LineError> decode_rel(const RawFields& fields, const TableSchema& schema,
                                           uint64_t line_number);

// Serialize rows back to RRF text (inverse of parse+decode for '|'-free
// field values).
std::string encode_conso(const ConsoRow& row, const TableSchema& schema);
std::string encode_def(const DefRow& row, const TableSchema& schema);
std::string encode_sty(const StyRow& row, const TableSchema& schema);
std::string encode_rel(const RelRow& row, const TableSchema& schema);

struct IngestReport {
    uint64_t rows_read = 0;
    uint64_t rows_decoded = 0;
    uint64_t rows_malformed = 0;
    // (line_number, reason) samples, capped at kSampleCap
    std::vector<std::pair<uint64_t, std::string>> first_malformed_lines;

    static constexpr std::size_t kSampleCap = 10;

    void note_malformed(uint64_t line_number, const std::string& reason);
};

const char* malformed_reason_name(MalformedReason reason);

namespace detail {
template <typename RowT>
std::variant<RowT, LineError> decode_dispatch(const RawFields& fields, const TableSchema& schema,
                                              uint64_t line_number) {
    if constexpr (std::is_same_v<RowT, ConsoRow>) {
        return decode_conso(fields, schema, line_number);
    } else if constexpr (std::is_same_v<RowT, DefRow>) {
        return decode_def(fields, schema, line_number);
    } else if constexpr (std::is_same_v<RowT, StyRow>) {
        return decode_sty(fields, schema, line_number);
    } else {
        return decode_rel(fields, schema, line_number);
    }
}
} // namespace detail

// Streaming reader over one RRF file. Memory use is bounded by the longest
// line; malformed lines are skipped, counted, and sampled into the report.
// A mid-stream read failure aborts the stream and leaves the partial report
// available (failed() returns true).
template <typename RowT>
class TableReader {
public:
    TableReader(std::string path, TableSchema schema)
        : path_(std::move(path)), schema_(std::move(schema)), in_(path_, std::ios::binary) {
        if (!in_) throw Error(ErrorKind::FileNotFound, "cannot open RRF file: " + path_);
    }

    std::optional<RowT> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++report_.rows_read;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            auto parsed = parse_line(line, schema_);
            if (auto* err = std::get_if<LineError>(&parsed)) {
                ++report_.rows_malformed;
                report_.note_malformed(report_.rows_read, err->detail);
                continue;
            }
            auto decoded = detail::decode_dispatch<RowT>(std::get<RawFields>(parsed), schema_,
                                                         report_.rows_read);
            if (auto* err = std::get_if<LineError>(&decoded)) {
                ++report_.rows_malformed;
                report_.note_malformed(report_.rows_read, err->detail);
                continue;
            }
            ++report_.rows_decoded;
            return std::get<RowT>(std::move(decoded));
        }
        if (in_.bad()) failed_ = true;
        return std::nullopt;
    }

    const IngestReport& report() const { return report_; }
    bool failed() const { return failed_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    TableSchema schema_;
    std::ifstream in_;
    IngestReport report_;
    bool failed_ = false;
};

using ConsoReader = TableReader<ConsoRow>;
using DefReader = TableReader<DefRow>;
using StyReader = TableReader<StyRow>;
using RelReader = TableReader<RelRow>;

// Drives a reader to exhaustion, invoking fn per decoded row. Throws on a
// mid-stream IO failure after fn has seen all decodable rows.
template <typename RowT, typename Fn>
IngestReport stream_table(const std::string& path, const TableSchema& schema, Fn&& fn) {
    TableReader<RowT> reader(path, schema);
    while (auto row = reader.next()) fn(*row);
    if (reader.failed()) throw Error(ErrorKind::Io, "read failed mid-stream: " + path);
    return reader.report();
}

} // namespace biokg::rrf
