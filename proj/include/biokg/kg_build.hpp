#pragma once

#include "biokg/graph_types.hpp"
#include "biokg/rrf.hpp"
#include "biokg/snapshot.hpp"

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace biokg::kg {

struct BuildOptions {
    // Default keeps suppressed rows; --drop-suppressed excludes SUPPRESS in
    // {O, E, Y} from MRCONSO and MRDEF.
    bool drop_suppressed = false;
};

bool suppressed(const std::string& suppress_flag);

// Names of one concept after English filtering.
struct NameEntry {
    std::string preferred_name;
    std::vector<std::string> synonyms; // distinct, first-seen, excludes preferred
};

// Accumulates MRCONSO rows: LAT='ENG' only, one preferred name per CUI
// (first row with TS='P' and ISPREF='Y', else the first English row),
// every other distinct name becomes a synonym.
class NameCollector {
public:
    explicit NameCollector(BuildOptions options = {}) : options_(options) {}

    void add(const rrf::ConsoRow& row);

    // CUI -> names, insertion order dropped; keys are the English concept set.
    std::map<std::string, NameEntry> finish() const;
    std::unordered_set<std::string> english_cuis() const;

private:
    struct State {
        std::vector<std::string> names; // distinct, first-seen
        int preferred_index = -1;       // first P/Y row
    };
    BuildOptions options_;
    std::unordered_map<std::string, State> by_cui_;
};

struct DefinitionEntry {
    std::string joined; // segments joined by kDefinitionSeparator
    uint32_t count = 0;
};

// Aggregates MRDEF rows for English CUIs: exact-duplicate texts collapse,
// survivors join in first-seen order.
class DefinitionCollector {
public:
    DefinitionCollector(const std::unordered_set<std::string>& english_cuis,
                        BuildOptions options = {})
        : english_(english_cuis), options_(options) {}

    void add(const rrf::DefRow& row);
    std::map<std::string, DefinitionEntry> finish() const;

private:
    const std::unordered_set<std::string>& english_;
    BuildOptions options_;
    std::unordered_map<std::string, std::vector<std::string>> by_cui_;
};

// Collects MRSTY type names for English CUIs, first-seen order, deduplicated.
class SemanticTypeCollector {
public:
    explicit SemanticTypeCollector(const std::unordered_set<std::string>& english_cuis)
        : english_(english_cuis) {}

    void add(const rrf::StyRow& row);
    std::map<std::string, std::vector<std::string>> finish() const;

private:
    const std::unordered_set<std::string>& english_;
    std::unordered_map<std::string, std::vector<std::string>> by_cui_;
};

// Builds edges from MRREL rows. Drop order: self-relations first, then rows
// with a non-English endpoint. Label = RELA when present, else the REL code
// (fallback, counted per surviving row before duplicate collapse). Duplicate
// (head, tail, label) triples collapse to the first-seen edge.
class EdgeCollector {
public:
    explicit EdgeCollector(const std::unordered_set<std::string>& english_cuis)
        : english_(english_cuis) {}

    void add(const rrf::RelRow& row);

    const std::vector<RelationEdge>& edges() const { return edges_; }
    const BuildStats& partial_stats() const { return stats_; }

private:
    const std::unordered_set<std::string>& english_;
    std::vector<RelationEdge> edges_; // first-seen order
    std::unordered_set<std::string> seen_keys_;
    BuildStats stats_;
};

// Deterministic merge of the four per-table reductions into an immutable
// snapshot with fully populated stats.
GraphSnapshot assemble_graph(const std::map<std::string, NameEntry>& names,
                             const std::map<std::string, DefinitionEntry>& definitions,
                             const std::map<std::string, std::vector<std::string>>& types,
                             const std::vector<RelationEdge>& edges, BuildStats edge_stats);

struct BuildInputs {
    std::string mrconso_path;
    std::string mrdef_path; // optional: empty -> no definitions
    std::string mrsty_path; // optional
    std::string mrrel_path; // optional
    rrf::TableSchema conso_schema = rrf::TableSchema::defaults(rrf::TableKind::Conso);
    rrf::TableSchema def_schema = rrf::TableSchema::defaults(rrf::TableKind::Def);
    rrf::TableSchema sty_schema = rrf::TableSchema::defaults(rrf::TableKind::Sty);
    rrf::TableSchema rel_schema = rrf::TableSchema::defaults(rrf::TableKind::Rel);
    BuildOptions options;
};

struct BuildResult {
    GraphSnapshot snapshot;
    rrf::IngestReport conso_report;
    rrf::IngestReport def_report;
    rrf::IngestReport sty_report;
    rrf::IngestReport rel_report;
};

// Full pipeline from RRF files: stream each table once, reduce, assemble.
BuildResult build_graph(const BuildInputs& inputs);

} // namespace biokg::kg
