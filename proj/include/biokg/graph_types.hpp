#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace biokg {

// Separator between concatenated definition segments. Visible, unlikely in
// definition prose, easy to split on.
inline constexpr const char* kDefinitionSeparator = " | ";

// One unified concept: preferred name, synonyms, semantic types, and all of
// its definitions joined into a single field.
struct ConceptRecord {
    std::string cui;
    std::string preferred_name;
    std::vector<std::string> synonyms;       // distinct, first-seen order, excludes preferred_name
    std::vector<std::string> semantic_types; // distinct type names, first-seen order
    std::string definitions;                 // segments joined by kDefinitionSeparator
    uint32_t definition_count = 0;

    bool operator==(const ConceptRecord&) const = default;
};

enum class LabelProvenance : uint8_t {
    SpecificRela = 0, // label taken from the RELA column
    FallbackRel = 1,  // RELA missing, general REL code substituted
};

const char* label_provenance_name(LabelProvenance provenance);

// Directed labeled edge, stored exactly as (CUI1 -> CUI2) from the source row.
struct RelationEdge {
    std::string head_cui;
    std::string tail_cui;
    std::string label;
    LabelProvenance label_provenance = LabelProvenance::SpecificRela;
    std::string source; // vocabulary of the first row that produced this edge

    bool operator==(const RelationEdge&) const = default;
};

struct BuildStats {
    uint64_t concepts_kept = 0;
    uint64_t definitions_merged = 0;         // definition segments attached across all concepts
    uint64_t multi_definition_concepts = 0;  // concepts with more than one segment
    uint64_t edges_kept = 0;                 // after duplicate collapse
    uint64_t edges_before_dedupe = 0;        // rows surviving the drop filters
    uint64_t duplicate_edges_collapsed = 0;
    uint64_t self_relations_dropped = 0;     // CUI1 = CUI2
    uint64_t non_english_endpoint_dropped = 0;
    uint64_t fallback_labels_used = 0;       // surviving rows with no RELA, pre-dedupe
    uint64_t distinct_labels = 0;

    bool operator==(const BuildStats&) const = default;
};

// key = value lines, fixed order; also the format of the stats file the CLI
// writes next to a snapshot.
std::string build_stats_to_kv(const BuildStats& stats);
std::string build_stats_to_table(const BuildStats& stats);

} // namespace biokg
