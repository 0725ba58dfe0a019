#pragma once

#include "biokg/snapshot.hpp"

#include <string>

namespace biokg {

struct ExportManifest {
    std::string nodes_file;
    std::string relationships_file;
    uint64_t node_count = 0;
    uint64_t relationship_count = 0;
    std::string nodes_checksum;         // fnv1a64 hex of file contents
    std::string relationships_checksum;
};

inline constexpr const char* kNodesHeader =
    "cui:ID,name,synonyms,semantic_types,definitions,:LABEL";
inline constexpr const char* kRelationshipsHeader = ":START_ID,:END_ID,:TYPE,provenance";

// Edge label -> Neo4j relationship type: ASCII-uppercased, every character
// outside [A-Z0-9_] replaced by '_'.
std::string sanitize_relation_type(const std::string& label);

// RFC-4180 field quoting.
std::string csv_quote(const std::string& field);

// Writes nodes.csv and relationships.csv in the neo4j-admin import
// convention into out_dir, plus returns the manifest. List properties are
// ';'-joined, the node label is the constant Concept.
ExportManifest export_neo4j(const GraphSnapshot& snapshot, const std::string& out_dir);

std::string manifest_to_kv(const ExportManifest& manifest);

} // namespace biokg
