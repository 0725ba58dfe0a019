#include "biokg/neo4j_export.hpp"

#include "biokg/errors.hpp"
#include "biokg/util.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace biokg {

std::string sanitize_relation_type(const std::string& label) {
    std::string out;
    out.reserve(label.size());
    for (char c : label) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
        out.push_back(ok ? c : '_');
    }
    if (out.empty())
        throw Error(ErrorKind::UnsanitizableLabel, "edge label empty after sanitization");
    return out;
}

std::string csv_quote(const std::string& field) {
    bool needs_quotes = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

ExportManifest export_neo4j(const GraphSnapshot& snapshot, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string nodes_path = (std::filesystem::path(out_dir) / "nodes.csv").string();
    const std::string rels_path = (std::filesystem::path(out_dir) / "relationships.csv").string();

    std::string nodes;
    nodes += kNodesHeader;
    nodes += '\n';
    for (const auto& record : snapshot.concepts()) {
        nodes += csv_quote(record.cui);
        nodes += ',';
        nodes += csv_quote(record.preferred_name);
        nodes += ',';
        nodes += csv_quote(join(record.synonyms, ";"));
        nodes += ',';
        nodes += csv_quote(join(record.semantic_types, ";"));
        nodes += ',';
        nodes += csv_quote(record.definitions);
        nodes += ",Concept\n";
    }

    std::string rels;
    rels += kRelationshipsHeader;
    rels += '\n';
    for (const auto& edge : snapshot.edges()) {
        rels += csv_quote(edge.head_cui);
        rels += ',';
        rels += csv_quote(edge.tail_cui);
        rels += ',';
        rels += csv_quote(sanitize_relation_type(edge.label));
        rels += ',';
        rels += label_provenance_name(edge.label_provenance);
        rels += '\n';
    }

    write_text_file(nodes_path, nodes);
    write_text_file(rels_path, rels);

    ExportManifest manifest;
    manifest.nodes_file = nodes_path;
    manifest.relationships_file = rels_path;
    manifest.node_count = snapshot.num_concepts();
    manifest.relationship_count = snapshot.num_edges();
    manifest.nodes_checksum = hex64(fnv1a64(nodes));
    manifest.relationships_checksum = hex64(fnv1a64(rels));
    return manifest;
}

std::string manifest_to_kv(const ExportManifest& m) {
    std::ostringstream out;
    out << "nodes_file=" << m.nodes_file << '\n'
        << "relationships_file=" << m.relationships_file << '\n'
        << "node_count=" << m.node_count << '\n'
        << "relationship_count=" << m.relationship_count << '\n'
        << "nodes_checksum=" << m.nodes_checksum << '\n'
        << "relationships_checksum=" << m.relationships_checksum << '\n';
    return out.str();
}

} // namespace biokg
