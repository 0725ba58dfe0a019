#pragma once

#include "biokg/graph_types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace biokg {

enum class Direction { Out, In, Both };

struct AdjacencyEntry {
    std::string label;
    std::string other_cui; // tail for out-entries, head for in-entries
    uint32_t edge_index = 0;

    bool operator==(const AdjacencyEntry&) const = default;
};

// Receipt returned by save_snapshot.
struct SnapshotReceipt {
    std::string path;
    uint64_t node_count = 0;
    uint64_t edge_count = 0;
    uint64_t bytes_written = 0;
    std::string checksum; // fnv1a64 of the whole file, hex
};

// Immutable indexed graph: concept table sorted by CUI, edges sorted by
// (head, label, tail), adjacency lists sorted by (label, other_cui).
// Safe for unrestricted concurrent readers once built.
class GraphSnapshot {
public:
    GraphSnapshot() = default;

    // Takes concepts sorted by cui and edges referencing them; builds the
    // adjacency lists and label catalog. Throws DanglingEdge if an edge
    // endpoint is not in the concept table.
    GraphSnapshot(std::vector<ConceptRecord> concepts, std::vector<RelationEdge> edges,
                  BuildStats stats);

    const std::vector<ConceptRecord>& concepts() const { return concepts_; }
    const std::vector<RelationEdge>& edges() const { return edges_; }
    const std::vector<std::string>& label_catalog() const { return label_catalog_; }
    const BuildStats& stats() const { return stats_; }

    std::size_t num_concepts() const { return concepts_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    bool contains(const std::string& cui) const;
    std::optional<uint32_t> index_of(const std::string& cui) const;
    const ConceptRecord& concept_record(const std::string& cui) const; // throws UnknownCui
    const ConceptRecord& concept_at(uint32_t index) const;

    const std::vector<AdjacencyEntry>& out_entries(uint32_t index) const;
    const std::vector<AdjacencyEntry>& in_entries(uint32_t index) const;

    // Deterministic adjacency query: entries sorted by (label, other_cui);
    // Both concatenates out then in.
    std::vector<AdjacencyEntry> neighbors(const std::string& cui, Direction direction) const;

private:
    std::vector<ConceptRecord> concepts_;
    std::vector<RelationEdge> edges_;
    std::vector<std::string> label_catalog_; // sorted distinct labels
    BuildStats stats_;
    std::unordered_map<std::string, uint32_t> cui_index_;
    std::vector<std::vector<AdjacencyEntry>> out_adjacency_;
    std::vector<std::vector<AdjacencyEntry>> in_adjacency_;

    void build_indexes();
};

// Versioned length-prefixed binary format, magic "KGF1", fnv1a64 checksum per
// section. load(save(s)) is byte-identical on re-save.
SnapshotReceipt save_snapshot(const GraphSnapshot& snapshot, const std::string& path);
GraphSnapshot load_snapshot(const std::string& path);

} // namespace biokg
