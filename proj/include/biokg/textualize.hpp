#pragma once

#include "biokg/snapshot.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace biokg::text {

struct TripleFragment {
    std::string text; // full sentence ending with '.'
    std::string head_cui;
    std::string tail_cui;
    std::string label;

    bool operator==(const TripleFragment&) const = default;
};

struct ConceptBlock {
    std::string cui;
    std::vector<std::string> lines;
    std::size_t fragment_lines = 0; // trailing relation-fragment lines

    bool operator==(const ConceptBlock&) const = default;
};

struct CorpusStats {
    uint64_t blocks_written = 0;
    uint64_t fragments_written = 0;
    uint64_t word_count = 0; // whitespace-delimited tokens
    uint64_t bytes_written = 0;

    bool operator==(const CorpusStats&) const = default;
};

// "CAUSE_OF" -> "cause of": lowercased, underscores to spaces, whitespace
// runs collapsed.
std::string verbalize_label(const std::string& label);

// Default rendering puts the tail concept first:
//   "<tail name> <verbalized label> <head name>."
// head_first flips the two surface forms.
TripleFragment render_triple(const RelationEdge& edge, const GraphSnapshot& snapshot,
                             bool head_first = false);

// Self-contained block: name/synonyms sentence, semantic-types sentence,
// definitions line, then deduplicated relation fragments for all out- and
// in-edges in adjacency order.
ConceptBlock render_concept_block(const std::string& cui, const GraphSnapshot& snapshot,
                                  bool head_first = false);

std::string block_text(const ConceptBlock& block);

struct CorpusOptions {
    uint64_t shard_size_words = 10'000'000;
    bool head_first = false;
};

// Emits blocks for every concept in ascending CUI order into
// corpus-<n>.txt shards of at most shard_size_words words (a single
// oversized block still occupies one shard). Blocks are separated by one
// blank line. An empty snapshot produces no files.
CorpusStats write_corpus(const GraphSnapshot& snapshot, const std::string& out_dir,
                         const CorpusOptions& options = {});

std::string corpus_stats_to_kv(const CorpusStats& stats);

} // namespace biokg::text
