#pragma once

#include "biokg/snapshot.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace biokg::embed {

using Vector = std::vector<float>;

bool is_zero_vector(const Vector& v);

// cosine in double precision; zero-norm inputs score 0.
double cosine_similarity(const Vector& a, const Vector& b);

// Static per-token vector table with mean pooling, or a seeded hashed
// fallback that derives a deterministic vector from each token. Embeddings
// are L2-normalized; empty text yields the all-zero sentinel.
class EmbeddingModel {
public:
    static EmbeddingModel hashed(int dimension, uint64_t seed);
    static EmbeddingModel from_table(int dimension, std::map<std::string, Vector> vocabulary);

    // "EMB1" model file
    static EmbeddingModel load_file(const std::string& path);
    void save_file(const std::string& path) const; // table models only

    int dimension() const { return dimension_; }
    bool is_hashed() const { return !vocabulary_.has_value(); }
    uint64_t seed() const { return seed_; }
    std::size_t vocabulary_size() const { return vocabulary_ ? vocabulary_->size() : 0; }

    Vector embed(std::string_view text) const;

    // deterministic per-token vector of the hashed fallback
    Vector hashed_token_vector(std::string_view token) const;

private:
    EmbeddingModel() = default;
    int dimension_ = 0;
    uint64_t seed_ = 0;
    std::optional<std::map<std::string, Vector>> vocabulary_;
};

enum class IndexSource { ConceptBlocks, NamesOnly };

const char* index_source_name(IndexSource source);
IndexSource index_source_from_name(const std::string& name);

struct IndexEntry {
    std::string cui;
    Vector vector;
};

struct ScoredCui {
    std::string cui;
    double score;

    bool operator==(const ScoredCui&) const = default;
};

// Exact top-k cosine index over one embedding per concept. Entries are in
// ascending CUI order (snapshot order); build is deterministic.
class VectorIndex {
public:
    VectorIndex() = default;

    static VectorIndex build(const GraphSnapshot& snapshot, const EmbeddingModel& model,
                             IndexSource source = IndexSource::ConceptBlocks);

    // "VIX1" index file
    static VectorIndex load_file(const std::string& path);
    void save_file(const std::string& path) const;

    // min(k, size) results by descending cosine, ties broken by ascending
    // cui; a zero-sentinel query returns no results.
    std::vector<ScoredCui> top_k(const Vector& query, std::size_t k) const;

    std::size_t size() const { return entries_.size(); }
    int dimension() const { return dimension_; }
    const std::vector<IndexEntry>& entries() const { return entries_; }

    void add_entry(std::string cui, Vector vector); // build helper, keeps order as added

private:
    int dimension_ = 0;
    std::vector<IndexEntry> entries_;
};

} // namespace biokg::embed
