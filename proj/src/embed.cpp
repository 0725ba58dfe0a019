#include "biokg/embed.hpp"

#include "biokg/errors.hpp"
#include "biokg/textualize.hpp"
#include "biokg/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace biokg::embed {

bool is_zero_vector(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](float x) { return x == 0.0f; });
}

double cosine_similarity(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::DimensionMismatch,
                    "vector dimensions differ: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
        na += static_cast<double>(a[i]) * static_cast<double>(a[i]);
        nb += static_cast<double>(b[i]) * static_cast<double>(b[i]);
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingModel EmbeddingModel::hashed(int dimension, uint64_t seed) {
    if (dimension <= 0) throw Error(ErrorKind::ConfigError, "embedding dimension must be > 0");
    EmbeddingModel model;
    model.dimension_ = dimension;
    model.seed_ = seed;
    return model;
}

EmbeddingModel EmbeddingModel::from_table(int dimension, std::map<std::string, Vector> vocabulary) {
    if (dimension <= 0) throw Error(ErrorKind::ConfigError, "embedding dimension must be > 0");
    for (const auto& [token, vec] : vocabulary) {
        if (static_cast<int>(vec.size()) != dimension)
            throw Error(ErrorKind::DimensionMismatch,
                        "token '" + token + "' vector has wrong dimension");
    }
    EmbeddingModel model;
    model.dimension_ = dimension;
    model.vocabulary_ = std::move(vocabulary);
    return model;
}

Vector EmbeddingModel::hashed_token_vector(std::string_view token) const {
    Vector v(static_cast<std::size_t>(dimension_));
    uint64_t state = fnv1a64(token) ^ (0x9e3779b97f4a7c15ULL * (seed_ + 1));
    for (auto& component : v) {
        const uint64_t bits = splitmix64(state);
        // 53 uniform bits -> [-1, 1)
        const double unit = static_cast<double>(bits >> 11) * (1.0 / 9007199254740992.0);
        component = static_cast<float>(unit * 2.0 - 1.0);
    }
    return v;
}

Vector EmbeddingModel::embed(std::string_view text) const {
    const auto tokens = tokenize(text);
    std::vector<double> sum(static_cast<std::size_t>(dimension_), 0.0);
    std::size_t contributing = 0;
    for (const auto& token : tokens) {
        if (vocabulary_) {
            auto it = vocabulary_->find(token);
            if (it == vocabulary_->end()) continue; // out-of-vocabulary tokens are skipped
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += it->second[i];
        } else {
            const Vector tv = hashed_token_vector(token);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += tv[i];
        }
        ++contributing;
    }
    Vector out(static_cast<std::size_t>(dimension_), 0.0f);
    if (contributing == 0) return out; // zero-vector sentinel
    double norm_sq = 0.0;
    for (double& x : sum) {
        x /= static_cast<double>(contributing);
        norm_sq += x * x;
    }
    if (norm_sq == 0.0) return out;
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (std::size_t i = 0; i < sum.size(); ++i)
        out[i] = static_cast<float>(sum[i] * inv_norm);
    return out;
}

namespace {

constexpr char kModelMagic[4] = {'E', 'M', 'B', '1'};
constexpr char kIndexMagic[4] = {'V', 'I', 'X', '1'};
constexpr uint32_t kFormatVersion = 1;

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<uint32_t>(s.size()));
    out += s;
}

void put_vector(std::string& out, const Vector& v) {
    for (float x : v) {
        uint32_t bits;
        std::memcpy(&bits, &x, 4);
        put_u32(out, bits);
    }
}

class Cursor {
public:
    Cursor(std::string_view data, const char* what) : data_(data), what_(what) {}

    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(byte()) << (8 * i);
        return v;
    }
    uint64_t u64() {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(byte()) << (8 * i);
        return v;
    }
    std::string str() {
        const uint32_t len = u32();
        if (pos_ + len > data_.size()) fail();
        std::string out(data_.substr(pos_, len));
        pos_ += len;
        return out;
    }
    Vector vec(int dimension) {
        Vector v(static_cast<std::size_t>(dimension));
        for (auto& x : v) {
            const uint32_t bits = u32();
            std::memcpy(&x, &bits, 4);
        }
        return v;
    }
    std::size_t pos() const { return pos_; }
    std::string_view consumed() const { return data_.substr(0, pos_); }

private:
    uint8_t byte() {
        if (pos_ >= data_.size()) fail();
        return static_cast<uint8_t>(data_[pos_++]);
    }
    [[noreturn]] void fail() const {
        throw Error(ErrorKind::CorruptSnapshot, std::string("truncated ") + what_ + " file");
    }
    std::string_view data_;
    const char* what_;
    std::size_t pos_ = 0;
};

std::string load_checked(const std::string& path, const char (&magic)[4], const char* what) {
    std::string data = read_text_file(path);
    if (data.size() < 4 || std::memcmp(data.data(), magic, 4) != 0)
        throw Error(ErrorKind::CorruptSnapshot,
                    std::string("bad magic: not a ") + what + " file: " + path);
    return data;
}

void write_with_checksum(const std::string& path, std::string body) {
    put_u64(body, fnv1a64(std::string_view(body)));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

// body excludes the trailing checksum; validates it
std::string_view strip_checksum(const std::string& data, const char* what) {
    if (data.size() < 8)
        throw Error(ErrorKind::CorruptSnapshot, std::string("truncated ") + what + " file");
    std::string_view body(data.data(), data.size() - 8);
    Cursor tail(std::string_view(data).substr(data.size() - 8), what);
    if (tail.u64() != fnv1a64(body))
        throw Error(ErrorKind::CorruptSnapshot, std::string(what) + " checksum mismatch");
    return body;
}

} // namespace

EmbeddingModel EmbeddingModel::load_file(const std::string& path) {
    const std::string data = load_checked(path, kModelMagic, "embedding model");
    std::string_view body = strip_checksum(data, "embedding model");
    Cursor cur(body.substr(4), "embedding model");
    const uint32_t version = cur.u32();
    if (version != kFormatVersion)
        throw Error(ErrorKind::VersionMismatch, "embedding model version " + std::to_string(version));
    const int dimension = static_cast<int>(cur.u32());
    const uint64_t count = cur.u64();
    std::map<std::string, Vector> vocab;
    for (uint64_t i = 0; i < count; ++i) {
        std::string token = cur.str();
        vocab.emplace(std::move(token), cur.vec(dimension));
    }
    return from_table(dimension, std::move(vocab));
}

void EmbeddingModel::save_file(const std::string& path) const {
    if (!vocabulary_)
        throw Error(ErrorKind::ConfigError,
                    "hashed-fallback models are defined by seed and dimension; nothing to save");
    std::string body;
    body.append(kModelMagic, 4);
    put_u32(body, kFormatVersion);
    put_u32(body, static_cast<uint32_t>(dimension_));
    put_u64(body, vocabulary_->size());
    for (const auto& [token, vec] : *vocabulary_) {
        put_str(body, token);
        put_vector(body, vec);
    }
    write_with_checksum(path, std::move(body));
}

const char* index_source_name(IndexSource source) {
    return source == IndexSource::ConceptBlocks ? "concept_blocks" : "names_only";
}

IndexSource index_source_from_name(const std::string& name) {
    if (name == "concept_blocks") return IndexSource::ConceptBlocks;
    if (name == "names_only") return IndexSource::NamesOnly;
    throw Error(ErrorKind::ConfigError, "unknown index source: " + name);
}

VectorIndex VectorIndex::build(const GraphSnapshot& snapshot, const EmbeddingModel& model,
                               IndexSource source) {
    VectorIndex index;
    index.dimension_ = model.dimension();
    index.entries_.reserve(snapshot.num_concepts());
    for (const auto& record : snapshot.concepts()) {
        std::string source_text;
        if (source == IndexSource::ConceptBlocks) {
            source_text = text::block_text(text::render_concept_block(record.cui, snapshot));
        } else {
            source_text = record.preferred_name;
            for (const auto& synonym : record.synonyms) {
                source_text += ' ';
                source_text += synonym;
            }
        }
        index.entries_.push_back({record.cui, model.embed(source_text)});
    }
    return index;
}

void VectorIndex::add_entry(std::string cui, Vector vector) {
    if (entries_.empty() && dimension_ == 0) dimension_ = static_cast<int>(vector.size());
    if (static_cast<int>(vector.size()) != dimension_)
        throw Error(ErrorKind::DimensionMismatch, "index entry dimension mismatch");
    entries_.push_back({std::move(cui), std::move(vector)});
}

std::vector<ScoredCui> VectorIndex::top_k(const Vector& query, std::size_t k) const {
    if (k == 0) return {};
    if (static_cast<int>(query.size()) != dimension_)
        throw Error(ErrorKind::DimensionMismatch,
                    "query dimension " + std::to_string(query.size()) + ", index dimension " +
                        std::to_string(dimension_));
    if (is_zero_vector(query)) return {};
    std::vector<ScoredCui> scored;
    scored.reserve(entries_.size());
    for (const auto& entry : entries_)
        scored.push_back({entry.cui, cosine_similarity(query, entry.vector)});
    std::sort(scored.begin(), scored.end(), [](const ScoredCui& a, const ScoredCui& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.cui < b.cui;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

void VectorIndex::save_file(const std::string& path) const {
    std::string body;
    body.append(kIndexMagic, 4);
    put_u32(body, kFormatVersion);
    put_u32(body, static_cast<uint32_t>(dimension_));
    put_u64(body, entries_.size());
    for (const auto& entry : entries_) {
        put_str(body, entry.cui);
        put_vector(body, entry.vector);
    }
    write_with_checksum(path, std::move(body));
}

VectorIndex VectorIndex::load_file(const std::string& path) {
    const std::string data = load_checked(path, kIndexMagic, "vector index");
    std::string_view body = strip_checksum(data, "vector index");
    Cursor cur(body.substr(4), "vector index");
    const uint32_t version = cur.u32();
    if (version != kFormatVersion)
        throw Error(ErrorKind::VersionMismatch, "vector index version " + std::to_string(version));
    VectorIndex index;
    index.dimension_ = static_cast<int>(cur.u32());
    const uint64_t count = cur.u64();
    index.entries_.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        std::string cui = cur.str();
        index.entries_.push_back({std::move(cui), cur.vec(index.dimension_)});
    }
    return index;
}

} // namespace biokg::embed
