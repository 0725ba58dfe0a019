#include "biokg/snapshot.hpp"

#include "biokg/errors.hpp"
#include "biokg/util.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace biokg {

namespace {

constexpr char kMagic[4] = {'K', 'G', 'F', '1'};
constexpr uint32_t kVersion = 1;
constexpr uint32_t kTagConcepts = 0x434f4e43; // "CONC"
constexpr uint32_t kTagEdges = 0x45444745;    // "EDGE"
constexpr uint32_t kTagStats = 0x53544154;    // "STAT"

// little-endian, length-prefixed
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        buf_.append(s);
    }
    std::string take() { return std::move(buf_); }

private:
    std::string buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    uint8_t u8() { return static_cast<uint8_t>(byte()); }
    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(byte())) << (8 * i);
        return v;
    }
    uint64_t u64() {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<uint8_t>(byte())) << (8 * i);
        return v;
    }
    std::string str() {
        uint32_t len = u32();
        if (pos_ + len > data_.size())
            throw Error(ErrorKind::CorruptSnapshot, "truncated string record");
        std::string out(data_.substr(pos_, len));
        pos_ += len;
        return out;
    }
    std::string_view bytes(std::size_t n) {
        if (pos_ + n > data_.size()) throw Error(ErrorKind::CorruptSnapshot, "truncated section");
        std::string_view out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }
    bool exhausted() const { return pos_ == data_.size(); }

private:
    char byte() {
        if (pos_ >= data_.size()) throw Error(ErrorKind::CorruptSnapshot, "unexpected end of file");
        return data_[pos_++];
    }
    std::string_view data_;
    std::size_t pos_ = 0;
};

std::string encode_concepts(const std::vector<ConceptRecord>& concepts) {
    ByteWriter w;
    w.u64(concepts.size());
    for (const auto& c : concepts) {
        w.str(c.cui);
        w.str(c.preferred_name);
        w.u32(static_cast<uint32_t>(c.synonyms.size()));
        for (const auto& s : c.synonyms) w.str(s);
        w.u32(static_cast<uint32_t>(c.semantic_types.size()));
        for (const auto& t : c.semantic_types) w.str(t);
        w.str(c.definitions);
        w.u32(c.definition_count);
    }
    return w.take();
}

std::string encode_edges(const std::vector<RelationEdge>& edges) {
    ByteWriter w;
    w.u64(edges.size());
    for (const auto& e : edges) {
        w.str(e.head_cui);
        w.str(e.tail_cui);
        w.str(e.label);
        w.u8(static_cast<uint8_t>(e.label_provenance));
        w.str(e.source);
    }
    return w.take();
}

std::string encode_stats(const BuildStats& s) {
    ByteWriter w;
    w.u64(s.concepts_kept);
    w.u64(s.definitions_merged);
    w.u64(s.multi_definition_concepts);
    w.u64(s.edges_kept);
    w.u64(s.edges_before_dedupe);
    w.u64(s.duplicate_edges_collapsed);
    w.u64(s.self_relations_dropped);
    w.u64(s.non_english_endpoint_dropped);
    w.u64(s.fallback_labels_used);
    w.u64(s.distinct_labels);
    return w.take();
}

void append_section(std::string& out, uint32_t tag, const std::string& payload) {
    ByteWriter w;
    w.u32(tag);
    w.u64(payload.size());
    out += w.take();
    out += payload;
    ByteWriter sum;
    sum.u64(fnv1a64(payload));
    out += sum.take();
}

} // namespace

GraphSnapshot::GraphSnapshot(std::vector<ConceptRecord> concepts, std::vector<RelationEdge> edges,
                             BuildStats stats)
    : concepts_(std::move(concepts)), edges_(std::move(edges)), stats_(stats) {
    build_indexes();
}

void GraphSnapshot::build_indexes() {
    cui_index_.clear();
    cui_index_.reserve(concepts_.size());
    for (uint32_t i = 0; i < concepts_.size(); ++i) {
        if (i > 0 && !(concepts_[i - 1].cui < concepts_[i].cui))
            throw Error(ErrorKind::CorruptSnapshot, "concept table not sorted by cui");
        cui_index_.emplace(concepts_[i].cui, i);
    }

    out_adjacency_.assign(concepts_.size(), {});
    in_adjacency_.assign(concepts_.size(), {});
    std::vector<std::string> labels;
    for (uint32_t e = 0; e < edges_.size(); ++e) {
        const RelationEdge& edge = edges_[e];
        auto head = cui_index_.find(edge.head_cui);
        auto tail = cui_index_.find(edge.tail_cui);
        if (head == cui_index_.end() || tail == cui_index_.end())
            throw Error(ErrorKind::DanglingEdge,
                        "edge endpoint not in concept table: " + edge.head_cui + " -> " +
                            edge.tail_cui);
        out_adjacency_[head->second].push_back({edge.label, edge.tail_cui, e});
        in_adjacency_[tail->second].push_back({edge.label, edge.head_cui, e});
        labels.push_back(edge.label);
    }
    auto order = [](const AdjacencyEntry& a, const AdjacencyEntry& b) {
        if (a.label != b.label) return a.label < b.label;
        return a.other_cui < b.other_cui;
    };
    for (auto& entries : out_adjacency_) std::sort(entries.begin(), entries.end(), order);
    for (auto& entries : in_adjacency_) std::sort(entries.begin(), entries.end(), order);

    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    label_catalog_ = std::move(labels);
}

bool GraphSnapshot::contains(const std::string& cui) const { return cui_index_.count(cui) > 0; }

std::optional<uint32_t> GraphSnapshot::index_of(const std::string& cui) const {
    auto it = cui_index_.find(cui);
    if (it == cui_index_.end()) return std::nullopt;
    return it->second;
}

const ConceptRecord& GraphSnapshot::concept_record(const std::string& cui) const {
    auto it = cui_index_.find(cui);
    if (it == cui_index_.end()) throw Error(ErrorKind::UnknownCui, "unknown cui: " + cui);
    return concepts_[it->second];
}

const ConceptRecord& GraphSnapshot::concept_at(uint32_t index) const { return concepts_.at(index); }

const std::vector<AdjacencyEntry>& GraphSnapshot::out_entries(uint32_t index) const {
    return out_adjacency_.at(index);
}

const std::vector<AdjacencyEntry>& GraphSnapshot::in_entries(uint32_t index) const {
    return in_adjacency_.at(index);
}

std::vector<AdjacencyEntry> GraphSnapshot::neighbors(const std::string& cui,
                                                     Direction direction) const {
    auto index = index_of(cui);
    if (!index) throw Error(ErrorKind::UnknownCui, "unknown cui: " + cui);
    std::vector<AdjacencyEntry> out;
    if (direction == Direction::Out || direction == Direction::Both)
        out.insert(out.end(), out_adjacency_[*index].begin(), out_adjacency_[*index].end());
    if (direction == Direction::In || direction == Direction::Both)
        out.insert(out.end(), in_adjacency_[*index].begin(), in_adjacency_[*index].end());
    return out;
}

SnapshotReceipt save_snapshot(const GraphSnapshot& snapshot, const std::string& path) {
    std::string out;
    out.append(kMagic, 4);
    ByteWriter header;
    header.u32(kVersion);
    header.u32(3); // section count
    out += header.take();
    append_section(out, kTagConcepts, encode_concepts(snapshot.concepts()));
    append_section(out, kTagEdges, encode_edges(snapshot.edges()));
    append_section(out, kTagStats, encode_stats(snapshot.stats()));

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw Error(ErrorKind::Io, "write failed: " + path);

    SnapshotReceipt receipt;
    receipt.path = path;
    receipt.node_count = snapshot.num_concepts();
    receipt.edge_count = snapshot.num_edges();
    receipt.bytes_written = out.size();
    receipt.checksum = hex64(fnv1a64(out));
    return receipt;
}

GraphSnapshot load_snapshot(const std::string& path) {
    std::string data = read_text_file(path);
    if (data.size() < 12 || std::memcmp(data.data(), kMagic, 4) != 0)
        throw Error(ErrorKind::CorruptSnapshot, "bad magic: not a snapshot file: " + path);
    ByteReader reader(std::string_view(data).substr(4));
    uint32_t version = reader.u32();
    if (version != kVersion)
        throw Error(ErrorKind::VersionMismatch,
                    "snapshot version " + std::to_string(version) + ", expected " +
                        std::to_string(kVersion));
    uint32_t section_count = reader.u32();

    std::vector<ConceptRecord> concepts;
    std::vector<RelationEdge> edges;
    BuildStats stats;
    for (uint32_t s = 0; s < section_count; ++s) {
        uint32_t tag = reader.u32();
        uint64_t length = reader.u64();
        std::string_view payload = reader.bytes(length);
        uint64_t checksum = reader.u64();
        if (checksum != fnv1a64(payload))
            throw Error(ErrorKind::CorruptSnapshot, "section checksum mismatch");
        ByteReader body(payload);
        if (tag == kTagConcepts) {
            uint64_t count = body.u64();
            concepts.reserve(count);
            for (uint64_t i = 0; i < count; ++i) {
                ConceptRecord c;
                c.cui = body.str();
                c.preferred_name = body.str();
                uint32_t n_syn = body.u32();
                c.synonyms.reserve(n_syn);
                for (uint32_t k = 0; k < n_syn; ++k) c.synonyms.push_back(body.str());
                uint32_t n_types = body.u32();
                c.semantic_types.reserve(n_types);
                for (uint32_t k = 0; k < n_types; ++k) c.semantic_types.push_back(body.str());
                c.definitions = body.str();
                c.definition_count = body.u32();
                concepts.push_back(std::move(c));
            }
        } else if (tag == kTagEdges) {
            uint64_t count = body.u64();
            edges.reserve(count);
            for (uint64_t i = 0; i < count; ++i) {
                RelationEdge e;
                e.head_cui = body.str();
                e.tail_cui = body.str();
                e.label = body.str();
                e.label_provenance = static_cast<LabelProvenance>(body.u8());
                e.source = body.str();
                edges.push_back(std::move(e));
            }
        } else if (tag == kTagStats) {
            stats.concepts_kept = body.u64();
            stats.definitions_merged = body.u64();
            stats.multi_definition_concepts = body.u64();
            stats.edges_kept = body.u64();
            stats.edges_before_dedupe = body.u64();
            stats.duplicate_edges_collapsed = body.u64();
            stats.self_relations_dropped = body.u64();
            stats.non_english_endpoint_dropped = body.u64();
            stats.fallback_labels_used = body.u64();
            stats.distinct_labels = body.u64();
        } else {
            throw Error(ErrorKind::CorruptSnapshot, "unknown section tag");
        }
        if (!body.exhausted())
            throw Error(ErrorKind::CorruptSnapshot, "trailing bytes in section");
    }
    return GraphSnapshot(std::move(concepts), std::move(edges), stats);
}

} // namespace biokg
