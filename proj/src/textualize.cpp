#include "biokg/textualize.hpp"

#include "biokg/errors.hpp"
#include "biokg/util.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace biokg::text {

std::string verbalize_label(const std::string& label) {
    std::string spaced;
    spaced.reserve(label.size());
    for (char c : label) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c == '_') c = ' ';
        spaced.push_back(c);
    }
    // collapse whitespace runs, trim ends
    std::string out;
    out.reserve(spaced.size());
    bool pending_space = false;
    for (char c : spaced) {
        if (c == ' ' || c == '\t') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

TripleFragment render_triple(const RelationEdge& edge, const GraphSnapshot& snapshot,
                             bool head_first) {
    const std::string& head_name = snapshot.concept_record(edge.head_cui).preferred_name;
    const std::string& tail_name = snapshot.concept_record(edge.tail_cui).preferred_name;
    const std::string verb = verbalize_label(edge.label);
    const std::string& first = head_first ? head_name : tail_name;
    const std::string& second = head_first ? tail_name : head_name;

    TripleFragment fragment;
    fragment.text = first + " " + verb + " " + second + ".";
    fragment.head_cui = edge.head_cui;
    fragment.tail_cui = edge.tail_cui;
    fragment.label = edge.label;
    return fragment;
}

ConceptBlock render_concept_block(const std::string& cui, const GraphSnapshot& snapshot,
                                  bool head_first) {
    auto index = snapshot.index_of(cui);
    if (!index) throw Error(ErrorKind::UnknownCui, "unknown cui: " + cui);
    const ConceptRecord& record = snapshot.concept_at(*index);

    ConceptBlock block;
    block.cui = cui;

    std::string name_line = record.preferred_name;
    if (!record.synonyms.empty())
        name_line += ", also known as " + join(record.synonyms, ", ");
    name_line += ".";
    block.lines.push_back(std::move(name_line));

    if (!record.semantic_types.empty())
        block.lines.push_back(record.preferred_name + " is a " +
                              join(record.semantic_types, "; ") + ".");

    if (!record.definitions.empty()) block.lines.push_back(record.definitions);

    std::unordered_set<std::string> seen;
    for (const auto* entries : {&snapshot.out_entries(*index), &snapshot.in_entries(*index)}) {
        for (const AdjacencyEntry& entry : *entries) {
            TripleFragment fragment =
                render_triple(snapshot.edges()[entry.edge_index], snapshot, head_first);
            if (seen.insert(fragment.text).second) {
                block.lines.push_back(std::move(fragment.text));
                ++block.fragment_lines;
            }
        }
    }
    return block;
}

std::string block_text(const ConceptBlock& block) { return join(block.lines, "\n"); }

namespace {

class ShardWriter {
public:
    ShardWriter(std::string out_dir, uint64_t shard_size_words)
        : out_dir_(std::move(out_dir)), shard_size_words_(shard_size_words) {}

    void add_block(const std::string& text, uint64_t words) {
        if (open_ && shard_words_ > 0 && shard_words_ + words > shard_size_words_) close();
        if (!open_) open_next();
        if (shard_words_ > 0) write("\n");
        write(text);
        write("\n");
        shard_words_ += words;
    }

    void finish() {
        if (open_) close();
    }

    uint64_t bytes_written() const { return bytes_written_; }

private:
    void open_next() {
        const auto path = std::filesystem::path(out_dir_) /
                          ("corpus-" + std::to_string(shard_index_) + ".txt");
        file_.open(path, std::ios::binary | std::ios::trunc);
        if (!file_) throw Error(ErrorKind::Io, "cannot open for writing: " + path.string());
        open_ = true;
        shard_words_ = 0;
    }

    void close() {
        file_.close();
        if (file_.fail()) throw Error(ErrorKind::Io, "write failed on corpus shard");
        file_.clear();
        open_ = false;
        ++shard_index_;
    }

    void write(std::string_view data) {
        file_.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!file_) throw Error(ErrorKind::Io, "write failed on corpus shard");
        bytes_written_ += data.size();
    }

    std::string out_dir_;
    uint64_t shard_size_words_;
    std::ofstream file_;
    bool open_ = false;
    int shard_index_ = 0;
    uint64_t shard_words_ = 0;
    uint64_t bytes_written_ = 0;
};

} // namespace

CorpusStats write_corpus(const GraphSnapshot& snapshot, const std::string& out_dir,
                         const CorpusOptions& options) {
    std::filesystem::create_directories(out_dir);
    CorpusStats stats;
    ShardWriter writer(out_dir, options.shard_size_words);
    for (const auto& record : snapshot.concepts()) {
        ConceptBlock block = render_concept_block(record.cui, snapshot, options.head_first);
        const std::string text = block_text(block);
        const uint64_t words = count_words(text);
        writer.add_block(text, words);
        ++stats.blocks_written;
        stats.fragments_written += block.fragment_lines;
        stats.word_count += words;
    }
    writer.finish();
    stats.bytes_written = writer.bytes_written();
    return stats;
}

std::string corpus_stats_to_kv(const CorpusStats& s) {
    std::ostringstream out;
    out << "blocks_written=" << s.blocks_written << '\n'
        << "fragments_written=" << s.fragments_written << '\n'
        << "word_count=" << s.word_count << '\n'
        << "bytes_written=" << s.bytes_written << '\n';
    return out.str();
}

} // namespace biokg::text
