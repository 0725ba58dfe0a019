#pragma once

#include "biokg/embed.hpp"
#include "biokg/snapshot.hpp"
#include "biokg/textualize.hpp"

#include <optional>
#include <string>
#include <vector>

namespace biokg::rag {

struct RetrievalConfig {
    int seed_k = 5;
    int max_hops = 2;
    int max_edges = 200;
    int per_node_fanout_cap = 25;
    int context_budget = 1500; // words across retained fragments
    bool include_question_passages = false;

    void validate() const; // throws ConfigError

    bool operator==(const RetrievalConfig&) const = default;
};

struct SeedHit {
    std::string cui;
    double score;

    bool operator==(const SeedHit&) const = default;
};

struct FragmentPath {
    int hop = 0;          // hop distance of the edge from its seed
    std::string seed_cui; // seed the fragment descends from

    bool operator==(const FragmentPath&) const = default;
};

struct SubgraphContext {
    std::vector<SeedHit> seeds;
    std::vector<RelationEdge> edges;           // discovery order
    std::vector<text::TripleFragment> fragments; // aligned with edges
    std::vector<FragmentPath> paths;             // aligned with edges

    bool empty() const { return edges.empty(); }
};

struct PromptPackage {
    std::string system_text;
    std::string user_text;
    int context_word_count = 0; // words across retained fragment lines
};

struct LlmEndpointConfig {
    std::string base_url;    // e.g. http://127.0.0.1:8089/v1
    std::string model_name;
    std::string api_key_env; // environment variable holding the bearer token
    double timeout_seconds = 60.0;
    int max_retries = 2;
    double temperature = 0.0;

    bool operator==(const LlmEndpointConfig&) const = default;
};

enum class AnswerLabel { Yes, No, Maybe, Unparseable };

const char* answer_label_name(AnswerLabel label);

enum class QATask { YesNo, YesNoMaybe };

struct GroundedAnswer {
    AnswerLabel label = AnswerLabel::Unparseable;
    std::string raw_text;
    SubgraphContext context;
    PromptPackage prompt;
};

// Versioned prompt wording; the fingerprint of these strings is pinned in
// eval reports.
struct PromptTemplates {
    std::string version = "v1";
    std::string system_text =
        "You are a biomedical question answering assistant. Use the provided facts together "
        "with your prior knowledge. Answer strictly with one word: yes, no, or maybe.";
    std::string passages_header = "Passages:";
    std::string facts_header = "Facts:";
    std::string question_prefix = "Question: ";

    bool operator==(const PromptTemplates&) const = default;
};

std::string prompt_fingerprint(const PromptTemplates& templates);

// Top seed_k concepts by cosine similarity to the question embedding. An
// empty question (zero-sentinel embedding) returns no seeds.
std::vector<SeedHit> retrieve_seeds(const std::string& question, const embed::VectorIndex& index,
                                    const embed::EmbeddingModel& model,
                                    const RetrievalConfig& config);

// Breadth-first expansion from all seeds simultaneously, both edge
// directions, up to max_hops. Per expanded node at most per_node_fanout_cap
// new edges are taken in adjacency order (out entries then in entries);
// expansion stops globally at max_edges. Each edge is annotated with the hop
// and seed of its first discovery. Unknown seeds are skipped (error only
// when every seed is unknown and at least one was given).
SubgraphContext expand_subgraph(const std::vector<SeedHit>& seeds, const GraphSnapshot& snapshot,
                                const RetrievalConfig& config);

// System text from the templates; user text = optional passages section,
// facts section (one fragment per line), then the question. Fragments are
// dropped whole until their word count fits context_budget, highest hop
// first, ties from the tail. An empty context degenerates to the baseline
// question-only prompt.
PromptPackage build_prompt(const std::string& question, const SubgraphContext& context,
                           const RetrievalConfig& config,
                           const std::vector<std::string>& passages = {},
                           const PromptTemplates& templates = {});

// First standalone token among {yes, no, maybe} wins, case-insensitive;
// maybe only counts for YesNoMaybe. No match -> Unparseable.
AnswerLabel parse_answer(const std::string& raw, QATask task);

// POST <base_url>/chat/completions in the chat-completion wire format;
// retries transient failures (network errors, timeouts, 5xx) with
// exponential backoff up to max_retries.
std::string ask_llm(const PromptPackage& prompt, const LlmEndpointConfig& endpoint);

// retrieve -> expand -> prompt -> ask -> parse, with the full evidence chain
// retained. An LLM failure after retries propagates; labels are never
// fabricated.
GroundedAnswer answer_question(const std::string& question, const GraphSnapshot& snapshot,
                               const embed::VectorIndex& index, const embed::EmbeddingModel& model,
                               const RetrievalConfig& config, const LlmEndpointConfig& endpoint,
                               QATask task = QATask::YesNoMaybe,
                               const std::vector<std::string>& passages = {},
                               const PromptTemplates& templates = {});

// Baseline path: question-only prompt, no retrieval.
GroundedAnswer answer_baseline(const std::string& question, const RetrievalConfig& config,
                               const LlmEndpointConfig& endpoint, QATask task = QATask::YesNoMaybe,
                               const std::vector<std::string>& passages = {},
                               const PromptTemplates& templates = {});

// Label line plus one evidence line per fragment with hop/seed annotations;
// the output format of `ask`.
std::string format_grounded_answer(const GroundedAnswer& answer);

} // namespace biokg::rag
