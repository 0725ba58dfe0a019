#include "biokg/graphrag.hpp"

#include "biokg/errors.hpp"
#include "biokg/util.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <iostream>
#include <unordered_map>
#include <unordered_set>

namespace biokg::rag {

void RetrievalConfig::validate() const {
    if (seed_k < 0) throw Error(ErrorKind::ConfigError, "seed_k must be >= 0");
    if (max_hops < 1) throw Error(ErrorKind::ConfigError, "max_hops must be >= 1");
    if (max_edges < 1) throw Error(ErrorKind::ConfigError, "max_edges must be >= 1");
    if (per_node_fanout_cap < 1)
        throw Error(ErrorKind::ConfigError, "per_node_fanout_cap must be >= 1");
    if (context_budget < 1) throw Error(ErrorKind::ConfigError, "context_budget must be >= 1");
}

const char* answer_label_name(AnswerLabel label) {
    switch (label) {
        case AnswerLabel::Yes: return "yes";
        case AnswerLabel::No: return "no";
        case AnswerLabel::Maybe: return "maybe";
        case AnswerLabel::Unparseable: return "unparseable";
    }
    return "?";
}

std::string prompt_fingerprint(const PromptTemplates& t) {
    uint64_t h = fnv1a64(t.version);
    h = fnv1a64(t.system_text, h);
    h = fnv1a64(t.passages_header, h);
    h = fnv1a64(t.facts_header, h);
    h = fnv1a64(t.question_prefix, h);
    return hex64(h);
}

std::vector<SeedHit> retrieve_seeds(const std::string& question, const embed::VectorIndex& index,
                                    const embed::EmbeddingModel& model,
                                    const RetrievalConfig& config) {
    if (config.seed_k <= 0) return {};
    const auto query = model.embed(question);
    std::vector<SeedHit> seeds;
    for (const auto& hit : index.top_k(query, static_cast<std::size_t>(config.seed_k)))
        seeds.push_back({hit.cui, hit.score});
    return seeds;
}

SubgraphContext expand_subgraph(const std::vector<SeedHit>& seeds, const GraphSnapshot& snapshot,
                                const RetrievalConfig& config) {
    config.validate();
    SubgraphContext context;
    context.seeds = seeds;

    struct NodeState {
        int hop;
        std::string seed;
    };
    std::unordered_map<std::string, NodeState> visited;
    std::deque<std::pair<std::string, NodeState>> queue;

    std::size_t known = 0;
    for (const auto& seed : seeds) {
        if (!snapshot.contains(seed.cui)) {
            std::cerr << "warning: seed cui not in snapshot, skipping: " << seed.cui << '\n';
            continue;
        }
        ++known;
        if (visited.count(seed.cui)) continue;
        NodeState state{0, seed.cui};
        visited.emplace(seed.cui, state);
        queue.emplace_back(seed.cui, state);
    }
    if (!seeds.empty() && known == 0)
        throw Error(ErrorKind::UnknownCui, "no retrieval seed exists in the snapshot");

    std::unordered_set<uint32_t> taken_edges;
    bool budget_exhausted = false;
    while (!queue.empty() && !budget_exhausted) {
        auto [cui, state] = queue.front();
        queue.pop_front();
        if (state.hop >= config.max_hops) continue;
        const uint32_t index = *snapshot.index_of(cui);

        int taken_here = 0;
        for (const auto* entries : {&snapshot.out_entries(index), &snapshot.in_entries(index)}) {
            for (const AdjacencyEntry& entry : *entries) {
                if (taken_here >= config.per_node_fanout_cap) break;
                if (taken_edges.count(entry.edge_index)) continue;
                taken_edges.insert(entry.edge_index);
                ++taken_here;

                const RelationEdge& edge = snapshot.edges()[entry.edge_index];
                context.edges.push_back(edge);
                context.fragments.push_back(text::render_triple(edge, snapshot));
                context.paths.push_back({state.hop + 1, state.seed});

                if (!visited.count(entry.other_cui)) {
                    NodeState next{state.hop + 1, state.seed};
                    visited.emplace(entry.other_cui, next);
                    queue.emplace_back(entry.other_cui, next);
                }
                if (context.edges.size() >= static_cast<std::size_t>(config.max_edges)) {
                    budget_exhausted = true;
                    break;
                }
            }
            if (budget_exhausted || taken_here >= config.per_node_fanout_cap) break;
        }
    }
    return context;
}

PromptPackage build_prompt(const std::string& question, const SubgraphContext& context,
                           const RetrievalConfig& config, const std::vector<std::string>& passages,
                           const PromptTemplates& templates) {
    // retained[i] = keep fragment i; drop highest hop first, ties from the tail
    std::vector<bool> retained(context.fragments.size(), true);
    std::vector<std::size_t> words(context.fragments.size());
    long long total_words = 0;
    for (std::size_t i = 0; i < context.fragments.size(); ++i) {
        words[i] = count_words(context.fragments[i].text);
        total_words += static_cast<long long>(words[i]);
    }
    while (total_words > config.context_budget) {
        int worst_hop = -1;
        std::size_t worst_index = 0;
        bool found = false;
        for (std::size_t i = 0; i < context.fragments.size(); ++i) {
            if (!retained[i]) continue;
            const int hop = context.paths[i].hop;
            if (hop > worst_hop || (hop == worst_hop && i > worst_index)) {
                worst_hop = hop;
                worst_index = i;
                found = true;
            }
        }
        if (!found) break;
        retained[worst_index] = false;
        total_words -= static_cast<long long>(words[worst_index]);
    }

    PromptPackage prompt;
    prompt.system_text = templates.system_text;
    prompt.context_word_count = static_cast<int>(total_words);

    std::string user;
    const bool with_passages = config.include_question_passages && !passages.empty();
    if (with_passages) {
        user += templates.passages_header;
        user += '\n';
        for (const auto& passage : passages) {
            user += passage;
            user += '\n';
        }
        user += '\n';
    }
    bool any_fragment = false;
    for (std::size_t i = 0; i < context.fragments.size(); ++i) {
        if (!retained[i]) continue;
        if (!any_fragment) {
            user += templates.facts_header;
            user += '\n';
            any_fragment = true;
        }
        user += context.fragments[i].text;
        user += '\n';
    }
    if (any_fragment) user += '\n';
    user += templates.question_prefix;
    user += question;
    prompt.user_text = std::move(user);
    return prompt;
}

AnswerLabel parse_answer(const std::string& raw, QATask task) {
    for (const auto& token : tokenize(raw)) {
        if (token == "yes") return AnswerLabel::Yes;
        if (token == "no") return AnswerLabel::No;
        if (token == "maybe" && task == QATask::YesNoMaybe) return AnswerLabel::Maybe;
    }
    return AnswerLabel::Unparseable;
}

GroundedAnswer answer_question(const std::string& question, const GraphSnapshot& snapshot,
                               const embed::VectorIndex& index, const embed::EmbeddingModel& model,
                               const RetrievalConfig& config, const LlmEndpointConfig& endpoint,
                               QATask task, const std::vector<std::string>& passages,
                               const PromptTemplates& templates) {
    GroundedAnswer answer;
    answer.context = expand_subgraph(retrieve_seeds(question, index, model, config), snapshot, config);
    answer.prompt = build_prompt(question, answer.context, config, passages, templates);
    answer.raw_text = ask_llm(answer.prompt, endpoint);
    answer.label = parse_answer(answer.raw_text, task);
    return answer;
}

GroundedAnswer answer_baseline(const std::string& question, const RetrievalConfig& config,
                               const LlmEndpointConfig& endpoint, QATask task,
                               const std::vector<std::string>& passages,
                               const PromptTemplates& templates) {
    GroundedAnswer answer;
    answer.prompt = build_prompt(question, answer.context, config, passages, templates);
    answer.raw_text = ask_llm(answer.prompt, endpoint);
    answer.label = parse_answer(answer.raw_text, task);
    return answer;
}

std::string format_grounded_answer(const GroundedAnswer& answer) {
    std::ostringstream out;
    out << "answer: " << answer_label_name(answer.label) << '\n';
    out << "evidence (" << answer.context.fragments.size() << " fragments):\n";
    for (std::size_t i = 0; i < answer.context.fragments.size(); ++i) {
        out << "  [hop " << answer.context.paths[i].hop << ", seed "
            << answer.context.paths[i].seed_cui << "] " << answer.context.fragments[i].text
            << '\n';
    }
    return out.str();
}

} // namespace biokg::rag
