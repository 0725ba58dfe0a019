#pragma once

#include "biokg/graphrag.hpp"

#include <optional>
#include <string>
#include <vector>

namespace biokg::qa {

struct QAItem {
    std::string id;
    std::string question;
    std::vector<std::string> passages; // optional supporting texts
    rag::AnswerLabel gold = rag::AnswerLabel::Unparseable;

    bool operator==(const QAItem&) const = default;
};

enum class DatasetFormat { PubmedqaJson, BioasqJson, GenericJsonl };

DatasetFormat dataset_format_from_name(const std::string& name);
const char* dataset_format_name(DatasetFormat format);

struct QADataset {
    std::string name; // file stem
    rag::QATask task = rag::QATask::YesNoMaybe;
    std::vector<QAItem> items;
};

// File formats:
//   generic_jsonl  one object per line: {"id", "question", "passages"?, "gold"}
//   pubmedqa_json  {"<id>": {"QUESTION", "CONTEXTS"?, "final_decision"}, ...}
//                  task yes/no/maybe
//   bioasq_json    {"questions": [{"id", "body", "snippets"?, "exact_answer"}]}
//                  task yes/no; "maybe" is rejected
QADataset load_dataset(const std::string& path, DatasetFormat format);

enum class EvalMode { Baseline, Graphrag };

const char* eval_mode_name(EvalMode mode);

// Everything needed to answer a question in either mode. snapshot/index/
// model may be null for baseline-only use.
struct QaPipeline {
    const GraphSnapshot* snapshot = nullptr;
    const embed::VectorIndex* index = nullptr;
    const embed::EmbeddingModel* model = nullptr;
    rag::RetrievalConfig retrieval;
    rag::LlmEndpointConfig endpoint;
    rag::PromptTemplates templates;
};

struct PerItemResult {
    std::string id;
    rag::AnswerLabel predicted = rag::AnswerLabel::Unparseable;
    rag::AnswerLabel gold = rag::AnswerLabel::Unparseable;
    bool correct = false;
    int context_fragments = 0;
    std::string note; // error note when the LLM call failed

    bool operator==(const PerItemResult&) const = default;
};

struct EvalReport {
    std::string dataset_name;
    EvalMode mode = EvalMode::Baseline;
    int n_items = 0;
    int n_correct = 0;
    double accuracy = 0.0; // percent
    std::string config_fingerprint;
    std::vector<PerItemResult> per_item;
};

// Answers every item; unparseable predictions and per-item LLM failures
// count as incorrect. Aborts (EndpointFailure) only when every single item
// failed at the endpoint.
EvalReport run_eval(const QADataset& dataset, EvalMode mode, const QaPipeline& pipeline);

// hash of retrieval config + prompt templates + endpoint model name
std::string config_fingerprint(const rag::RetrievalConfig& retrieval,
                               const rag::PromptTemplates& templates,
                               const std::string& model_name);

struct ReportDelta {
    double absolute_delta = 0.0;     // accuracy points
    double relative_delta_pct = 0.0; // 100 * (b - a) / a
    std::vector<std::string> flipped_to_correct;   // wrong in a, right in b
    std::vector<std::string> flipped_to_incorrect; // right in a, wrong in b
};

// Requires identical dataset_name and n_items (DatasetMismatch otherwise).
ReportDelta compare_reports(const EvalReport& a, const EvalReport& b);

struct RepeatedEvalSummary {
    std::vector<EvalReport> reports;
    double mean_accuracy = 0.0;
    double stddev_accuracy = 0.0; // sample stddev; 0 for a single run
};

RepeatedEvalSummary run_eval_repeated(const QADataset& dataset, EvalMode mode,
                                      const QaPipeline& pipeline, int runs);

std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);
std::string delta_to_table(const ReportDelta& delta);

} // namespace biokg::qa
