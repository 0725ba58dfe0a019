#include "biokg/qa_eval.hpp"

#include "biokg/errors.hpp"
#include "biokg/util.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace biokg::qa {

namespace {

using ordered_json = nlohmann::ordered_json;

rag::AnswerLabel gold_from_string(const std::string& raw, rag::QATask task,
                                  const std::string& where) {
    const std::string label = lower_ascii(trim(raw));
    if (label == "yes") return rag::AnswerLabel::Yes;
    if (label == "no") return rag::AnswerLabel::No;
    if (label == "maybe" && task == rag::QATask::YesNoMaybe) return rag::AnswerLabel::Maybe;
    throw Error(ErrorKind::UnknownLabel, "unknown gold label '" + raw + "' at " + where);
}

std::string id_from_json(const ordered_json& value, const std::string& where) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    throw Error(ErrorKind::ParseError, "id must be a string or integer at " + where);
}

std::vector<std::string> passages_from_array(const ordered_json& array, const std::string& where) {
    std::vector<std::string> out;
    if (!array.is_array())
        throw Error(ErrorKind::ParseError, "passages must be an array at " + where);
    for (const auto& passage : array) {
        if (!passage.is_string())
            throw Error(ErrorKind::ParseError, "passages must be strings at " + where);
        out.push_back(passage.get<std::string>());
    }
    return out;
}

QADataset load_generic_jsonl(const std::string& path) {
    QADataset dataset;
    dataset.task = rag::QATask::YesNoMaybe;
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::FileNotFound, "cannot open dataset: " + path);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        const std::string where = path + ":" + std::to_string(line_number);
        ordered_json record;
        try {
            record = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::ParseError, where + ": " + e.what());
        }
        if (!record.contains("id") || !record.contains("question") || !record.contains("gold"))
            throw Error(ErrorKind::ParseError, where + ": record needs id, question, gold");
        QAItem item;
        item.id = id_from_json(record["id"], where);
        item.question = record["question"].get<std::string>();
        if (record.contains("passages"))
            item.passages = passages_from_array(record["passages"], where);
        item.gold = gold_from_string(record["gold"].get<std::string>(), dataset.task, where);
        dataset.items.push_back(std::move(item));
    }
    return dataset;
}

QADataset load_pubmedqa_json(const std::string& path) {
    QADataset dataset;
    dataset.task = rag::QATask::YesNoMaybe;
    ordered_json root;
    try {
        root = ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
    if (!root.is_object()) throw Error(ErrorKind::ParseError, path + ": expected a JSON object");
    for (const auto& [id, record] : root.items()) {
        const std::string where = path + " item " + id;
        if (!record.contains("QUESTION") || !record.contains("final_decision"))
            throw Error(ErrorKind::ParseError, where + ": needs QUESTION and final_decision");
        QAItem item;
        item.id = id;
        item.question = record["QUESTION"].get<std::string>();
        if (record.contains("CONTEXTS"))
            item.passages = passages_from_array(record["CONTEXTS"], where);
        item.gold =
            gold_from_string(record["final_decision"].get<std::string>(), dataset.task, where);
        dataset.items.push_back(std::move(item));
    }
    return dataset;
}

QADataset load_bioasq_json(const std::string& path) {
    QADataset dataset;
    dataset.task = rag::QATask::YesNo;
    ordered_json root;
    try {
        root = ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
    if (!root.contains("questions") || !root["questions"].is_array())
        throw Error(ErrorKind::ParseError, path + ": expected a 'questions' array");
    int position = 0;
    for (const auto& record : root["questions"]) {
        ++position;
        const std::string where = path + " question " + std::to_string(position);
        if (!record.contains("body") || !record.contains("exact_answer"))
            throw Error(ErrorKind::ParseError, where + ": needs body and exact_answer");
        QAItem item;
        item.id = record.contains("id") ? id_from_json(record["id"], where)
                                        : "q" + std::to_string(position);
        item.question = record["body"].get<std::string>();
        if (record.contains("snippets")) {
            if (!record["snippets"].is_array())
                throw Error(ErrorKind::ParseError, where + ": snippets must be an array");
            for (const auto& snippet : record["snippets"]) {
                if (snippet.contains("text") && snippet["text"].is_string())
                    item.passages.push_back(snippet["text"].get<std::string>());
            }
        }
        item.gold =
            gold_from_string(record["exact_answer"].get<std::string>(), dataset.task, where);
        dataset.items.push_back(std::move(item));
    }
    return dataset;
}

} // namespace

DatasetFormat dataset_format_from_name(const std::string& name) {
    if (name == "pubmedqa_json") return DatasetFormat::PubmedqaJson;
    if (name == "bioasq_json") return DatasetFormat::BioasqJson;
    if (name == "generic_jsonl") return DatasetFormat::GenericJsonl;
    throw Error(ErrorKind::ConfigError, "unknown dataset format: " + name);
}

const char* dataset_format_name(DatasetFormat format) {
    switch (format) {
        case DatasetFormat::PubmedqaJson: return "pubmedqa_json";
        case DatasetFormat::BioasqJson: return "bioasq_json";
        case DatasetFormat::GenericJsonl: return "generic_jsonl";
    }
    return "?";
}

const char* eval_mode_name(EvalMode mode) {
    return mode == EvalMode::Baseline ? "baseline" : "graphrag";
}

QADataset load_dataset(const std::string& path, DatasetFormat format) {
    QADataset dataset;
    switch (format) {
        case DatasetFormat::GenericJsonl: dataset = load_generic_jsonl(path); break;
        case DatasetFormat::PubmedqaJson: dataset = load_pubmedqa_json(path); break;
        case DatasetFormat::BioasqJson: dataset = load_bioasq_json(path); break;
    }
    dataset.name = std::filesystem::path(path).stem().string();
    return dataset;
}

std::string config_fingerprint(const rag::RetrievalConfig& retrieval,
                               const rag::PromptTemplates& templates,
                               const std::string& model_name) {
    std::ostringstream blob;
    blob << retrieval.seed_k << '|' << retrieval.max_hops << '|' << retrieval.max_edges << '|'
         << retrieval.per_node_fanout_cap << '|' << retrieval.context_budget << '|'
         << retrieval.include_question_passages << '|' << rag::prompt_fingerprint(templates) << '|'
         << model_name;
    return hex64(fnv1a64(blob.str()));
}

EvalReport run_eval(const QADataset& dataset, EvalMode mode, const QaPipeline& pipeline) {
    if (mode == EvalMode::Graphrag &&
        (pipeline.snapshot == nullptr || pipeline.index == nullptr || pipeline.model == nullptr))
        throw Error(ErrorKind::ConfigError, "graphrag mode needs snapshot, index, and model");

    EvalReport report;
    report.dataset_name = dataset.name;
    report.mode = mode;
    report.n_items = static_cast<int>(dataset.items.size());
    report.config_fingerprint =
        config_fingerprint(pipeline.retrieval, pipeline.templates, pipeline.endpoint.model_name);

    int endpoint_failures = 0;
    for (const QAItem& item : dataset.items) {
        PerItemResult result;
        result.id = item.id;
        result.gold = item.gold;
        try {
            rag::GroundedAnswer answer;
            if (mode == EvalMode::Graphrag) {
                answer = rag::answer_question(item.question, *pipeline.snapshot, *pipeline.index,
                                              *pipeline.model, pipeline.retrieval,
                                              pipeline.endpoint, dataset.task, item.passages,
                                              pipeline.templates);
            } else {
                answer = rag::answer_baseline(item.question, pipeline.retrieval, pipeline.endpoint,
                                              dataset.task, item.passages, pipeline.templates);
            }
            result.predicted = answer.label;
            result.context_fragments = static_cast<int>(answer.context.fragments.size());
            result.correct = result.predicted != rag::AnswerLabel::Unparseable &&
                             result.predicted == result.gold;
        } catch (const Error& e) {
            if (!e.upstream()) throw;
            ++endpoint_failures;
            result.predicted = rag::AnswerLabel::Unparseable;
            result.correct = false;
            result.note = std::string(error_kind_name(e.kind())) + ": " + e.what();
        }
        if (result.correct) ++report.n_correct;
        report.per_item.push_back(std::move(result));
    }
    if (report.n_items > 0 && endpoint_failures == report.n_items)
        throw Error(ErrorKind::EndpointFailure,
                    "every item failed at the endpoint; aborting eval");
    if (report.n_items > 0)
        report.accuracy = 100.0 * report.n_correct / report.n_items;
    return report;
}

ReportDelta compare_reports(const EvalReport& a, const EvalReport& b) {
    if (a.dataset_name != b.dataset_name || a.n_items != b.n_items)
        throw Error(ErrorKind::DatasetMismatch,
                    "reports compare different datasets: " + a.dataset_name + "/" +
                        std::to_string(a.n_items) + " vs " + b.dataset_name + "/" +
                        std::to_string(b.n_items));
    ReportDelta delta;
    delta.absolute_delta = b.accuracy - a.accuracy;
    delta.relative_delta_pct = a.accuracy != 0.0 ? 100.0 * (b.accuracy - a.accuracy) / a.accuracy
                                                 : 0.0;
    // match per-item records by id
    std::unordered_map<std::string, bool> a_correct;
    for (const auto& item : a.per_item) a_correct.emplace(item.id, item.correct);
    for (const auto& item : b.per_item) {
        auto it = a_correct.find(item.id);
        if (it == a_correct.end()) continue;
        if (!it->second && item.correct) delta.flipped_to_correct.push_back(item.id);
        if (it->second && !item.correct) delta.flipped_to_incorrect.push_back(item.id);
    }
    return delta;
}

RepeatedEvalSummary run_eval_repeated(const QADataset& dataset, EvalMode mode,
                                      const QaPipeline& pipeline, int runs) {
    if (runs < 1) throw Error(ErrorKind::ConfigError, "runs must be >= 1");
    RepeatedEvalSummary summary;
    double sum = 0.0;
    for (int i = 0; i < runs; ++i) {
        summary.reports.push_back(run_eval(dataset, mode, pipeline));
        sum += summary.reports.back().accuracy;
    }
    summary.mean_accuracy = sum / runs;
    if (runs > 1) {
        double sq = 0.0;
        for (const auto& report : summary.reports) {
            const double d = report.accuracy - summary.mean_accuracy;
            sq += d * d;
        }
        summary.stddev_accuracy = std::sqrt(sq / (runs - 1));
    }
    return summary;
}

std::string report_to_json(const EvalReport& report) {
    ordered_json out = {
        {"dataset_name", report.dataset_name},
        {"mode", eval_mode_name(report.mode)},
        {"n_items", report.n_items},
        {"n_correct", report.n_correct},
        {"accuracy", report.accuracy},
        {"config_fingerprint", report.config_fingerprint},
    };
    ordered_json items = ordered_json::array();
    for (const auto& item : report.per_item) {
        ordered_json record = {
            {"id", item.id},
            {"predicted", rag::answer_label_name(item.predicted)},
            {"gold", rag::answer_label_name(item.gold)},
            {"correct", item.correct},
            {"context_fragments", item.context_fragments},
        };
        if (!item.note.empty()) record["note"] = item.note;
        items.push_back(std::move(record));
    }
    out["per_item"] = std::move(items);
    return out.dump(2);
}

std::string report_to_table(const EvalReport& report) {
    std::ostringstream out;
    out << "dataset    " << report.dataset_name << '\n'
        << "mode       " << eval_mode_name(report.mode) << '\n'
        << "items      " << report.n_items << '\n'
        << "correct    " << report.n_correct << '\n'
        << "accuracy   " << std::fixed << std::setprecision(2) << report.accuracy << "%\n"
        << "fingerprint " << report.config_fingerprint << '\n';
    return out.str();
}

std::string delta_to_table(const ReportDelta& delta) {
    std::ostringstream out;
    out << "absolute delta  " << std::showpos << std::fixed << std::setprecision(2)
        << delta.absolute_delta << std::noshowpos << " points\n"
        << "relative delta  " << std::showpos << std::fixed << std::setprecision(2)
        << delta.relative_delta_pct << std::noshowpos << "%\n"
        << "flipped to correct   " << delta.flipped_to_correct.size() << '\n'
        << "flipped to incorrect " << delta.flipped_to_incorrect.size() << '\n';
    return out.str();
}

} // namespace biokg::qa
