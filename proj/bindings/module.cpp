#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biokg/config.hpp"
#include "biokg/embed.hpp"
#include "biokg/errors.hpp"
#include "biokg/graphrag.hpp"
#include "biokg/kg_build.hpp"
#include "biokg/mock_llm.hpp"
#include "biokg/neo4j_export.hpp"
#include "biokg/qa_eval.hpp"
#include "biokg/snapshot.hpp"
#include "biokg/textualize.hpp"

namespace py = pybind11;
using namespace biokg;

namespace {

Direction direction_from_name(const std::string& name) {
    if (name == "out") return Direction::Out;
    if (name == "in") return Direction::In;
    if (name == "both") return Direction::Both;
    throw Error(ErrorKind::ConfigError, "direction must be out, in, or both");
}

rag::QATask task_from_name(const std::string& name) {
    if (name == "yes_no") return rag::QATask::YesNo;
    if (name == "yes_no_maybe") return rag::QATask::YesNoMaybe;
    throw Error(ErrorKind::ConfigError, "task must be yes_no or yes_no_maybe");
}

py::dict concept_to_dict(const ConceptRecord& record) {
    py::dict out;
    out["cui"] = record.cui;
    out["preferred_name"] = record.preferred_name;
    out["synonyms"] = record.synonyms;
    out["semantic_types"] = record.semantic_types;
    out["definitions"] = record.definitions;
    out["definition_count"] = record.definition_count;
    return out;
}

py::dict edge_to_dict(const RelationEdge& edge) {
    py::dict out;
    out["head"] = edge.head_cui;
    out["tail"] = edge.tail_cui;
    out["label"] = edge.label;
    out["provenance"] = label_provenance_name(edge.label_provenance);
    out["source"] = edge.source;
    return out;
}

py::dict stats_to_dict(const BuildStats& s) {
    py::dict out;
    out["concepts_kept"] = s.concepts_kept;
    out["definitions_merged"] = s.definitions_merged;
    out["multi_definition_concepts"] = s.multi_definition_concepts;
    out["edges_kept"] = s.edges_kept;
    out["edges_before_dedupe"] = s.edges_before_dedupe;
    out["duplicate_edges_collapsed"] = s.duplicate_edges_collapsed;
    out["self_relations_dropped"] = s.self_relations_dropped;
    out["non_english_endpoint_dropped"] = s.non_english_endpoint_dropped;
    out["fallback_labels_used"] = s.fallback_labels_used;
    out["distinct_labels"] = s.distinct_labels;
    return out;
}

py::dict context_to_dict(const rag::SubgraphContext& context) {
    py::list seeds;
    for (const auto& seed : context.seeds) seeds.append(py::make_tuple(seed.cui, seed.score));
    py::list edges;
    for (const auto& edge : context.edges) edges.append(edge_to_dict(edge));
    py::list fragments;
    for (const auto& fragment : context.fragments) fragments.append(fragment.text);
    py::list paths;
    for (const auto& path : context.paths)
        paths.append(py::make_tuple(path.hop, path.seed_cui));
    py::dict out;
    out["seeds"] = seeds;
    out["edges"] = edges;
    out["fragments"] = fragments;
    out["paths"] = paths;
    return out;
}

py::dict answer_to_dict(const rag::GroundedAnswer& answer) {
    py::dict out;
    out["label"] = rag::answer_label_name(answer.label);
    out["raw_text"] = answer.raw_text;
    out["context"] = context_to_dict(answer.context);
    out["system_text"] = answer.prompt.system_text;
    out["user_text"] = answer.prompt.user_text;
    out["context_word_count"] = answer.prompt.context_word_count;
    return out;
}

rag::SubgraphContext context_holder_or_empty(const rag::SubgraphContext* context) {
    return context ? *context : rag::SubgraphContext{};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "biomedical knowledge graph pipeline: RRF ingest, graph build, "
              "textualization, vector retrieval, and graph-grounded QA";

    py::register_exception<Error>(m, "BiokgError");

    py::class_<GraphSnapshot>(m, "Snapshot")
        .def_static("load", &load_snapshot, py::arg("path"))
        .def("save",
             [](const GraphSnapshot& snapshot, const std::string& path) {
                 const auto receipt = save_snapshot(snapshot, path);
                 py::dict out;
                 out["path"] = receipt.path;
                 out["node_count"] = receipt.node_count;
                 out["edge_count"] = receipt.edge_count;
                 out["bytes_written"] = receipt.bytes_written;
                 out["checksum"] = receipt.checksum;
                 return out;
             },
             py::arg("path"))
        .def_property_readonly("num_concepts", &GraphSnapshot::num_concepts)
        .def_property_readonly("num_edges", &GraphSnapshot::num_edges)
        .def("cuis",
             [](const GraphSnapshot& snapshot) {
                 std::vector<std::string> out;
                 out.reserve(snapshot.num_concepts());
                 for (const auto& record : snapshot.concepts()) out.push_back(record.cui);
                 return out;
             })
        .def("contains", &GraphSnapshot::contains, py::arg("cui"))
        .def("concept",
             [](const GraphSnapshot& snapshot, const std::string& cui) {
                 return concept_to_dict(snapshot.concept_record(cui));
             },
             py::arg("cui"))
        .def("edges",
             [](const GraphSnapshot& snapshot) {
                 py::list out;
                 for (const auto& edge : snapshot.edges()) out.append(edge_to_dict(edge));
                 return out;
             })
        .def("labels", &GraphSnapshot::label_catalog)
        .def("stats",
             [](const GraphSnapshot& snapshot) { return stats_to_dict(snapshot.stats()); })
        .def("neighbors",
             [](const GraphSnapshot& snapshot, const std::string& cui,
                const std::string& direction) {
                 py::list out;
                 for (const auto& entry : snapshot.neighbors(cui, direction_from_name(direction)))
                     out.append(py::make_tuple(entry.label, entry.other_cui));
                 return out;
             },
             py::arg("cui"), py::arg("direction") = "both")
        .def("export_neo4j",
             [](const GraphSnapshot& snapshot, const std::string& out_dir) {
                 const auto manifest = export_neo4j(snapshot, out_dir);
                 py::dict out;
                 out["nodes_file"] = manifest.nodes_file;
                 out["relationships_file"] = manifest.relationships_file;
                 out["node_count"] = manifest.node_count;
                 out["relationship_count"] = manifest.relationship_count;
                 out["nodes_checksum"] = manifest.nodes_checksum;
                 out["relationships_checksum"] = manifest.relationships_checksum;
                 return out;
             },
             py::arg("out_dir"));

    m.def("build_snapshot",
          [](const std::string& mrconso, const std::string& mrdef, const std::string& mrsty,
             const std::string& mrrel, bool drop_suppressed) {
              kg::BuildInputs inputs;
              inputs.mrconso_path = mrconso;
              inputs.mrdef_path = mrdef;
              inputs.mrsty_path = mrsty;
              inputs.mrrel_path = mrrel;
              inputs.options.drop_suppressed = drop_suppressed;
              return kg::build_graph(inputs).snapshot;
          },
          py::arg("mrconso"), py::arg("mrdef") = "", py::arg("mrsty") = "", py::arg("mrrel") = "",
          py::arg("drop_suppressed") = false,
          "Run the full build pipeline over RRF files and return the snapshot.");

    m.def("verbalize_label", &text::verbalize_label, py::arg("label"));
    m.def("render_triple",
          [](const GraphSnapshot& snapshot, const std::string& head, const std::string& label,
             const std::string& tail, bool head_first) {
              RelationEdge edge;
              edge.head_cui = head;
              edge.label = label;
              edge.tail_cui = tail;
              return text::render_triple(edge, snapshot, head_first).text;
          },
          py::arg("snapshot"), py::arg("head"), py::arg("label"), py::arg("tail"),
          py::arg("head_first") = false);
    m.def("render_concept_block",
          [](const GraphSnapshot& snapshot, const std::string& cui, bool head_first) {
              return text::render_concept_block(cui, snapshot, head_first).lines;
          },
          py::arg("snapshot"), py::arg("cui"), py::arg("head_first") = false);
    m.def("write_corpus",
          [](const GraphSnapshot& snapshot, const std::string& out_dir, uint64_t shard_size_words,
             bool head_first) {
              text::CorpusOptions options;
              options.shard_size_words = shard_size_words;
              options.head_first = head_first;
              const auto stats = text::write_corpus(snapshot, out_dir, options);
              py::dict out;
              out["blocks_written"] = stats.blocks_written;
              out["fragments_written"] = stats.fragments_written;
              out["word_count"] = stats.word_count;
              out["bytes_written"] = stats.bytes_written;
              return out;
          },
          py::arg("snapshot"), py::arg("out_dir"), py::arg("shard_size_words") = 10'000'000,
          py::arg("head_first") = false);

    py::class_<embed::EmbeddingModel>(m, "EmbeddingModel")
        .def_static("hashed", &embed::EmbeddingModel::hashed, py::arg("dimension"),
                    py::arg("seed") = 42)
        .def_static("load", &embed::EmbeddingModel::load_file, py::arg("path"))
        .def("save", &embed::EmbeddingModel::save_file, py::arg("path"))
        .def_property_readonly("dimension", &embed::EmbeddingModel::dimension)
        .def("embed", [](const embed::EmbeddingModel& model,
                         const std::string& text) { return model.embed(text); },
             py::arg("text"));

    py::enum_<embed::IndexSource>(m, "IndexSource")
        .value("concept_blocks", embed::IndexSource::ConceptBlocks)
        .value("names_only", embed::IndexSource::NamesOnly);

    py::class_<embed::VectorIndex>(m, "VectorIndex")
        .def_static("build", &embed::VectorIndex::build, py::arg("snapshot"), py::arg("model"),
                    py::arg("source") = embed::IndexSource::ConceptBlocks)
        .def_static("build",
                    [](const GraphSnapshot& snapshot, const embed::EmbeddingModel& model,
                       const std::string& source) {
                        return embed::VectorIndex::build(snapshot, model,
                                                         embed::index_source_from_name(source));
                    },
                    py::arg("snapshot"), py::arg("model"), py::arg("source"))
        .def_static("load", &embed::VectorIndex::load_file, py::arg("path"))
        .def("save", &embed::VectorIndex::save_file, py::arg("path"))
        .def_property_readonly("size", &embed::VectorIndex::size)
        .def_property_readonly("dimension", &embed::VectorIndex::dimension)
        .def("top_k",
             [](const embed::VectorIndex& index, const std::vector<float>& query, std::size_t k) {
                 py::list out;
                 for (const auto& hit : index.top_k(query, k))
                     out.append(py::make_tuple(hit.cui, hit.score));
                 return out;
             },
             py::arg("query"), py::arg("k"))
        .def("search_text",
             [](const embed::VectorIndex& index, const embed::EmbeddingModel& model,
                const std::string& text, std::size_t k) {
                 py::list out;
                 for (const auto& hit : index.top_k(model.embed(text), k))
                     out.append(py::make_tuple(hit.cui, hit.score));
                 return out;
             },
             py::arg("model"), py::arg("text"), py::arg("k"));

    py::class_<rag::RetrievalConfig>(m, "RetrievalConfig")
        .def(py::init<>())
        .def_readwrite("seed_k", &rag::RetrievalConfig::seed_k)
        .def_readwrite("max_hops", &rag::RetrievalConfig::max_hops)
        .def_readwrite("max_edges", &rag::RetrievalConfig::max_edges)
        .def_readwrite("per_node_fanout_cap", &rag::RetrievalConfig::per_node_fanout_cap)
        .def_readwrite("context_budget", &rag::RetrievalConfig::context_budget)
        .def_readwrite("include_question_passages",
                       &rag::RetrievalConfig::include_question_passages);

    py::class_<rag::LlmEndpointConfig>(m, "LlmEndpointConfig")
        .def(py::init<>())
        .def_readwrite("base_url", &rag::LlmEndpointConfig::base_url)
        .def_readwrite("model_name", &rag::LlmEndpointConfig::model_name)
        .def_readwrite("api_key_env", &rag::LlmEndpointConfig::api_key_env)
        .def_readwrite("timeout_seconds", &rag::LlmEndpointConfig::timeout_seconds)
        .def_readwrite("max_retries", &rag::LlmEndpointConfig::max_retries)
        .def_readwrite("temperature", &rag::LlmEndpointConfig::temperature);

    py::class_<rag::SubgraphContext>(m, "SubgraphContext")
        .def(py::init<>())
        .def("to_dict", &context_to_dict)
        .def_property_readonly("num_edges",
                               [](const rag::SubgraphContext& c) { return c.edges.size(); });

    m.def("retrieve_seeds",
          [](const std::string& question, const embed::VectorIndex& index,
             const embed::EmbeddingModel& model, const rag::RetrievalConfig& config) {
              py::list out;
              for (const auto& seed : rag::retrieve_seeds(question, index, model, config))
                  out.append(py::make_tuple(seed.cui, seed.score));
              return out;
          },
          py::arg("question"), py::arg("index"), py::arg("model"), py::arg("config"));
    m.def("expand_subgraph",
          [](const GraphSnapshot& snapshot, const std::vector<std::pair<std::string, double>>& seeds,
             const rag::RetrievalConfig& config) {
              std::vector<rag::SeedHit> hits;
              hits.reserve(seeds.size());
              for (const auto& [cui, score] : seeds) hits.push_back({cui, score});
              return rag::expand_subgraph(hits, snapshot, config);
          },
          py::arg("snapshot"), py::arg("seeds"), py::arg("config"));
    m.def("build_prompt",
          [](const std::string& question, const rag::SubgraphContext* context,
             const rag::RetrievalConfig& config, const std::vector<std::string>& passages) {
              const auto holder = context_holder_or_empty(context);
              const auto prompt = rag::build_prompt(question, holder, config, passages);
              py::dict out;
              out["system_text"] = prompt.system_text;
              out["user_text"] = prompt.user_text;
              out["context_word_count"] = prompt.context_word_count;
              return out;
          },
          py::arg("question"), py::arg("context") = nullptr,
          py::arg("config") = rag::RetrievalConfig{},
          py::arg("passages") = std::vector<std::string>{});
    m.def("parse_answer",
          [](const std::string& raw, const std::string& task) {
              return rag::answer_label_name(rag::parse_answer(raw, task_from_name(task)));
          },
          py::arg("raw"), py::arg("task") = "yes_no_maybe");
    m.def("answer_question",
          [](const std::string& question, const GraphSnapshot& snapshot,
             const embed::VectorIndex& index, const embed::EmbeddingModel& model,
             const rag::RetrievalConfig& config, const rag::LlmEndpointConfig& endpoint,
             const std::string& task, const std::vector<std::string>& passages) {
              return answer_to_dict(rag::answer_question(question, snapshot, index, model, config,
                                                         endpoint, task_from_name(task), passages));
          },
          py::arg("question"), py::arg("snapshot"), py::arg("index"), py::arg("model"),
          py::arg("config"), py::arg("endpoint"), py::arg("task") = "yes_no_maybe",
          py::arg("passages") = std::vector<std::string>{});
    m.def("answer_baseline",
          [](const std::string& question, const rag::RetrievalConfig& config,
             const rag::LlmEndpointConfig& endpoint, const std::string& task,
             const std::vector<std::string>& passages) {
              return answer_to_dict(
                  rag::answer_baseline(question, config, endpoint, task_from_name(task), passages));
          },
          py::arg("question"), py::arg("config"), py::arg("endpoint"),
          py::arg("task") = "yes_no_maybe", py::arg("passages") = std::vector<std::string>{});

    m.def("load_dataset",
          [](const std::string& path, const std::string& format) {
              const auto dataset =
                  qa::load_dataset(path, qa::dataset_format_from_name(format));
              py::list items;
              for (const auto& item : dataset.items) {
                  py::dict record;
                  record["id"] = item.id;
                  record["question"] = item.question;
                  record["passages"] = item.passages;
                  record["gold"] = rag::answer_label_name(item.gold);
                  items.append(record);
              }
              py::dict out;
              out["name"] = dataset.name;
              out["task"] = dataset.task == rag::QATask::YesNo ? "yes_no" : "yes_no_maybe";
              out["items"] = items;
              return out;
          },
          py::arg("path"), py::arg("format") = "generic_jsonl");

    py::class_<rag::MockLlmServer>(m, "MockLlmServer")
        .def(py::init<>())
        .def("add_rule",
             [](rag::MockLlmServer& server, const std::vector<std::string>& needles,
                const std::string& reply) {
                 server.add_rule({needles, reply});
             },
             py::arg("needles"), py::arg("reply"))
        .def("set_default_reply", &rag::MockLlmServer::set_default_reply, py::arg("reply"))
        .def("set_fail_first", &rag::MockLlmServer::set_fail_first, py::arg("n"),
             py::arg("status") = 500)
        .def("start", &rag::MockLlmServer::start)
        .def("stop", &rag::MockLlmServer::stop)
        .def("base_url", &rag::MockLlmServer::base_url)
        .def_property_readonly("request_count", &rag::MockLlmServer::request_count);
}
