#include "biokg/config.hpp"
#include "biokg/embed.hpp"
#include "biokg/errors.hpp"
#include "biokg/graphrag.hpp"
#include "biokg/kg_build.hpp"
#include "biokg/neo4j_export.hpp"
#include "biokg/qa_eval.hpp"
#include "biokg/service.hpp"
#include "biokg/snapshot.hpp"
#include "biokg/textualize.hpp"
#include "biokg/util.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitUpstream = 3;

struct CliOptions {
    std::string config_path;
    // per-subcommand flags
    bool drop_suppressed_flag = false;
    bool head_first_flag = false;
    bool no_graph = false;
    std::string question;
    std::string dataset_path;
    std::string dataset_format = "generic_jsonl";
    std::string eval_mode = "graphrag";
    std::string report_out;
    int runs = 1;
    std::optional<uint64_t> shard_size;
};

biokg::AppConfig load_app_config(const CliOptions& options) {
    if (options.config_path.empty()) return biokg::AppConfig{};
    return biokg::load_config(options.config_path);
}

void require_file(const std::string& path, const std::string& what) {
    if (path.empty())
        throw biokg::Error(biokg::ErrorKind::ConfigError, what + " is not configured");
    if (!std::filesystem::exists(path))
        throw biokg::Error(biokg::ErrorKind::FileNotFound, what + " not found: " + path);
}

void require_file_if_set(const std::string& path, const std::string& what) {
    if (!path.empty() && !std::filesystem::exists(path))
        throw biokg::Error(biokg::ErrorKind::FileNotFound, what + " not found: " + path);
}

biokg::embed::EmbeddingModel make_model(const biokg::AppConfig& config) {
    if (!config.embedding_model_path.empty()) {
        require_file(config.embedding_model_path, "embedding model");
        return biokg::embed::EmbeddingModel::load_file(config.embedding_model_path);
    }
    return biokg::embed::EmbeddingModel::hashed(config.embedding_dimension,
                                                config.embedding_seed);
}

void print_ingest_report(const char* table, const biokg::rrf::IngestReport& report) {
    std::cout << "  " << table << ": read " << report.rows_read << ", decoded "
              << report.rows_decoded << ", malformed " << report.rows_malformed << '\n';
    for (const auto& [line, reason] : report.first_malformed_lines)
        std::cout << "    line " << line << ": " << reason << '\n';
}

int cmd_build(const CliOptions& options) {
    biokg::AppConfig config = load_app_config(options);
    if (options.drop_suppressed_flag) config.drop_suppressed = true;

    require_file(config.mrconso_path, "MRCONSO file (rrf.mrconso)");
    require_file_if_set(config.mrdef_path, "MRDEF file (rrf.mrdef)");
    require_file_if_set(config.mrsty_path, "MRSTY file (rrf.mrsty)");
    require_file_if_set(config.mrrel_path, "MRREL file (rrf.mrrel)");

    biokg::kg::BuildInputs inputs;
    inputs.mrconso_path = config.mrconso_path;
    inputs.mrdef_path = config.mrdef_path;
    inputs.mrsty_path = config.mrsty_path;
    inputs.mrrel_path = config.mrrel_path;
    inputs.conso_schema = config.conso_schema;
    inputs.def_schema = config.def_schema;
    inputs.sty_schema = config.sty_schema;
    inputs.rel_schema = config.rel_schema;
    inputs.options.drop_suppressed = config.drop_suppressed;

    auto result = biokg::kg::build_graph(inputs);
    const auto receipt = biokg::save_snapshot(result.snapshot, config.snapshot_path);

    std::cout << "ingest\n";
    print_ingest_report("MRCONSO", result.conso_report);
    if (!config.mrdef_path.empty()) print_ingest_report("MRDEF", result.def_report);
    if (!config.mrsty_path.empty()) print_ingest_report("MRSTY", result.sty_report);
    if (!config.mrrel_path.empty()) print_ingest_report("MRREL", result.rel_report);
    std::cout << biokg::build_stats_to_table(result.snapshot.stats());
    std::cout << "snapshot " << receipt.path << " (" << receipt.bytes_written << " bytes, checksum "
              << receipt.checksum << ")\n";

    biokg::write_text_file(config.snapshot_path + ".stats",
                           biokg::build_stats_to_kv(result.snapshot.stats()));
    return kExitOk;
}

int cmd_textualize(const CliOptions& options) {
    biokg::AppConfig config = load_app_config(options);
    require_file(config.snapshot_path, "snapshot (paths.snapshot)");
    const auto snapshot = biokg::load_snapshot(config.snapshot_path);

    biokg::text::CorpusOptions corpus_options;
    corpus_options.shard_size_words = options.shard_size.value_or(config.shard_size_words);
    corpus_options.head_first = options.head_first_flag || config.head_first;
    const auto stats = biokg::text::write_corpus(snapshot, config.corpus_dir, corpus_options);

    std::cout << "corpus written to " << config.corpus_dir << '\n'
              << biokg::text::corpus_stats_to_kv(stats);
    biokg::write_text_file(
        (std::filesystem::path(config.corpus_dir) / "corpus.stats").string(),
        biokg::text::corpus_stats_to_kv(stats));
    return kExitOk;
}

int cmd_export_neo4j(const CliOptions& options) {
    biokg::AppConfig config = load_app_config(options);
    require_file(config.snapshot_path, "snapshot (paths.snapshot)");
    const auto snapshot = biokg::load_snapshot(config.snapshot_path);
    const auto manifest = biokg::export_neo4j(snapshot, config.export_dir);
    std::cout << biokg::manifest_to_kv(manifest);
    biokg::write_text_file(
        (std::filesystem::path(config.export_dir) / "manifest.txt").string(),
        biokg::manifest_to_kv(manifest));
    return kExitOk;
}

int cmd_index(const CliOptions& options) {
    biokg::AppConfig config = load_app_config(options);
    require_file(config.snapshot_path, "snapshot (paths.snapshot)");
    const auto snapshot = biokg::load_snapshot(config.snapshot_path);
    const auto model = make_model(config);
    const auto index =
        biokg::embed::VectorIndex::build(snapshot, model, config.index_source);
    index.save_file(config.index_path);
    std::cout << "index " << config.index_path << ": " << index.size() << " entries, dimension "
              << index.dimension() << ", source "
              << biokg::embed::index_source_name(config.index_source) << '\n';
    return kExitOk;
}

int cmd_ask(const CliOptions& options) {
    biokg::AppConfig config = load_app_config(options);
    const auto templates = config.prompt_templates();

    biokg::rag::GroundedAnswer answer;
    if (options.no_graph) {
        answer = biokg::rag::answer_baseline(options.question, config.retrieval, config.endpoint,
                                             biokg::rag::QATask::YesNoMaybe, {}, templates);
    } else {
        require_file(config.snapshot_path, "snapshot (paths.snapshot)");
        require_file(config.index_path, "vector index (paths.index)");
        const auto snapshot = biokg::load_snapshot(config.snapshot_path);
        const auto index = biokg::embed::VectorIndex::load_file(config.index_path);
        const auto model = make_model(config);
        answer = biokg::rag::answer_question(options.question, snapshot, index, model,
                                             config.retrieval, config.endpoint,
                                             biokg::rag::QATask::YesNoMaybe, {}, templates);
    }
    std::cout << biokg::rag::format_grounded_answer(answer);
    return kExitOk;
}

int cmd_eval(const CliOptions& options) {
    biokg::AppConfig config = load_app_config(options);
    require_file(options.dataset_path, "dataset");
    const auto format = biokg::qa::dataset_format_from_name(options.dataset_format);
    const auto dataset = biokg::qa::load_dataset(options.dataset_path, format);

    biokg::qa::QaPipeline pipeline;
    pipeline.retrieval = config.retrieval;
    pipeline.endpoint = config.endpoint;
    pipeline.templates = config.prompt_templates();

    const auto mode = options.eval_mode == "baseline" ? biokg::qa::EvalMode::Baseline
                                                      : biokg::qa::EvalMode::Graphrag;
    std::optional<biokg::GraphSnapshot> snapshot;
    std::optional<biokg::embed::VectorIndex> index;
    std::optional<biokg::embed::EmbeddingModel> model;
    if (mode == biokg::qa::EvalMode::Graphrag) {
        require_file(config.snapshot_path, "snapshot (paths.snapshot)");
        require_file(config.index_path, "vector index (paths.index)");
        snapshot = biokg::load_snapshot(config.snapshot_path);
        index = biokg::embed::VectorIndex::load_file(config.index_path);
        model = make_model(config);
        pipeline.snapshot = &*snapshot;
        pipeline.index = &*index;
        pipeline.model = &*model;
    }

    if (options.runs <= 1) {
        const auto report = biokg::qa::run_eval(dataset, mode, pipeline);
        std::cout << biokg::qa::report_to_table(report);
        if (!options.report_out.empty())
            biokg::write_text_file(options.report_out, biokg::qa::report_to_json(report));
    } else {
        const auto summary = biokg::qa::run_eval_repeated(dataset, mode, pipeline, options.runs);
        std::cout << biokg::qa::report_to_table(summary.reports.front());
        std::cout << "runs       " << options.runs << '\n'
                  << "mean       " << std::fixed << std::setprecision(2) << summary.mean_accuracy
                  << "%\n"
                  << "stddev     " << std::fixed << std::setprecision(2) << summary.stddev_accuracy
                  << '\n';
        if (!options.report_out.empty())
            biokg::write_text_file(options.report_out,
                                   biokg::qa::report_to_json(summary.reports.front()));
    }
    return kExitOk;
}

int cmd_serve(const CliOptions& options) {
    biokg::AppConfig config = load_app_config(options);
    require_file(config.snapshot_path, "snapshot (paths.snapshot)");
    require_file(config.index_path, "vector index (paths.index)");
    const auto snapshot = biokg::load_snapshot(config.snapshot_path);
    const auto index = biokg::embed::VectorIndex::load_file(config.index_path);
    const auto model = make_model(config);

    biokg::service::ServiceDeps deps;
    deps.snapshot = &snapshot;
    deps.index = &index;
    deps.model = &model;
    deps.config = config;
    return biokg::service::run_service(deps);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"biomedical knowledge graph pipeline and retrieval service"};
    app.require_subcommand(1);

    CliOptions options;
    app.add_option("-c,--config", options.config_path, "configuration file");

    auto* build = app.add_subcommand("build", "build a graph snapshot from RRF tables");
    build->add_flag("--drop-suppressed", options.drop_suppressed_flag,
                    "exclude suppressed MRCONSO/MRDEF rows (SUPPRESS in {O,E,Y})");

    auto* textualize = app.add_subcommand("textualize", "write the textualized corpus");
    textualize->add_flag("--head-first", options.head_first_flag,
                         "render fragments head-first instead of tail-first");
    uint64_t shard_size_opt = 0;
    auto* shard_opt =
        textualize->add_option("--shard-size", shard_size_opt, "max words per corpus shard");

    app.add_subcommand("export-neo4j", "write Neo4j bulk-import CSV files");
    app.add_subcommand("index", "build and persist the vector index");

    auto* ask = app.add_subcommand("ask", "answer one question with graph-based retrieval");
    ask->add_option("question", options.question, "the question to answer")->required();
    ask->add_flag("--no-graph", options.no_graph, "baseline prompt without graph context");

    auto* eval = app.add_subcommand("eval", "run a QA benchmark");
    eval->add_option("--dataset", options.dataset_path, "dataset file")->required();
    eval->add_option("--format", options.dataset_format,
                     "pubmedqa_json | bioasq_json | generic_jsonl");
    eval->add_option("--mode", options.eval_mode, "baseline | graphrag")
        ->check(CLI::IsMember({"baseline", "graphrag"}));
    eval->add_option("--out", options.report_out, "write the JSON report here");
    eval->add_option("--runs", options.runs, "repeat the eval and report mean/stddev");

    app.add_subcommand("serve", "run the retrieval/QA HTTP service");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("build")) return cmd_build(options);
        if (app.got_subcommand("textualize")) {
            if (shard_opt->count() > 0) options.shard_size = shard_size_opt;
            return cmd_textualize(options);
        }
        if (app.got_subcommand("export-neo4j")) return cmd_export_neo4j(options);
        if (app.got_subcommand("index")) return cmd_index(options);
        if (app.got_subcommand("ask")) return cmd_ask(options);
        if (app.got_subcommand("eval")) return cmd_eval(options);
        if (app.got_subcommand("serve")) return cmd_serve(options);
    } catch (const biokg::Error& e) {
        std::cerr << "error (" << biokg::error_kind_name(e.kind()) << "): " << e.what() << '\n';
        return e.upstream() ? kExitUpstream : kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
