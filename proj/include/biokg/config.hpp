#pragma once

#include "biokg/embed.hpp"
#include "biokg/graphrag.hpp"
#include "biokg/kg_build.hpp"

#include <cstdint>
#include <string>

namespace biokg {

// Full application configuration. One declarative key = value file; secrets
// never appear here (llm.api_key_env names the environment variable that
// holds the token). Unknown keys are rejected.
struct AppConfig {
    // rrf.*
    std::string mrconso_path;
    std::string mrdef_path;
    std::string mrsty_path;
    std::string mrrel_path;

    // schema.<table>.<field> overrides
    rrf::TableSchema conso_schema = rrf::TableSchema::defaults(rrf::TableKind::Conso);
    rrf::TableSchema def_schema = rrf::TableSchema::defaults(rrf::TableKind::Def);
    rrf::TableSchema sty_schema = rrf::TableSchema::defaults(rrf::TableKind::Sty);
    rrf::TableSchema rel_schema = rrf::TableSchema::defaults(rrf::TableKind::Rel);

    // build.*
    bool drop_suppressed = false;

    // paths.*
    std::string snapshot_path = "kg.snapshot";
    std::string index_path = "kg.index";
    std::string corpus_dir = "corpus";
    std::string export_dir = "neo4j";

    // textualize.*
    uint64_t shard_size_words = 10'000'000;
    bool head_first = false;

    // embedding.*
    std::string embedding_model_path; // empty -> hashed fallback
    int embedding_dimension = 256;
    uint64_t embedding_seed = 42;
    embed::IndexSource index_source = embed::IndexSource::ConceptBlocks;

    // retrieval.*
    rag::RetrievalConfig retrieval;

    // llm.*
    rag::LlmEndpointConfig endpoint{
        .base_url = "http://127.0.0.1:8080/v1",
        .model_name = "llama-3.1-8b-instruct",
        .api_key_env = "",
        .timeout_seconds = 60.0,
        .max_retries = 2,
        .temperature = 0.0,
    };

    // prompts.*
    std::string prompt_system_file; // empty -> built-in template

    // service.*
    std::string service_bind = "127.0.0.1";
    int service_port = 8750;

    bool operator==(const AppConfig&) const = default;

    // Templates with the system text replaced from prompt_system_file when set.
    rag::PromptTemplates prompt_templates() const;
};

// Parses the documented key = value grammar ('#' comments, blank lines
// allowed). Throws ConfigError with a line number on unknown keys or bad
// values.
AppConfig parse_config(const std::string& text);
AppConfig load_config(const std::string& path);

// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const AppConfig& config);

} // namespace biokg
