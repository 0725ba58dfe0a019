#include "biokg/config.hpp"

#include "biokg/errors.hpp"
#include "biokg/util.hpp"

#include <charconv>
#include <sstream>

namespace biokg {

namespace {

[[noreturn]] void bad(int line, const std::string& message) {
    throw Error(ErrorKind::ConfigError, "config line " + std::to_string(line) + ": " + message);
}

bool parse_bool(const std::string& value, int line) {
    if (value == "true") return true;
    if (value == "false") return false;
    bad(line, "expected true or false, got '" + value + "'");
}

long long parse_int(const std::string& value, int line) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        bad(line, "expected an integer, got '" + value + "'");
    return out;
}

uint64_t parse_u64(const std::string& value, int line) {
    uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        bad(line, "expected a non-negative integer, got '" + value + "'");
    return out;
}

double parse_double(const std::string& value, int line) {
    try {
        std::size_t consumed = 0;
        const double out = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing");
        return out;
    } catch (const std::exception&) {
        bad(line, "expected a number, got '" + value + "'");
    }
}

rrf::TableSchema* schema_for(AppConfig& config, const std::string& table) {
    if (table == "conso") return &config.conso_schema;
    if (table == "def") return &config.def_schema;
    if (table == "sty") return &config.sty_schema;
    if (table == "rel") return &config.rel_schema;
    return nullptr;
}

void apply_key(AppConfig& config, const std::string& key, const std::string& value, int line) {
    if (key == "rrf.mrconso") config.mrconso_path = value;
    else if (key == "rrf.mrdef") config.mrdef_path = value;
    else if (key == "rrf.mrsty") config.mrsty_path = value;
    else if (key == "rrf.mrrel") config.mrrel_path = value;
    else if (key == "build.drop_suppressed") config.drop_suppressed = parse_bool(value, line);
    else if (key == "paths.snapshot") config.snapshot_path = value;
    else if (key == "paths.index") config.index_path = value;
    else if (key == "paths.corpus_dir") config.corpus_dir = value;
    else if (key == "paths.export_dir") config.export_dir = value;
    else if (key == "textualize.shard_size_words") config.shard_size_words = parse_u64(value, line);
    else if (key == "textualize.head_first") config.head_first = parse_bool(value, line);
    else if (key == "embedding.model_path") config.embedding_model_path = value;
    else if (key == "embedding.dimension")
        config.embedding_dimension = static_cast<int>(parse_int(value, line));
    else if (key == "embedding.seed") config.embedding_seed = parse_u64(value, line);
    else if (key == "embedding.source") {
        try {
            config.index_source = embed::index_source_from_name(value);
        } catch (const Error& e) {
            bad(line, e.what());
        }
    } else if (key == "retrieval.seed_k")
        config.retrieval.seed_k = static_cast<int>(parse_int(value, line));
    else if (key == "retrieval.max_hops")
        config.retrieval.max_hops = static_cast<int>(parse_int(value, line));
    else if (key == "retrieval.max_edges")
        config.retrieval.max_edges = static_cast<int>(parse_int(value, line));
    else if (key == "retrieval.per_node_fanout_cap")
        config.retrieval.per_node_fanout_cap = static_cast<int>(parse_int(value, line));
    else if (key == "retrieval.context_budget")
        config.retrieval.context_budget = static_cast<int>(parse_int(value, line));
    else if (key == "retrieval.include_question_passages")
        config.retrieval.include_question_passages = parse_bool(value, line);
    else if (key == "llm.base_url") config.endpoint.base_url = value;
    else if (key == "llm.model_name") config.endpoint.model_name = value;
    else if (key == "llm.api_key_env") config.endpoint.api_key_env = value;
    else if (key == "llm.timeout_seconds") config.endpoint.timeout_seconds = parse_double(value, line);
    else if (key == "llm.max_retries")
        config.endpoint.max_retries = static_cast<int>(parse_int(value, line));
    else if (key == "llm.temperature") config.endpoint.temperature = parse_double(value, line);
    else if (key == "prompts.system_file") config.prompt_system_file = value;
    else if (key == "service.bind") config.service_bind = value;
    else if (key == "service.port") config.service_port = static_cast<int>(parse_int(value, line));
    else if (key.rfind("schema.", 0) == 0) {
        const std::string rest = key.substr(7);
        const auto dot = rest.find('.');
        if (dot == std::string::npos) bad(line, "schema keys look like schema.<table>.<field>");
        rrf::TableSchema* schema = schema_for(config, rest.substr(0, dot));
        if (!schema) bad(line, "unknown schema table '" + rest.substr(0, dot) + "'");
        try {
            schema->set_column(rest.substr(dot + 1), static_cast<int>(parse_int(value, line)));
        } catch (const Error& e) {
            bad(line, e.what());
        }
    } else {
        bad(line, "unknown key '" + key + "'");
    }
}

} // namespace

rag::PromptTemplates AppConfig::prompt_templates() const {
    rag::PromptTemplates templates;
    if (!prompt_system_file.empty()) {
        templates.system_text = trim(read_text_file(prompt_system_file));
        templates.version = "file:" + prompt_system_file;
    }
    return templates;
}

AppConfig parse_config(const std::string& text) {
    AppConfig config;
    std::istringstream in(text);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) bad(line_number, "expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) bad(line_number, "empty key");
        apply_key(config, key, value, line_number);
    }
    return config;
}

AppConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::string serialize_config(const AppConfig& c) {
    std::ostringstream out;
    out << "rrf.mrconso = " << c.mrconso_path << '\n';
    out << "rrf.mrdef = " << c.mrdef_path << '\n';
    out << "rrf.mrsty = " << c.mrsty_path << '\n';
    out << "rrf.mrrel = " << c.mrrel_path << '\n';
    const struct {
        const char* name;
        const rrf::TableSchema* schema;
        rrf::TableKind kind;
    } tables[] = {
        {"conso", &c.conso_schema, rrf::TableKind::Conso},
        {"def", &c.def_schema, rrf::TableKind::Def},
        {"sty", &c.sty_schema, rrf::TableKind::Sty},
        {"rel", &c.rel_schema, rrf::TableKind::Rel},
    };
    for (const auto& table : tables) {
        const auto defaults = rrf::TableSchema::defaults(table.kind);
        for (const auto& [field, index] : table.schema->columns) {
            if (defaults.columns.at(field) != index)
                out << "schema." << table.name << "." << field << " = " << index << '\n';
        }
    }
    out << "build.drop_suppressed = " << (c.drop_suppressed ? "true" : "false") << '\n';
    out << "paths.snapshot = " << c.snapshot_path << '\n';
    out << "paths.index = " << c.index_path << '\n';
    out << "paths.corpus_dir = " << c.corpus_dir << '\n';
    out << "paths.export_dir = " << c.export_dir << '\n';
    out << "textualize.shard_size_words = " << c.shard_size_words << '\n';
    out << "textualize.head_first = " << (c.head_first ? "true" : "false") << '\n';
    out << "embedding.model_path = " << c.embedding_model_path << '\n';
    out << "embedding.dimension = " << c.embedding_dimension << '\n';
    out << "embedding.seed = " << c.embedding_seed << '\n';
    out << "embedding.source = " << embed::index_source_name(c.index_source) << '\n';
    out << "retrieval.seed_k = " << c.retrieval.seed_k << '\n';
    out << "retrieval.max_hops = " << c.retrieval.max_hops << '\n';
    out << "retrieval.max_edges = " << c.retrieval.max_edges << '\n';
    out << "retrieval.per_node_fanout_cap = " << c.retrieval.per_node_fanout_cap << '\n';
    out << "retrieval.context_budget = " << c.retrieval.context_budget << '\n';
    out << "retrieval.include_question_passages = "
        << (c.retrieval.include_question_passages ? "true" : "false") << '\n';
    out << "llm.base_url = " << c.endpoint.base_url << '\n';
    out << "llm.model_name = " << c.endpoint.model_name << '\n';
    out << "llm.api_key_env = " << c.endpoint.api_key_env << '\n';
    out << "llm.timeout_seconds = " << c.endpoint.timeout_seconds << '\n';
    out << "llm.max_retries = " << c.endpoint.max_retries << '\n';
    out << "llm.temperature = " << c.endpoint.temperature << '\n';
    out << "prompts.system_file = " << c.prompt_system_file << '\n';
    out << "service.bind = " << c.service_bind << '\n';
    out << "service.port = " << c.service_port << '\n';
    return out.str();
}

} // namespace biokg
