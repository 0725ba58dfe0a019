#include "biokg/service.hpp"

#include "biokg/errors.hpp"
#include "biokg/qa_eval.hpp"
#include "biokg/util.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <ctime>
#include <iostream>
#include <thread>

namespace biokg::service {

namespace {

using ordered_json = nlohmann::ordered_json;

std::atomic<bool> g_shutdown{false};

void handle_signal(int) { g_shutdown.store(true); }

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void log_request(const httplib::Request& req, const httplib::Response& res) {
    ordered_json line = {
        {"ts", timestamp_utc()},
        {"method", req.method},
        {"path", req.path},
        {"status", res.status},
        {"remote", req.remote_addr},
    };
    std::cerr << line.dump() << '\n';
}

void set_error(httplib::Response& res, int status, const std::string& message) {
    ordered_json body = {{"error", message}};
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

// partial RetrievalConfig overrides from a /retrieve body; unknown keys -> 400
rag::RetrievalConfig apply_overrides(const rag::RetrievalConfig& base, const ordered_json& body) {
    rag::RetrievalConfig config = base;
    for (const auto& [key, value] : body.items()) {
        if (key == "question") continue;
        if (key == "seed_k") config.seed_k = value.get<int>();
        else if (key == "max_hops") config.max_hops = value.get<int>();
        else if (key == "max_edges") config.max_edges = value.get<int>();
        else if (key == "per_node_fanout_cap") config.per_node_fanout_cap = value.get<int>();
        else if (key == "context_budget") config.context_budget = value.get<int>();
        else if (key == "include_question_passages")
            config.include_question_passages = value.get<bool>();
        else throw Error(ErrorKind::ConfigError, "unknown override '" + key + "'");
    }
    config.validate();
    return config;
}

} // namespace

std::string context_to_json(const rag::SubgraphContext& context) {
    ordered_json seeds = ordered_json::array();
    for (const auto& seed : context.seeds)
        seeds.push_back({{"cui", seed.cui}, {"score", seed.score}});
    ordered_json edges = ordered_json::array();
    for (const auto& edge : context.edges) {
        edges.push_back({{"head", edge.head_cui},
                         {"tail", edge.tail_cui},
                         {"label", edge.label},
                         {"provenance", label_provenance_name(edge.label_provenance)},
                         {"source", edge.source}});
    }
    ordered_json fragments = ordered_json::array();
    for (const auto& fragment : context.fragments) fragments.push_back(fragment.text);
    ordered_json paths = ordered_json::array();
    for (const auto& path : context.paths)
        paths.push_back({{"hop", path.hop}, {"seed", path.seed_cui}});
    ordered_json out = {
        {"seeds", std::move(seeds)},
        {"edges", std::move(edges)},
        {"fragments", std::move(fragments)},
        {"paths", std::move(paths)},
    };
    return out.dump();
}

std::string answer_to_json(const rag::GroundedAnswer& answer, const std::string& prompt_hash) {
    ordered_json fragments = ordered_json::array();
    for (const auto& fragment : answer.context.fragments) fragments.push_back(fragment.text);
    ordered_json paths = ordered_json::array();
    for (const auto& path : answer.context.paths)
        paths.push_back({{"hop", path.hop}, {"seed", path.seed_cui}});
    ordered_json out = {
        {"label", rag::answer_label_name(answer.label)},
        {"raw_text", answer.raw_text},
        {"fragments", std::move(fragments)},
        {"paths", std::move(paths)},
        {"prompt_hash", prompt_hash},
    };
    return out.dump();
}

int run_service(const ServiceDeps& deps) {
    httplib::Server server;
    const rag::PromptTemplates templates = deps.config.prompt_templates();
    const std::string prompt_hash = rag::prompt_fingerprint(templates);

    server.set_logger(log_request);
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                    std::exception_ptr ep) {
        // no stack traces or internal details in responses
        try {
            std::rethrow_exception(ep);
        } catch (const Error& e) {
            if (e.upstream()) set_error(res, 503, "language model endpoint unavailable");
            else set_error(res, 500, "internal error");
        } catch (const std::exception&) {
            set_error(res, 500, "internal error");
        }
    });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"status\":\"ok\"}", "application/json");
    });

    server.Post("/retrieve", [&](const httplib::Request& req, httplib::Response& res) {
        ordered_json body;
        try {
            body = ordered_json::parse(req.body);
        } catch (const nlohmann::json::exception&) {
            set_error(res, 400, "request body is not valid JSON");
            return;
        }
        if (!body.is_object() || !body.contains("question") || !body["question"].is_string()) {
            set_error(res, 400, "expected {\"question\": \"...\"}");
            return;
        }
        rag::RetrievalConfig config;
        try {
            config = apply_overrides(deps.config.retrieval, body);
        } catch (const Error& e) {
            set_error(res, 400, e.what());
            return;
        } catch (const nlohmann::json::exception& e) {
            set_error(res, 400, std::string("bad override value: ") + e.what());
            return;
        }
        const auto seeds = rag::retrieve_seeds(body["question"].get<std::string>(), *deps.index,
                                               *deps.model, config);
        const auto context = rag::expand_subgraph(seeds, *deps.snapshot, config);
        res.set_content(context_to_json(context), "application/json");
    });

    server.Post("/ask", [&](const httplib::Request& req, httplib::Response& res) {
        ordered_json body;
        try {
            body = ordered_json::parse(req.body);
        } catch (const nlohmann::json::exception&) {
            set_error(res, 400, "request body is not valid JSON");
            return;
        }
        if (!body.is_object() || !body.contains("question") || !body["question"].is_string()) {
            set_error(res, 400, "expected {\"question\": \"...\"}");
            return;
        }
        try {
            const auto answer = rag::answer_question(
                body["question"].get<std::string>(), *deps.snapshot, *deps.index, *deps.model,
                deps.config.retrieval, deps.config.endpoint, rag::QATask::YesNoMaybe, {},
                templates);
            res.set_content(answer_to_json(answer, prompt_hash), "application/json");
        } catch (const Error& e) {
            if (e.upstream()) set_error(res, 503, "language model endpoint unavailable");
            else throw;
        }
    });

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::thread watcher([&server] {
        while (!g_shutdown.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
    });

    std::cerr << "serving on " << deps.config.service_bind << ":" << deps.config.service_port
              << '\n';
    const bool ok = server.listen(deps.config.service_bind, deps.config.service_port);
    const bool requested = g_shutdown.load();
    g_shutdown.store(true);
    watcher.join();
    if (!ok && !requested) {
        std::cerr << "failed to serve on " << deps.config.service_bind << ":"
                  << deps.config.service_port << '\n';
        return 1;
    }
    std::cerr << "shutdown complete\n";
    return 0;
}

} // namespace biokg::service
