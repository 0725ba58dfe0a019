#include "biokg/graphrag.hpp"

#include "biokg/errors.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace biokg::rag {

namespace {

struct ParsedUrl {
    std::string origin;      // scheme://host[:port]
    std::string path_prefix; // no trailing slash
};

ParsedUrl split_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorKind::ConfigError, "base_url must include a scheme: " + base_url);
    const auto path_start = base_url.find('/', scheme_end + 3);
    ParsedUrl out;
    if (path_start == std::string::npos) {
        out.origin = base_url;
    } else {
        out.origin = base_url.substr(0, path_start);
        out.path_prefix = base_url.substr(path_start);
    }
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
    return out;
}

bool transient(const httplib::Result& result) {
    if (!result) return true; // connection/read failures
    return result->status >= 500;
}

} // namespace

std::string ask_llm(const PromptPackage& prompt, const LlmEndpointConfig& endpoint) {
    if (endpoint.timeout_seconds <= 0)
        throw Error(ErrorKind::ConfigError, "endpoint timeout must be > 0");
    if (endpoint.max_retries < 0)
        throw Error(ErrorKind::ConfigError, "max_retries must be >= 0");

    const ParsedUrl url = split_base_url(endpoint.base_url);
    httplib::Client client(url.origin);
    const auto timeout_ms =
        std::chrono::milliseconds(static_cast<long long>(endpoint.timeout_seconds * 1000.0));
    client.set_connection_timeout(timeout_ms);
    client.set_read_timeout(timeout_ms);
    client.set_write_timeout(timeout_ms);

    httplib::Headers headers;
    if (!endpoint.api_key_env.empty()) {
        if (const char* key = std::getenv(endpoint.api_key_env.c_str()))
            headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    nlohmann::json body = {
        {"model", endpoint.model_name},
        {"messages",
         {{{"role", "system"}, {"content", prompt.system_text}},
          {{"role", "user"}, {"content", prompt.user_text}}}},
        {"temperature", endpoint.temperature},
    };
    const std::string payload = body.dump();
    const std::string path = url.path_prefix + "/chat/completions";

    std::string failure = "endpoint unreachable";
    ErrorKind failure_kind = ErrorKind::EndpointFailure;
    for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto backoff = std::chrono::milliseconds(100LL << std::min(attempt - 1, 5));
            std::this_thread::sleep_for(backoff);
        }
        httplib::Result result = client.Post(path, headers, payload, "application/json");
        if (!result) {
            const bool timed_out = result.error() == httplib::Error::ConnectionTimeout ||
                                   result.error() == httplib::Error::Read;
            failure_kind = timed_out ? ErrorKind::Timeout : ErrorKind::EndpointFailure;
            failure = std::string("request failed: ") + httplib::to_string(result.error());
            continue;
        }
        if (result->status >= 200 && result->status < 300) {
            nlohmann::json response;
            try {
                response = nlohmann::json::parse(result->body);
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorKind::MalformedResponse,
                            std::string("response is not valid JSON: ") + e.what());
            }
            if (!response.contains("choices") || !response["choices"].is_array() ||
                response["choices"].empty())
                throw Error(ErrorKind::MalformedResponse, "response has no choices");
            const auto& first = response["choices"][0];
            if (!first.contains("message") || !first["message"].contains("content") ||
                !first["message"]["content"].is_string())
                throw Error(ErrorKind::MalformedResponse, "choice has no message content");
            return first["message"]["content"].get<std::string>();
        }
        if (!transient(result))
            throw Error(ErrorKind::HttpStatus,
                        "endpoint returned HTTP " + std::to_string(result->status));
        failure_kind = ErrorKind::HttpStatus;
        failure = "endpoint returned HTTP " + std::to_string(result->status);
    }
    throw Error(failure_kind, failure + " (after " + std::to_string(endpoint.max_retries + 1) +
                                  " attempts)");
}

} // namespace biokg::rag
