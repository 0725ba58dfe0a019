#include "biokg/mock_llm.hpp"

#include "biokg/errors.hpp"
#include "biokg/util.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <sstream>
#include <thread>

namespace biokg::rag {

std::vector<MockRule> parse_mock_rules(const std::string& text) {
    std::vector<MockRule> rules;
    std::istringstream in(text);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto arrow = stripped.find("=>");
        if (arrow == std::string::npos)
            throw Error(ErrorKind::ParseError,
                        "mock rules line " + std::to_string(line_number) + ": expected '=>'");
        const std::string pattern = trim(stripped.substr(0, arrow));
        MockRule rule;
        rule.reply = trim(stripped.substr(arrow + 2));
        if (pattern != "*") {
            std::size_t start = 0;
            while (true) {
                const auto sep = pattern.find("&&", start);
                if (sep == std::string::npos) {
                    rule.needles.push_back(trim(pattern.substr(start)));
                    break;
                }
                rule.needles.push_back(trim(pattern.substr(start, sep - start)));
                start = sep + 2;
            }
        }
        rules.push_back(std::move(rule));
    }
    return rules;
}

std::vector<MockRule> load_mock_rules(const std::string& path) {
    return parse_mock_rules(read_text_file(path));
}

MockLlmServer::MockLlmServer() : server_(std::make_unique<httplib::Server>()) {}

MockLlmServer::~MockLlmServer() { stop(); }

void MockLlmServer::add_rule(MockRule rule) {
    std::lock_guard lock(mutex_);
    rules_.push_back(std::move(rule));
}

void MockLlmServer::set_rules(std::vector<MockRule> rules) {
    std::lock_guard lock(mutex_);
    rules_ = std::move(rules);
}

void MockLlmServer::set_default_reply(std::string reply) {
    std::lock_guard lock(mutex_);
    default_reply_ = std::move(reply);
}

void MockLlmServer::set_fail_first(int n, int status) {
    std::lock_guard lock(mutex_);
    fail_remaining_ = n;
    fail_status_ = status;
}

std::string MockLlmServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
}

std::string MockLlmServer::last_prompt() const {
    std::lock_guard lock(mutex_);
    return last_prompt_;
}

int MockLlmServer::start() {
    server_->Post("/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
        request_count_.fetch_add(1);
        {
            std::lock_guard lock(mutex_);
            if (fail_remaining_ > 0) {
                --fail_remaining_;
                res.status = fail_status_;
                res.set_content("{\"error\":\"scripted failure\"}", "application/json");
                return;
            }
        }
        nlohmann::json body;
        try {
            body = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception&) {
            res.status = 400;
            res.set_content("{\"error\":\"invalid json\"}", "application/json");
            return;
        }
        std::string prompt;
        if (body.contains("messages") && body["messages"].is_array()) {
            for (const auto& message : body["messages"]) {
                if (message.contains("content") && message["content"].is_string()) {
                    if (!prompt.empty()) prompt += '\n';
                    prompt += message["content"].get<std::string>();
                }
            }
        }
        std::string reply;
        {
            std::lock_guard lock(mutex_);
            last_prompt_ = prompt;
            reply = default_reply_;
            for (const auto& rule : rules_) {
                bool all = true;
                for (const auto& needle : rule.needles) {
                    if (prompt.find(needle) == std::string::npos) {
                        all = false;
                        break;
                    }
                }
                if (all) {
                    reply = rule.reply;
                    break;
                }
            }
        }
        nlohmann::json response = {
            {"id", "mock-" + std::to_string(request_count_.load())},
            {"object", "chat.completion"},
            {"model", body.value("model", "mock")},
            {"choices",
             {{{"index", 0},
               {"message", {{"role", "assistant"}, {"content", reply}}},
               {"finish_reason", "stop"}}}},
        };
        res.set_content(response.dump(), "application/json");
    });

    port_ = server_->bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw Error(ErrorKind::Io, "mock server failed to bind");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void MockLlmServer::stop() {
    if (server_ && server_->is_running()) server_->stop();
    if (thread_.joinable()) thread_.join();
}

} // namespace biokg::rag
