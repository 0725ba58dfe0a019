#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace biokg::rag {

// One scripted reply: fires when every needle is a substring of the request
// prompt (system and user content joined by newline). No needles = match-all.
struct MockRule {
    std::vector<std::string> needles;
    std::string reply;
};

// Rules file, one rule per line, first match wins:
//   # comment
//   ibudilast && multiple sclerosis => Yes.
//   * => No.
std::vector<MockRule> parse_mock_rules(const std::string& text);
std::vector<MockRule> load_mock_rules(const std::string& path);

// Local chat-completion test double. Serves POST /chat/completions on
// 127.0.0.1 with the same wire format as a real endpoint.
class MockLlmServer {
public:
    MockLlmServer();
    ~MockLlmServer();

    MockLlmServer(const MockLlmServer&) = delete;
    MockLlmServer& operator=(const MockLlmServer&) = delete;

    void add_rule(MockRule rule);
    void set_rules(std::vector<MockRule> rules);
    void set_default_reply(std::string reply);
    // next n requests fail with the given status before normal replies resume
    void set_fail_first(int n, int status = 500);

    // binds an ephemeral port and serves in a background thread
    int start();
    void stop();

    int port() const { return port_; }
    std::string base_url() const;
    int request_count() const { return request_count_.load(); }
    std::string last_prompt() const;

private:
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    mutable std::mutex mutex_;
    std::vector<MockRule> rules_;
    std::string default_reply_ = "maybe";
    int fail_remaining_ = 0;
    int fail_status_ = 500;
    std::atomic<int> request_count_{0};
    std::string last_prompt_;
};

} // namespace biokg::rag
