// Standalone scripted chat-completion endpoint for local runs and demos.
#include "biokg/errors.hpp"
#include "biokg/mock_llm.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <thread>

int main(int argc, char** argv) {
    CLI::App app{"scripted mock chat-completion endpoint"};
    std::string rules_path;
    std::string default_reply = "maybe";
    app.add_option("--rules", rules_path, "rules file (substring && ... => reply)");
    app.add_option("--default", default_reply, "reply when no rule matches");

    CLI11_PARSE(app, argc, argv);

    try {
        biokg::rag::MockLlmServer server;
        if (!rules_path.empty()) server.set_rules(biokg::rag::load_mock_rules(rules_path));
        server.set_default_reply(default_reply);
        const int port = server.start();
        std::cout << "mock llm listening on http://127.0.0.1:" << port << '\n' << std::flush;
        while (true) std::this_thread::sleep_for(std::chrono::seconds(1));
    } catch (const biokg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
