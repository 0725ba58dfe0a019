#pragma once

#include "biokg/config.hpp"
#include "biokg/embed.hpp"
#include "biokg/graphrag.hpp"
#include "biokg/snapshot.hpp"

#include <string>

namespace biokg::service {

struct ServiceDeps {
    const GraphSnapshot* snapshot = nullptr;
    const embed::VectorIndex* index = nullptr;
    const embed::EmbeddingModel* model = nullptr;
    AppConfig config;
};

std::string context_to_json(const rag::SubgraphContext& context);
std::string answer_to_json(const rag::GroundedAnswer& answer, const std::string& prompt_hash);

// Serves GET /health, POST /retrieve, POST /ask until a termination signal
// or stop-file trigger. Returns 0 on clean shutdown.
int run_service(const ServiceDeps& deps);

} // namespace biokg::service
