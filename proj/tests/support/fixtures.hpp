#pragma once

#include "biokg/kg_build.hpp"
#include "biokg/snapshot.hpp"
#include "biokg/util.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace biokg::testing {

// deterministic PRNG for fixture generation
class TestRng {
public:
    explicit TestRng(uint64_t seed) : state_(seed) {}

    uint64_t next() { return splitmix64(state_); }
    uint32_t below(uint32_t n) { return n == 0 ? 0 : static_cast<uint32_t>(next() % n); }
    double unit() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }
    bool chance(double p) { return unit() < p; }

private:
    uint64_t state_;
};

// Five concepts, four edges, including the pair behind the golden fragment
// "Autoimmune diseases cause of Autoimmune opsoclonus myoclonus."
GraphSnapshot make_toy_snapshot();

// Sorts concepts/edges into canonical snapshot order first.
GraphSnapshot make_snapshot(std::vector<ConceptRecord> concepts, std::vector<RelationEdge> edges,
                            BuildStats stats = {});

// Random graph for oracle-vs-implementation comparisons.
GraphSnapshot make_random_snapshot(TestRng& rng, int n_concepts, int n_edges, int n_labels);

struct SyntheticSpec {
    int concepts = 1000;
    int non_english_only = 50; // CUIs appearing only with non-ENG names
    int rel_rows = 10000;
    int def_cuis = 300;
    uint64_t seed = 1;
    double self_loop_rate = 0.02;
    double missing_rela_rate = 0.30;
    double duplicate_rel_rate = 0.10;
    double suppressed_rate = 0.05;
};

struct SyntheticPaths {
    std::string mrconso;
    std::string mrdef;
    std::string mrsty;
    std::string mrrel;
};

// Writes a four-table RRF fixture with mixed languages, suppressed rows,
// missing RELAs, self-loops, duplicate relations, and duplicate definitions.
SyntheticPaths write_synthetic_rrf(const std::string& dir, const SyntheticSpec& spec);

// Brute-force single-pass recount of the pipeline rules, written directly
// against the fixture files (independent of the kg_build reduction path).
BuildStats recount_stats(const SyntheticPaths& paths, bool drop_suppressed = false);

// Writes n_lines of well-formed MRREL text to path; returns bytes written.
uint64_t write_mrrel_lines(const std::string& path, uint64_t n_lines, uint64_t seed);

// RFC-4180 reader used to re-parse exported CSV files.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string temp_dir(const std::string& tag);

} // namespace biokg::testing
