#include "biokg/kg_build.hpp"

#include "biokg/util.hpp"

#include <algorithm>
#include <sstream>

namespace biokg {

const char* label_provenance_name(LabelProvenance provenance) {
    return provenance == LabelProvenance::SpecificRela ? "specific_rela" : "fallback_rel";
}

std::string build_stats_to_kv(const BuildStats& s) {
    std::ostringstream out;
    out << "concepts_kept=" << s.concepts_kept << '\n'
        << "definitions_merged=" << s.definitions_merged << '\n'
        << "multi_definition_concepts=" << s.multi_definition_concepts << '\n'
        << "edges_kept=" << s.edges_kept << '\n'
        << "edges_before_dedupe=" << s.edges_before_dedupe << '\n'
        << "duplicate_edges_collapsed=" << s.duplicate_edges_collapsed << '\n'
        << "self_relations_dropped=" << s.self_relations_dropped << '\n'
        << "non_english_endpoint_dropped=" << s.non_english_endpoint_dropped << '\n'
        << "fallback_labels_used=" << s.fallback_labels_used << '\n'
        << "distinct_labels=" << s.distinct_labels << '\n';
    return out.str();
}

std::string build_stats_to_table(const BuildStats& s) {
    std::ostringstream out;
    out << "graph build statistics\n"
        << "  concepts kept                 " << s.concepts_kept << '\n'
        << "  definitions merged            " << s.definitions_merged << '\n'
        << "  multi-definition concepts     " << s.multi_definition_concepts << '\n'
        << "  edges kept                    " << s.edges_kept << '\n'
        << "  edges before dedupe           " << s.edges_before_dedupe << '\n'
        << "  duplicate edges collapsed     " << s.duplicate_edges_collapsed << '\n'
        << "  self relations dropped        " << s.self_relations_dropped << '\n'
        << "  non-English endpoints dropped " << s.non_english_endpoint_dropped << '\n'
        << "  fallback labels used          " << s.fallback_labels_used << '\n'
        << "  distinct labels               " << s.distinct_labels << '\n';
    return out.str();
}

} // namespace biokg

namespace biokg::kg {

bool suppressed(const std::string& suppress_flag) {
    return suppress_flag == "O" || suppress_flag == "E" || suppress_flag == "Y";
}

void NameCollector::add(const rrf::ConsoRow& row) {
    if (row.lat != "ENG") return;
    if (options_.drop_suppressed && suppressed(row.suppress)) return;
    const std::string name = trim(row.name);
    if (name.empty()) return;

    State& state = by_cui_[row.cui];
    auto it = std::find(state.names.begin(), state.names.end(), name);
    int index;
    if (it == state.names.end()) {
        index = static_cast<int>(state.names.size());
        state.names.push_back(name);
    } else {
        index = static_cast<int>(it - state.names.begin());
    }
    if (state.preferred_index < 0 && row.term_status == "P" && row.is_pref == "Y")
        state.preferred_index = index;
}

std::map<std::string, NameEntry> NameCollector::finish() const {
    std::map<std::string, NameEntry> out;
    for (const auto& [cui, state] : by_cui_) {
        NameEntry entry;
        const int pref = state.preferred_index >= 0 ? state.preferred_index : 0;
        entry.preferred_name = state.names[static_cast<std::size_t>(pref)];
        for (int i = 0; i < static_cast<int>(state.names.size()); ++i) {
            if (i != pref) entry.synonyms.push_back(state.names[static_cast<std::size_t>(i)]);
        }
        out.emplace(cui, std::move(entry));
    }
    return out;
}

std::unordered_set<std::string> NameCollector::english_cuis() const {
    std::unordered_set<std::string> out;
    out.reserve(by_cui_.size());
    for (const auto& [cui, _] : by_cui_) out.insert(cui);
    return out;
}

void DefinitionCollector::add(const rrf::DefRow& row) {
    if (!english_.count(row.cui)) return;
    if (options_.drop_suppressed && suppressed(row.suppress)) return;
    const std::string definition = trim(row.definition);
    if (definition.empty()) return;
    auto& defs = by_cui_[row.cui];
    if (std::find(defs.begin(), defs.end(), definition) == defs.end())
        defs.push_back(definition);
}

std::map<std::string, DefinitionEntry> DefinitionCollector::finish() const {
    std::map<std::string, DefinitionEntry> out;
    for (const auto& [cui, defs] : by_cui_) {
        DefinitionEntry entry;
        entry.joined = join(defs, kDefinitionSeparator);
        entry.count = static_cast<uint32_t>(defs.size());
        out.emplace(cui, std::move(entry));
    }
    return out;
}

void SemanticTypeCollector::add(const rrf::StyRow& row) {
    if (!english_.count(row.cui)) return;
    auto& types = by_cui_[row.cui];
    if (std::find(types.begin(), types.end(), row.type_name) == types.end())
        types.push_back(row.type_name);
}

std::map<std::string, std::vector<std::string>> SemanticTypeCollector::finish() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [cui, types] : by_cui_) out.emplace(cui, types);
    return out;
}

void EdgeCollector::add(const rrf::RelRow& row) {
    if (row.cui1 == row.cui2) {
        ++stats_.self_relations_dropped;
        return;
    }
    if (!english_.count(row.cui1) || !english_.count(row.cui2)) {
        ++stats_.non_english_endpoint_dropped;
        return;
    }
    ++stats_.edges_before_dedupe;
    RelationEdge edge;
    edge.head_cui = row.cui1;
    edge.tail_cui = row.cui2;
    if (row.rela.has_value()) {
        edge.label = *row.rela;
        edge.label_provenance = LabelProvenance::SpecificRela;
    } else {
        edge.label = row.rel;
        edge.label_provenance = LabelProvenance::FallbackRel;
        ++stats_.fallback_labels_used;
    }
    edge.source = row.source;

    std::string key = edge.head_cui + '\x1f' + edge.tail_cui + '\x1f' + edge.label;
    if (!seen_keys_.insert(std::move(key)).second) {
        ++stats_.duplicate_edges_collapsed;
        return;
    }
    edges_.push_back(std::move(edge));
    ++stats_.edges_kept;
}

GraphSnapshot assemble_graph(const std::map<std::string, NameEntry>& names,
                             const std::map<std::string, DefinitionEntry>& definitions,
                             const std::map<std::string, std::vector<std::string>>& types,
                             const std::vector<RelationEdge>& edges, BuildStats edge_stats) {
    std::vector<ConceptRecord> concepts;
    concepts.reserve(names.size());
    BuildStats stats = edge_stats;
    for (const auto& [cui, entry] : names) { // std::map: ascending CUI
        ConceptRecord record;
        record.cui = cui;
        record.preferred_name = entry.preferred_name;
        record.synonyms = entry.synonyms;
        if (auto it = types.find(cui); it != types.end()) record.semantic_types = it->second;
        if (auto it = definitions.find(cui); it != definitions.end()) {
            record.definitions = it->second.joined;
            record.definition_count = it->second.count;
            stats.definitions_merged += it->second.count;
            if (it->second.count > 1) ++stats.multi_definition_concepts;
        }
        concepts.push_back(std::move(record));
    }
    stats.concepts_kept = concepts.size();

    std::vector<RelationEdge> sorted_edges = edges;
    std::sort(sorted_edges.begin(), sorted_edges.end(),
              [](const RelationEdge& a, const RelationEdge& b) {
                  if (a.head_cui != b.head_cui) return a.head_cui < b.head_cui;
                  if (a.label != b.label) return a.label < b.label;
                  return a.tail_cui < b.tail_cui;
              });

    return GraphSnapshot(std::move(concepts), std::move(sorted_edges), stats);
}

BuildResult build_graph(const BuildInputs& inputs) {
    BuildResult result;

    NameCollector names(inputs.options);
    result.conso_report = rrf::stream_table<rrf::ConsoRow>(
        inputs.mrconso_path, inputs.conso_schema, [&](const rrf::ConsoRow& row) { names.add(row); });
    const auto english = names.english_cuis();

    DefinitionCollector defs(english, inputs.options);
    if (!inputs.mrdef_path.empty()) {
        result.def_report = rrf::stream_table<rrf::DefRow>(
            inputs.mrdef_path, inputs.def_schema, [&](const rrf::DefRow& row) { defs.add(row); });
    }

    SemanticTypeCollector types(english);
    if (!inputs.mrsty_path.empty()) {
        result.sty_report = rrf::stream_table<rrf::StyRow>(
            inputs.mrsty_path, inputs.sty_schema, [&](const rrf::StyRow& row) { types.add(row); });
    }

    EdgeCollector edges(english);
    if (!inputs.mrrel_path.empty()) {
        result.rel_report = rrf::stream_table<rrf::RelRow>(
            inputs.mrrel_path, inputs.rel_schema, [&](const rrf::RelRow& row) { edges.add(row); });
    }

    result.snapshot = assemble_graph(names.finish(), defs.finish(), types.finish(),
                                     edges.edges(), edges.partial_stats());
    return result;
}

} // namespace biokg::kg
