#include "scholarrec/hybrid.hpp"

#include "json.hpp"
#include "scholarrec/corpus.hpp"
#include "scholarrec/error.hpp"

namespace scholarrec {

using nlohmann::json;

std::string_view weighting_name(NeighborWeighting weighting) noexcept
{
    return weighting == NeighborWeighting::similarity ? "similarity" : "unweighted";
}

NeighborWeighting parse_weighting(std::string_view name)
{
    if (name == "similarity") return NeighborWeighting::similarity;
    if (name == "unweighted") return NeighborWeighting::unweighted;
    fail(ErrorCategory::config, "unknown neighbor weighting '" + std::string(name) + "'");
}

void HybridConfig::validate() const
{
    base.validate();
    if (base.variant == ContentVariant::bm25c && neighbor_weighting != NeighborWeighting::unweighted) {
        fail(ErrorCategory::config, "the bm25c hybrid requires unweighted neighbor terms");
    }
}

std::string HybridConfig::to_json() const
{
    json j;
    j["base"] = json::parse(base.to_json());
    j["neighbor_weighting"] = weighting_name(neighbor_weighting);
    j["include_self_id"] = include_self_id;
    return j.dump();
}

HybridConfig HybridConfig::from_json(std::string_view text)
{
    HybridConfig c;
    try {
        auto j = json::parse(text);
        if (j.contains("base")) c.base = ContentConfig::from_json(j["base"].dump());
        c = [&] {
            auto d = hybrid_defaults(c.base);
            if (j.contains("neighbor_weighting")) {
                d.neighbor_weighting = parse_weighting(j["neighbor_weighting"].get<std::string>());
            }
            d.include_self_id = j.value("include_self_id", d.include_self_id);
            return d;
        }();
    } catch (const json::exception& e) {
        fail(ErrorCategory::config, std::string("hybrid config: ") + e.what());
    }
    c.validate();
    return c;
}

HybridConfig hybrid_defaults(const ContentConfig& base)
{
    HybridConfig c;
    c.base = base;
    c.neighbor_weighting = base.variant == ContentVariant::bm25c ? NeighborWeighting::unweighted
                                                                 : NeighborWeighting::similarity;
    return c;
}

FieldedIndex augment_index(const FieldedIndex& index, const NeighborMap& neighbors)
{
    if (index.has_field(FieldName::cf)) {
        fail(ErrorCategory::data, "index already carries a cf field");
    }
    std::vector<std::vector<std::string>> per_doc(index.size());
    for (DocNumber d = 0; d < index.size(); ++d) {
        auto it = neighbors.find(index.doc_id(d));
        if (it == neighbors.end()) continue;
        for (const auto& n : it->second) {
            if (n.id != it->first) per_doc[d].push_back(n.id);
        }
    }
    FieldedIndex augmented = index;
    augmented.add_raw_field(FieldName::cf, per_doc);
    return augmented;
}

FieldedQuery build_hybrid_query(const Article& article, const NeighborMap& neighbors,
                                const HybridConfig& config)
{
    auto query = build_query(article, config.base.fields_used);
    if (config.include_self_id) query.add(FieldName::cf, article.id, 1.0);
    if (auto it = neighbors.find(article.id); it != neighbors.end()) {
        for (const auto& n : it->second) {
            const double weight =
                config.neighbor_weighting == NeighborWeighting::similarity ? n.score : 1.0;
            query.add(FieldName::cf, n.id, weight);
        }
    }
    return query;
}

namespace {

FieldedQuery prune_unknown_cf_terms(const FieldedIndex& index, const FieldedQuery& query)
{
    FieldedQuery pruned;
    pruned.excluded_doc = query.excluded_doc;
    for (const auto& fq : query.fields()) {
        for (const auto& tw : fq.terms) {
            if (fq.field == FieldName::cf && index.doc_freq(FieldName::cf, tw.term) == 0) continue;
            pruned.add(fq.field, tw.term, tw.weight);
        }
    }
    return pruned;
}

}  // namespace

RankedList recommend_hybrid(const FieldedIndex& augmented, const Article& article,
                            const NeighborMap& neighbors, const HybridConfig& config, std::size_t k)
{
    config.validate();
    if (!augmented.has_field(FieldName::cf)) {
        fail(ErrorCategory::data, "hybrid ranking needs an index produced by augment_index");
    }
    auto query = prune_unknown_cf_terms(augmented, build_hybrid_query(article, neighbors, config));
    return rank_query(augmented, query, config.base, k);
}

}  // namespace scholarrec
