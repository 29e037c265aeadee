#include "scholarrec/contentrec.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "scholarrec/corpus.hpp"
#include "scholarrec/error.hpp"

namespace scholarrec {

using nlohmann::json;

std::string_view variant_name(ContentVariant variant) noexcept
{
    switch (variant) {
        case ContentVariant::tfidf: return "tfidf";
        case ContentVariant::nq: return "nq";
        case ContentVariant::prf: return "prf";
        case ContentVariant::bm25c: return "bm25c";
    }
    return "?";
}

ContentVariant parse_variant(std::string_view name)
{
    for (auto v : {ContentVariant::tfidf, ContentVariant::nq, ContentVariant::prf,
                   ContentVariant::bm25c}) {
        if (variant_name(v) == name) return v;
    }
    fail(ErrorCategory::config, "unknown content variant '" + std::string(name) + "'");
}

void ContentConfig::validate() const
{
    if (fields_used.empty()) fail(ErrorCategory::config, "fields_used must not be empty");
    if (std::find(fields_used.begin(), fields_used.end(), FieldName::cf) != fields_used.end()) {
        fail(ErrorCategory::config, "the cf field cannot be selected directly; use the hybrid");
    }
    if (nq_alpha < 0.0) fail(ErrorCategory::config, "nq_alpha must be >= 0");
    if (prf_feedback_docs < 1) fail(ErrorCategory::config, "prf_feedback_docs must be >= 1");
    if (prf_terms_per_field < 0) fail(ErrorCategory::config, "prf_terms_per_field must be >= 0");
    if (prf_term_weight < 0.0) fail(ErrorCategory::config, "prf_term_weight must be >= 0");
    if (bm25.k1 < 0.0 || bm25.b < 0.0 || bm25.b > 1.0) {
        fail(ErrorCategory::config, "bm25 requires k1 >= 0 and 0 <= b <= 1");
    }
}

std::string ContentConfig::to_json() const
{
    json j;
    j["variant"] = variant_name(variant);
    j["fields"] = format_field_list(fields_used);
    j["nq_alpha"] = nq_alpha;
    j["prf_feedback_docs"] = prf_feedback_docs;
    j["prf_terms_per_field"] = prf_terms_per_field;
    j["prf_term_weight"] = prf_term_weight;
    j["prf_on_nq"] = prf_on_nq;
    j["k1"] = bm25.k1;
    j["b"] = bm25.b;
    return j.dump();
}

ContentConfig ContentConfig::from_json(std::string_view text)
{
    ContentConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCategory::config, std::string("content config: ") + e.what());
    }
    try {
        if (j.contains("variant")) c.variant = parse_variant(j["variant"].get<std::string>());
        if (j.contains("fields")) {
            const auto& f = j["fields"];
            if (f.is_array()) {
                std::string joined;
                for (const auto& name : f) joined += name.get<std::string>() + ",";
                c.fields_used = parse_field_list(joined);
            } else {
                c.fields_used = parse_field_list(f.get<std::string>());
            }
        }
        c.nq_alpha = j.value("nq_alpha", c.nq_alpha);
        c.prf_feedback_docs = j.value("prf_feedback_docs", c.prf_feedback_docs);
        c.prf_terms_per_field = j.value("prf_terms_per_field", c.prf_terms_per_field);
        c.prf_term_weight = j.value("prf_term_weight", c.prf_term_weight);
        c.prf_on_nq = j.value("prf_on_nq", c.prf_on_nq);
        c.bm25.k1 = j.value("k1", c.bm25.k1);
        c.bm25.b = j.value("b", c.bm25.b);
    } catch (const json::exception& e) {
        fail(ErrorCategory::config, std::string("content config: ") + e.what());
    }
    c.validate();
    return c;
}

FieldedQuery build_query(const Article& article, std::span<const FieldName> fields_used)
{
    FieldedQuery query;
    for (auto field : fields_used) {
        auto values = field_values(article, field);
        for (auto& term : analyze(field_spec(field), values)) {
            query.add(field, std::move(term), 1.0);
        }
    }
    query.excluded_doc = article.id;
    return query;
}

RankedList rank_nq(const FieldedIndex& index, const FieldedQuery& query, double alpha, std::size_t k)
{
    if (k < 1) fail(ErrorCategory::config, "search depth k must be >= 1");
    auto candidates = score_candidates(index, query, Scorer::tfidf);
    const auto total_fields = static_cast<double>(query.populated_field_count());
    for (auto& c : candidates) {
        c.score *= std::pow(static_cast<double>(c.matched_fields) / total_fields, alpha);
    }
    return top_k(index, candidates, k);
}

FieldedQuery expand_query(const FieldedIndex& index, const FieldedQuery& query,
                          const RankedList& feedback, const ContentConfig& config)
{
    FieldedQuery expanded = query;
    if (config.prf_terms_per_field <= 0 || feedback.empty()) return expanded;

    std::vector<DocNumber> docs;
    for (const auto& r : feedback) {
        if (auto d = index.doc_number(r.id)) docs.push_back(*d);
    }
    for (const auto& fq : query.fields()) {
        // Neighbor ids in the cf field are not language; never expand them.
        if (fq.field == FieldName::cf || fq.terms.empty() || !index.has_field(fq.field)) continue;
        const auto n = index.doc_count(fq.field);
        std::map<std::string, double> weight;
        for (auto d : docs) {
            for (const auto& tc : index.doc_terms(fq.field, d)) {
                weight[tc.term] +=
                    static_cast<double>(tc.tf) * tfidf_idf(n, index.doc_freq(fq.field, tc.term));
            }
        }
        std::vector<std::pair<std::string, double>> ranked;
        for (auto& [term, w] : weight) {
            if (!query.contains(fq.field, term)) ranked.emplace_back(term, w);
        }
        // map iteration is lexicographic, so stable_sort keeps ties by term
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        const auto take =
            std::min(ranked.size(), static_cast<std::size_t>(config.prf_terms_per_field));
        for (std::size_t i = 0; i < take; ++i) {
            expanded.add(fq.field, ranked[i].first, config.prf_term_weight);
        }
    }
    return expanded;
}

namespace {

RankedList base_ranking(const FieldedIndex& index, const FieldedQuery& query,
                        const ContentConfig& config, std::size_t k)
{
    return config.prf_on_nq ? rank_nq(index, query, config.nq_alpha, k)
                            : search(index, query, Scorer::tfidf, k);
}

}  // namespace

RankedList rank_query(const FieldedIndex& index, const FieldedQuery& query,
                      const ContentConfig& config, std::size_t k)
{
    if (k < 1) fail(ErrorCategory::config, "search depth k must be >= 1");
    if (query.empty()) return {};
    switch (config.variant) {
        case ContentVariant::tfidf: return search(index, query, Scorer::tfidf, k);
        case ContentVariant::nq: return rank_nq(index, query, config.nq_alpha, k);
        case ContentVariant::bm25c: return search(index, query, Scorer::bm25, k, config.bm25);
        case ContentVariant::prf: {
            auto feedback = base_ranking(index, query, config,
                                         static_cast<std::size_t>(config.prf_feedback_docs));
            if (feedback.empty()) return feedback;
            auto expanded = expand_query(index, query, feedback, config);
            return base_ranking(index, expanded, config, k);
        }
    }
    return {};
}

RankedList recommend(const FieldedIndex& index, const Article& article, const ContentConfig& config,
                     std::size_t k)
{
    return rank_query(index, build_query(article, config.fields_used), config, k);
}

RankedList recommend_tfidf(const FieldedIndex& index, const Article& article,
                           const ContentConfig& config, std::size_t k)
{
    auto c = config;
    c.variant = ContentVariant::tfidf;
    return recommend(index, article, c, k);
}

RankedList recommend_nq(const FieldedIndex& index, const Article& article,
                        const ContentConfig& config, std::size_t k)
{
    auto c = config;
    c.variant = ContentVariant::nq;
    return recommend(index, article, c, k);
}

RankedList recommend_prf(const FieldedIndex& index, const Article& article,
                         const ContentConfig& config, std::size_t k)
{
    auto c = config;
    c.variant = ContentVariant::prf;
    return recommend(index, article, c, k);
}

RankedList recommend_bm25c(const FieldedIndex& index, const Article& article,
                           const ContentConfig& config, std::size_t k)
{
    auto c = config;
    c.variant = ContentVariant::bm25c;
    return recommend(index, article, c, k);
}

}  // namespace scholarrec
