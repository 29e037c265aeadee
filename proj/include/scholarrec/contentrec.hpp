#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scholarrec/index.hpp"
#include "scholarrec/textproc.hpp"

namespace scholarrec {

struct Article;

enum class ContentVariant { tfidf, nq, prf, bm25c };

std::string_view variant_name(ContentVariant variant) noexcept;
ContentVariant parse_variant(std::string_view name);

struct ContentConfig {
    ContentVariant variant = ContentVariant::prf;
    std::vector<FieldName> fields_used{kContentFields.begin(), kContentFields.end()};
    double nq_alpha = 1.0;
    int prf_feedback_docs = 5;
    int prf_terms_per_field = 10;
    double prf_term_weight = 0.5;
    // PRF draws its feedback set from the NQ-discounted ranking; false uses
    // plain TFIDF for both the feedback pass and the final pass.
    bool prf_on_nq = true;
    Bm25Params bm25;

    bool operator==(const ContentConfig&) const = default;

    /// Throws config errors for empty fields_used or out-of-range knobs.
    void validate() const;
    std::string to_json() const;
    static ContentConfig from_json(std::string_view text);
};

/// Empty result when the article has nothing in fields_used.
FieldedQuery build_query(const Article& article, std::span<const FieldName> fields_used);

RankedList recommend_tfidf(const FieldedIndex& index, const Article& article,
                           const ContentConfig& config, std::size_t k);
RankedList recommend_nq(const FieldedIndex& index, const Article& article,
                        const ContentConfig& config, std::size_t k);
RankedList recommend_prf(const FieldedIndex& index, const Article& article,
                         const ContentConfig& config, std::size_t k);
RankedList recommend_bm25c(const FieldedIndex& index, const Article& article,
                           const ContentConfig& config, std::size_t k);

/// Variant dispatch for an already-built query; the hybrid reuses this with
/// its augmented query.
RankedList rank_query(const FieldedIndex& index, const FieldedQuery& query,
                      const ContentConfig& config, std::size_t k);

/// Query-level pieces, exposed for the hybrid and for tests.
RankedList rank_nq(const FieldedIndex& index, const FieldedQuery& query, double alpha,
                   std::size_t k);
FieldedQuery expand_query(const FieldedIndex& index, const FieldedQuery& query,
                          const RankedList& feedback, const ContentConfig& config);

RankedList recommend(const FieldedIndex& index, const Article& article, const ContentConfig& config,
                     std::size_t k);

}  // namespace scholarrec
