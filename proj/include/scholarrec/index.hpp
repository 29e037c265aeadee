#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scholarrec/textproc.hpp"

namespace scholarrec {

struct Article;

using DocNumber = std::uint32_t;

struct Posting {
    DocNumber doc;
    std::uint32_t tf;
};

struct TermCount {
    std::string term;
    std::uint32_t tf;

    bool operator==(const TermCount&) const = default;
};

struct TermWeight {
    std::string term;
    double weight;

    bool operator==(const TermWeight&) const = default;
};

struct FieldQuery {
    FieldName field;
    std::vector<TermWeight> terms;

    bool operator==(const FieldQuery&) const = default;
};

/// Per-field weighted terms. Repeated (field, term) pairs are merged by
/// summing their weights, so every term appears once per field.
class FieldedQuery {
  public:
    void add(FieldName field, std::string term, double weight = 1.0);

    bool empty() const noexcept;
    std::size_t term_count() const noexcept;
    std::size_t populated_field_count() const noexcept;

    const FieldQuery* find(FieldName field) const noexcept;
    bool contains(FieldName field, std::string_view term) const noexcept;
    std::span<const FieldQuery> fields() const noexcept { return fields_; }

    std::optional<std::string> excluded_doc;

    bool operator==(const FieldedQuery&) const = default;

  private:
    std::vector<FieldQuery> fields_;
};

struct ScoredDoc {
    std::string id;
    double score;

    bool operator==(const ScoredDoc&) const = default;
};

/// Descending score, ties by ascending id.
using RankedList = std::vector<ScoredDoc>;

bool ranked_before(const ScoredDoc& a, const ScoredDoc& b) noexcept;

enum class Scorer { tfidf, bm25 };

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
    bool operator==(const Bm25Params&) const = default;
};

/// Inverted index with one independent set of statistics per field. Doc
/// numbers follow ascending doc id, so number order is the tie-break order.
class FieldedIndex {
  public:
    static FieldedIndex build(std::span<const Article> articles, std::span<const FieldName> fields);

    /// Adds a field whose terms are given verbatim (no analysis).
    /// per_doc_terms is indexed by doc number.
    void add_raw_field(FieldName field, const std::vector<std::vector<std::string>>& per_doc_terms);

    std::size_t size() const noexcept { return doc_ids_.size(); }
    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    const std::string& doc_id(DocNumber doc) const { return doc_ids_.at(doc); }
    std::optional<DocNumber> doc_number(std::string_view id) const;

    std::vector<FieldName> fields() const;
    bool has_field(FieldName field) const noexcept { return fields_.count(field) != 0; }

    std::span<const Posting> postings(FieldName field, std::string_view term) const;
    std::uint32_t doc_freq(FieldName field, std::string_view term) const;
    std::uint32_t term_frequency(FieldName field, std::string_view term, DocNumber doc) const;
    std::uint32_t field_length(FieldName field, DocNumber doc) const;
    bool field_populated(FieldName field, DocNumber doc) const { return field_length(field, doc) > 0; }
    std::uint32_t doc_count(FieldName field) const;
    double avg_field_length(FieldName field) const;
    std::size_t vocabulary_size(FieldName field) const;

    /// Forward view of one document's field, sorted by term.
    std::span<const TermCount> doc_terms(FieldName field, DocNumber doc) const;

    std::string to_json() const;
    static FieldedIndex from_json(std::string_view text);
    void save(const std::filesystem::path& path) const;
    static FieldedIndex load(const std::filesystem::path& path);

    static constexpr int kFormatVersion = 1;

  private:
    struct FieldData {
        std::unordered_map<std::string, std::vector<Posting>> postings;
        std::vector<std::vector<TermCount>> forward;
        std::vector<std::uint32_t> lengths;
        std::uint32_t doc_count = 0;
        double avg_length = 0.0;
    };

    void index_field(FieldName field, std::vector<std::vector<TermCount>> forward);
    const FieldData* field_data(FieldName field) const noexcept;

    std::vector<std::string> doc_ids_;
    std::unordered_map<std::string, DocNumber> doc_numbers_;
    std::map<FieldName, FieldData> fields_;
};

/// Counts repeated terms; output sorted by term.
std::vector<TermCount> count_terms(std::span<const std::string> terms);

double tfidf_idf(std::uint32_t docs_in_field, std::uint32_t doc_freq);
double bm25_idf(std::uint32_t docs_in_field, std::uint32_t doc_freq);

double tfidf_score(const FieldedIndex& index, const FieldedQuery& query, std::string_view doc);
double bm25_score(const FieldedIndex& index, const FieldedQuery& query, std::string_view doc,
                  const Bm25Params& params = {});

struct Candidate {
    DocNumber doc;
    double score;
    std::uint32_t matched_fields;  // query fields with >= 1 matching term
};

/// Scores every document matching at least one query term (excluding the
/// query's excluded_doc) by accumulating over postings. Sorted by doc number.
std::vector<Candidate> score_candidates(const FieldedIndex& index, const FieldedQuery& query,
                                        Scorer scorer, const Bm25Params& params = {});

/// Drops non-positive scores and returns the best k under the ranking order.
RankedList top_k(const FieldedIndex& index, std::span<const Candidate> candidates, std::size_t k);

RankedList search(const FieldedIndex& index, const FieldedQuery& query, Scorer scorer, std::size_t k,
                  const Bm25Params& params = {});

}  // namespace scholarrec
