#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scholarrec {

struct Article;

enum class FieldName {
    title,
    abstract_text,
    author,
    tag,
    keyword,
    mesh_term,
    textrank_keyword,
    cf,
};

inline constexpr std::array<FieldName, 8> kAllFields = {
    FieldName::title,     FieldName::abstract_text, FieldName::author,
    FieldName::tag,       FieldName::keyword,       FieldName::mesh_term,
    FieldName::textrank_keyword, FieldName::cf,
};

/// The seven metadata fields, i.e. everything except the synthetic cf field.
inline constexpr std::array<FieldName, 7> kContentFields = {
    FieldName::title, FieldName::abstract_text, FieldName::author,          FieldName::tag,
    FieldName::keyword, FieldName::mesh_term, FieldName::textrank_keyword,
};

enum class Analyzer { stemmed_text, plain_text, atomic };

struct FieldSpec {
    FieldName name;
    Analyzer analyzer;

    bool operator==(const FieldSpec&) const = default;
};

/// Fixed field-to-analyzer mapping: title is stemmed, abstract is only
/// lowercased, everything else is indexed as whole values.
FieldSpec field_spec(FieldName name) noexcept;

std::string_view field_name(FieldName name) noexcept;
std::optional<FieldName> parse_field_name(std::string_view name) noexcept;

/// Parses a comma separated list such as "title,abstract,author".
/// "all" expands to every content field; "-author" style entries remove.
std::vector<FieldName> parse_field_list(std::string_view list);
std::string format_field_list(std::span<const FieldName> fields);

/// Raw values an article contributes to a field (empty when unpopulated).
std::vector<std::string> field_values(const Article& article, FieldName field);

std::vector<std::string> tokenize(std::string_view text);

/// The classic 33-word English stop set of Lucene-era search libraries.
/// The same list ships as resources/stopwords_en.txt.
std::span<const std::string_view> default_stopwords() noexcept;
bool is_stopword(std::string_view term) noexcept;
std::vector<std::string> remove_stopwords(std::vector<std::string> terms);

std::string porter_stem(std::string_view term);

std::vector<std::string> analyze(FieldSpec field, std::span<const std::string> raw_values);

struct TextRankOptions {
    std::size_t window = 2;
    double damping = 0.85;
    double tolerance = 1e-6;
    int max_iterations = 100;
    std::size_t top_n = 10;
};

struct ScoredWord {
    std::string word;
    double score;
};

/// Full ranking (all graph nodes), descending score, ties lexicographic.
std::vector<ScoredWord> textrank_scores(std::string_view abstract_text,
                                        const TextRankOptions& options = {});

std::vector<std::string> textrank_keywords(std::string_view abstract_text,
                                           const TextRankOptions& options = {});

/// Fills textrank_keywords for every article that has an abstract; clears it
/// for articles without one.
void add_textrank_keywords(std::span<Article> articles, const TextRankOptions& options = {});

}  // namespace scholarrec
