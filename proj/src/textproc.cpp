#include "scholarrec/textproc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "scholarrec/corpus.hpp"
#include "scholarrec/error.hpp"

namespace scholarrec {

namespace {

constexpr std::string_view kStopwords[] = {
    "a",    "an",   "and",   "are",  "as",   "at",    "be",   "but",  "by",
    "for",  "if",   "in",    "into", "is",   "it",    "no",   "not",  "of",
    "on",   "or",   "such",  "that", "the",  "their", "then", "there", "these",
    "they", "this", "to",    "was",  "will", "with",
};

struct FieldEntry {
    FieldName name;
    std::string_view text;
    Analyzer analyzer;
};

constexpr FieldEntry kFieldTable[] = {
    {FieldName::title, "title", Analyzer::stemmed_text},
    {FieldName::abstract_text, "abstract", Analyzer::plain_text},
    {FieldName::author, "author", Analyzer::atomic},
    {FieldName::tag, "tag", Analyzer::atomic},
    {FieldName::keyword, "keyword", Analyzer::atomic},
    {FieldName::mesh_term, "mesh_term", Analyzer::atomic},
    {FieldName::textrank_keyword, "textrank_keyword", Analyzer::atomic},
    {FieldName::cf, "cf", Analyzer::atomic},
};

// Bytes outside ASCII are kept inside tokens so UTF-8 words stay whole.
bool is_word_byte(unsigned char c)
{
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char lower(char c)
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string trim_lower(std::string_view value)
{
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    std::size_t first = 0;
    std::size_t last = value.size();
    while (first < last && is_space(value[first])) ++first;
    while (last > first && is_space(value[last - 1])) --last;
    std::string out(value.substr(first, last - first));
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

}  // namespace

FieldSpec field_spec(FieldName name) noexcept
{
    for (const auto& entry : kFieldTable) {
        if (entry.name == name) return {name, entry.analyzer};
    }
    return {name, Analyzer::atomic};
}

std::string_view field_name(FieldName name) noexcept
{
    for (const auto& entry : kFieldTable) {
        if (entry.name == name) return entry.text;
    }
    return "?";
}

std::optional<FieldName> parse_field_name(std::string_view name) noexcept
{
    for (const auto& entry : kFieldTable) {
        if (entry.text == name) return entry.name;
    }
    if (name == "authors") return FieldName::author;
    if (name == "tags") return FieldName::tag;
    if (name == "keywords") return FieldName::keyword;
    if (name == "mesh_terms" || name == "mesh") return FieldName::mesh_term;
    if (name == "textrank_keywords" || name == "textrank") return FieldName::textrank_keyword;
    return std::nullopt;
}

std::vector<FieldName> parse_field_list(std::string_view list)
{
    std::vector<FieldName> fields;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        auto comma = list.find(',', pos);
        auto item = list.substr(pos, comma == std::string_view::npos ? list.npos : comma - pos);
        pos = comma == std::string_view::npos ? list.size() + 1 : comma + 1;
        std::string name = trim_lower(item);
        if (name.empty()) continue;
        bool remove = name.front() == '-';
        if (remove) name.erase(0, 1);
        if (name == "all") {
            for (auto f : kContentFields) {
                if (remove) {
                    std::erase(fields, f);
                } else if (std::find(fields.begin(), fields.end(), f) == fields.end()) {
                    fields.push_back(f);
                }
            }
            continue;
        }
        auto field = parse_field_name(name);
        if (!field) {
            fail(ErrorCategory::config, "unknown field '" + name + "'");
        }
        if (remove) {
            std::erase(fields, *field);
        } else if (std::find(fields.begin(), fields.end(), *field) == fields.end()) {
            fields.push_back(*field);
        }
    }
    return fields;
}

std::string format_field_list(std::span<const FieldName> fields)
{
    std::string out;
    for (auto f : fields) {
        if (!out.empty()) out += ',';
        out += field_name(f);
    }
    return out;
}

std::vector<std::string> field_values(const Article& article, FieldName field)
{
    auto single = [](const std::optional<std::string>& v) {
        return v && !v->empty() ? std::vector<std::string>{*v} : std::vector<std::string>{};
    };
    switch (field) {
        case FieldName::title: return single(article.title);
        case FieldName::abstract_text: return single(article.abstract_text);
        case FieldName::author: return article.authors;
        case FieldName::tag: return article.tags;
        case FieldName::keyword: return article.keywords;
        case FieldName::mesh_term: return article.mesh_terms;
        case FieldName::textrank_keyword: return article.textrank_keywords;
        case FieldName::cf: break;
    }
    return {};
}

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (is_word_byte(static_cast<unsigned char>(c))) {
            current.push_back(lower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::span<const std::string_view> default_stopwords() noexcept
{
    return kStopwords;
}

bool is_stopword(std::string_view term) noexcept
{
    return std::find(std::begin(kStopwords), std::end(kStopwords), term) != std::end(kStopwords);
}

std::vector<std::string> remove_stopwords(std::vector<std::string> terms)
{
    std::erase_if(terms, [](const std::string& t) { return is_stopword(t); });
    return terms;
}

std::vector<std::string> analyze(FieldSpec field, std::span<const std::string> raw_values)
{
    std::vector<std::string> terms;
    for (const auto& raw : raw_values) {
        switch (field.analyzer) {
            case Analyzer::stemmed_text:
                for (auto& token : remove_stopwords(tokenize(raw))) {
                    terms.push_back(porter_stem(token));
                }
                break;
            case Analyzer::plain_text:
                for (auto& token : tokenize(raw)) terms.push_back(std::move(token));
                break;
            case Analyzer::atomic: {
                auto term = trim_lower(raw);
                if (!term.empty()) terms.push_back(std::move(term));
                break;
            }
        }
    }
    return terms;
}

std::vector<ScoredWord> textrank_scores(std::string_view abstract_text,
                                        const TextRankOptions& options)
{
    if (options.top_n < 1 || options.window < 2 || options.max_iterations < 1 ||
        options.damping <= 0.0 || options.damping >= 1.0) {
        fail(ErrorCategory::config, "invalid TextRank options");
    }
    auto words = remove_stopwords(tokenize(abstract_text));
    if (words.empty()) return {};

    // Node ids follow lexicographic order so the final tie-break is by id.
    std::map<std::string, std::size_t> node_of;
    for (const auto& w : words) node_of.emplace(w, 0);
    std::vector<std::string> node_word;
    node_word.reserve(node_of.size());
    for (auto& [w, id] : node_of) {
        id = node_word.size();
        node_word.push_back(w);
    }
    const std::size_t n = node_word.size();

    std::vector<std::set<std::size_t>> adjacency(n);
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (std::size_t j = i + 1; j < words.size() && j < i + options.window; ++j) {
            auto a = node_of[words[i]];
            auto b = node_of[words[j]];
            if (a == b) continue;
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
    }

    std::vector<double> score(n, 1.0);
    std::vector<double> next(n);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        double max_delta = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            double incoming = 0.0;
            for (auto u : adjacency[v]) {
                incoming += score[u] / static_cast<double>(adjacency[u].size());
            }
            next[v] = (1.0 - options.damping) + options.damping * incoming;
            max_delta = std::max(max_delta, std::abs(next[v] - score[v]));
        }
        score.swap(next);
        if (max_delta < options.tolerance) break;
    }

    std::vector<ScoredWord> ranked;
    ranked.reserve(n);
    for (std::size_t v = 0; v < n; ++v) ranked.push_back({node_word[v], score[v]});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const ScoredWord& x, const ScoredWord& y) { return x.score > y.score; });
    return ranked;
}

std::vector<std::string> textrank_keywords(std::string_view abstract_text,
                                           const TextRankOptions& options)
{
    auto ranked = textrank_scores(abstract_text, options);
    std::vector<std::string> keywords;
    for (std::size_t i = 0; i < ranked.size() && i < options.top_n; ++i) {
        keywords.push_back(std::move(ranked[i].word));
    }
    return keywords;
}

void add_textrank_keywords(std::span<Article> articles, const TextRankOptions& options)
{
    for (auto& article : articles) {
        if (article.abstract_text && !article.abstract_text->empty()) {
            article.textrank_keywords = textrank_keywords(*article.abstract_text, options);
        } else {
            article.textrank_keywords.clear();
        }
    }
}

}  // namespace scholarrec
