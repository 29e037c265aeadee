#pragma once

// Brute-force reference implementations used by unit and acceptance tests.
// They work from raw articles and user sets and never touch the index or the
// co-occurrence machinery they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "scholarrec/cf.hpp"
#include "scholarrec/corpus.hpp"
#include "scholarrec/index.hpp"
#include "scholarrec/textproc.hpp"

namespace oracle {

using scholarrec::Article;
using scholarrec::FieldedQuery;
using scholarrec::FieldName;
using scholarrec::RankedList;
using scholarrec::ScoredDoc;

// Analyzed terms per doc and field.
struct Corpus {
    std::vector<std::string> ids;  // ascending
    std::map<FieldName, std::vector<std::vector<std::string>>> terms;
};

inline Corpus analyze_corpus(std::vector<Article> articles, const std::vector<FieldName>& fields)
{
    std::sort(articles.begin(), articles.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    Corpus c;
    for (const auto& a : articles) c.ids.push_back(a.id);
    for (auto f : fields) {
        auto& per_doc = c.terms[f];
        for (const auto& a : articles) {
            per_doc.push_back(scholarrec::analyze(scholarrec::field_spec(f), scholarrec::field_values(a, f)));
        }
    }
    return c;
}

inline std::size_t count_of(const std::vector<std::string>& terms, const std::string& t)
{
    return static_cast<std::size_t>(std::count(terms.begin(), terms.end(), t));
}

struct FieldStats {
    double n = 0;        // docs with the field populated
    double avglen = 0;   // mean length over populated docs
};

inline FieldStats stats(const Corpus& c, FieldName f)
{
    FieldStats s;
    double total = 0;
    for (const auto& d : c.terms.at(f)) {
        if (!d.empty()) {
            s.n += 1;
            total += static_cast<double>(d.size());
        }
    }
    s.avglen = s.n > 0 ? total / s.n : 0.0;
    return s;
}

inline double doc_freq(const Corpus& c, FieldName f, const std::string& t)
{
    double df = 0;
    for (const auto& d : c.terms.at(f)) df += count_of(d, t) > 0 ? 1 : 0;
    return df;
}

inline double tfidf(const Corpus& c, const FieldedQuery& q, std::size_t doc)
{
    double sum = 0;
    std::size_t matched = 0;
    for (const auto& fq : q.fields()) {
        if (!c.terms.count(fq.field)) continue;
        const auto& d = c.terms.at(fq.field)[doc];
        const auto s = stats(c, fq.field);
        for (const auto& tw : fq.terms) {
            const double tf = static_cast<double>(count_of(d, tw.term));
            if (tf == 0) continue;
            ++matched;
            const double idf = 1.0 + std::log(s.n / (doc_freq(c, fq.field, tw.term) + 1.0));
            sum += tw.weight * std::sqrt(tf) * idf * idf / std::sqrt(static_cast<double>(d.size()));
        }
    }
    const double total = static_cast<double>(q.term_count());
    return total == 0 ? 0.0 : sum * (static_cast<double>(matched) / total);
}

inline double bm25(const Corpus& c, const FieldedQuery& q, std::size_t doc, double k1 = 1.2, double b = 0.75)
{
    double sum = 0;
    for (const auto& fq : q.fields()) {
        if (!c.terms.count(fq.field)) continue;
        const auto& d = c.terms.at(fq.field)[doc];
        const auto s = stats(c, fq.field);
        if (s.avglen == 0) continue;
        for (const auto& tw : fq.terms) {
            const double tf = static_cast<double>(count_of(d, tw.term));
            if (tf == 0) continue;
            const double df = doc_freq(c, fq.field, tw.term);
            const double idf = std::max(0.0, std::log((s.n - df + 0.5) / (df + 0.5)));
            const double len = static_cast<double>(d.size());
            sum += tw.weight * idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / s.avglen));
        }
    }
    return sum;
}

// Fields of the query with at least one term, and how many of them the doc matches.
inline std::pair<std::size_t, std::size_t> field_overlap(const Corpus& c, const FieldedQuery& q,
                                                         std::size_t doc)
{
    std::size_t total = 0, matched = 0;
    for (const auto& fq : q.fields()) {
        if (fq.terms.empty()) continue;
        ++total;
        if (!c.terms.count(fq.field)) continue;
        const auto& d = c.terms.at(fq.field)[doc];
        for (const auto& tw : fq.terms) {
            if (count_of(d, tw.term) > 0) {
                ++matched;
                break;
            }
        }
    }
    return {matched, total};
}

inline bool matches_any(const Corpus& c, const FieldedQuery& q, std::size_t doc)
{
    return field_overlap(c, q, doc).first > 0;
}

template <class ScoreFn>
RankedList rank_all(const Corpus& c, const FieldedQuery& q, std::size_t k, ScoreFn score)
{
    RankedList out;
    for (std::size_t d = 0; d < c.ids.size(); ++d) {
        if (q.excluded_doc && *q.excluded_doc == c.ids[d]) continue;
        if (!matches_any(c, q, d)) continue;
        const double s = score(d);
        if (s > 0) out.push_back({c.ids[d], s});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

// Random corpus of small vocabulary so terms collide across docs and fields.
inline std::vector<Article> random_articles(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t m) { return static_cast<std::size_t>(rng() % m); };
    static const char* words[] = {"graph",   "mining",  "network", "learning", "deep",   "neural",
                                  "protein", "gene",    "cell",    "model",    "data",   "query",
                                  "search",  "index",   "ranking", "theory",   "proof",  "running",
                                  "runs",    "caresses", "library", "systems", "cluster", "matrix"};
    const std::size_t nw = sizeof words / sizeof *words;
    auto text = [&](std::size_t len) {
        std::string s;
        for (std::size_t i = 0; i < len; ++i) {
            if (i) s += ' ';
            s += words[pick(nw)];
        }
        return s;
    };
    std::vector<Article> out;
    for (std::size_t i = 0; i < n; ++i) {
        Article a;
        char id[32];
        std::snprintf(id, sizeof id, "d%03zu", i);
        a.id = id;
        if (pick(10) < 9) a.title = text(1 + pick(6));
        if (pick(10) < 7) a.abstract_text = text(3 + pick(20));
        for (std::size_t j = pick(3); j > 0; --j) a.authors.push_back("Author " + std::to_string(pick(6)));
        for (std::size_t j = pick(4); j > 0; --j) a.tags.push_back(words[pick(nw)]);
        for (std::size_t j = pick(3); j > 0; --j) a.keywords.push_back(std::string("kw ") + words[pick(8)]);
        for (std::size_t j = pick(2); j > 0; --j) a.mesh_terms.push_back("MeSH " + std::to_string(pick(4)));
        for (std::size_t j = pick(3); j > 0; --j) a.textrank_keywords.push_back(words[pick(nw)]);
        out.push_back(std::move(a));
    }
    return out;
}

// Boolean item-user data as explicit sets.
struct Sets {
    std::vector<std::string> items;           // ascending
    std::vector<std::set<int>> users;         // per item
    std::size_t n_users = 0;
};

inline double shared(const std::set<int>& a, const std::set<int>& b)
{
    double c = 0;
    for (int u : a) c += b.count(u) ? 1 : 0;
    return c;
}

inline double xlogx(double x)
{
    return x == 0 ? 0.0 : x * std::log(x);
}

inline double similarity(scholarrec::SimilarityMeasure m, const std::set<int>& A, const std::set<int>& B,
                         std::size_t n_users)
{
    using M = scholarrec::SimilarityMeasure;
    const double a = static_cast<double>(A.size());
    const double b = static_cast<double>(B.size());
    const double c = shared(A, B);
    const double n = static_cast<double>(n_users);
    // Distances computed from the symmetric difference directly.
    double diff = 0;
    for (int u : A) diff += B.count(u) ? 0 : 1;
    for (int u : B) diff += A.count(u) ? 0 : 1;
    switch (m) {
        case M::cooccurrence: return c;
        case M::cosine: return (a == 0 || b == 0) ? 0.0 : c / std::sqrt(a * b);
        case M::tanimoto: return (a + b - c) == 0 ? 0.0 : c / (a + b - c);
        case M::cityblock: return 1.0 / (1.0 + diff);
        case M::euclidean: return 1.0 / (1.0 + std::sqrt(diff));
        case M::loglikelihood: {
            const double k11 = c, k12 = b - c, k21 = a - c, k22 = n - a - b + c;
            const double g2 = 2.0 * (xlogx(k11) + xlogx(k12) + xlogx(k21) + xlogx(k22) - xlogx(k11 + k12) -
                                     xlogx(k21 + k22) - xlogx(k11 + k21) - xlogx(k12 + k22) + xlogx(n));
            return 1.0 - 1.0 / (1.0 + g2);
        }
    }
    return 0;
}

inline scholarrec::NeighborMap pipeline(const Sets& s, scholarrec::SimilarityMeasure m, std::size_t max_cooc,
                                        std::size_t max_sim)
{
    const std::size_t n = s.items.size();
    std::vector<std::vector<double>> count(n, std::vector<double>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) count[i][j] = shared(s.users[i], s.users[j]);
        }
    }
    std::vector<std::set<std::size_t>> retained(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> partners;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && count[i][j] > 0) partners.push_back(j);
        }
        std::sort(partners.begin(), partners.end(), [&](auto x, auto y) {
            if (count[i][x] != count[i][y]) return count[i][x] > count[i][y];
            return x < y;
        });
        for (std::size_t r = 0; r < partners.size() && r < max_cooc; ++r) retained[i].insert(partners[r]);
    }
    scholarrec::NeighborMap out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<scholarrec::Neighbor> list;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || count[i][j] == 0) continue;
            if (!retained[i].count(j) && !retained[j].count(i)) continue;
            list.push_back({s.items[j], similarity(m, s.users[i], s.users[j], s.n_users)});
        }
        std::sort(list.begin(), list.end(), [](const auto& x, const auto& y) {
            if (x.score != y.score) return x.score > y.score;
            return x.id < y.id;
        });
        if (list.size() > max_sim) list.resize(max_sim);
        out[s.items[i]] = std::move(list);
    }
    return out;
}

// Random boolean matrix as libraries; every item is held by at least one user
// of a library with >= 2 items so the trained matrix keeps all items.
inline std::vector<scholarrec::UserLibrary> random_libraries(std::uint64_t seed, std::size_t items,
                                                             std::size_t users, double density)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<scholarrec::UserLibrary> libs(users);
    for (std::size_t u = 0; u < users; ++u) {
        char id[32];
        std::snprintf(id, sizeof id, "u%03zu", u);
        libs[u].user_id = id;
    }
    for (std::size_t i = 0; i < items; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "i%03zu", i);
        for (std::size_t u = 0; u < users; ++u) {
            if (unit(rng) < density) libs[u].article_ids.insert(id);
        }
    }
    return libs;
}

inline Sets sets_from(const std::vector<scholarrec::UserLibrary>& libs)
{
    std::vector<const scholarrec::UserLibrary*> kept;
    for (const auto& l : libs) {
        if (l.article_ids.size() >= 2 && l.article_ids.size() <= 1000) kept.push_back(&l);
    }
    std::sort(kept.begin(), kept.end(), [](auto* a, auto* b) { return a->user_id < b->user_id; });
    std::map<std::string, std::set<int>> by_item;
    for (std::size_t u = 0; u < kept.size(); ++u) {
        for (const auto& id : kept[u]->article_ids) by_item[id].insert(static_cast<int>(u));
    }
    Sets s;
    s.n_users = kept.size();
    for (auto& [id, users] : by_item) {
        s.items.push_back(id);
        s.users.push_back(users);
    }
    return s;
}

}  // namespace oracle
