#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scholarrec/corpus.hpp"
#include "scholarrec/eval.hpp"

namespace scholarrec {

enum class Scenario { groups, venues, publications, libraries };

std::string_view scenario_name(Scenario scenario) noexcept;
Scenario parse_scenario(std::string_view name);

struct ArticleSet {
    std::string set_id;
    std::vector<std::string> article_ids;  // ascending

    bool operator==(const ArticleSet&) const = default;
};

struct TestQuery {
    std::string article_id;
    std::string set_id;

    bool operator==(const TestQuery&) const = default;
};

struct TestSet {
    Scenario scenario = Scenario::groups;
    std::uint64_t seed = 0;
    std::vector<ArticleSet> sets;
    std::vector<TestQuery> queries;

    bool operator==(const TestSet&) const = default;

    /// Every article of every set (the search space), ascending.
    std::vector<std::string> article_ids() const;
    const ArticleSet* find_set(std::string_view set_id) const;

    std::string to_json() const;
    static TestSet from_json(std::string_view text);
    void save(const std::filesystem::path& path) const;
    static TestSet load(const std::filesystem::path& path);
};

struct TestSetOptions {
    std::size_t min_set_size = 10;
    std::size_t max_set_size = 20;
    std::size_t queries_per_set = 2;
    // Fraction of user libraries considered for the libraries scenario.
    double sample_fraction = 1.0;

    void validate() const;
};

/// Groups articles by the scenario key and resolves overlaps greedily, larger
/// candidate sets first (ties by key). Oversized sets are downsampled, small
/// ones dropped, and queries are drawn per surviving set, all from one
/// generator seeded with `seed`. Fails with a data error when nothing
/// survives.
TestSet build_testset(const Catalog& catalog, Scenario scenario, std::uint64_t seed,
                      const TestSetOptions& options = {});

/// Lowercase, punctuation stripped, whitespace collapsed.
std::string normalize_name(std::string_view name);

/// Removes libraries that leaked into the ground truth: owners (or name
/// matches) of test articles for publications, the source libraries for
/// the libraries scenario. Other scenarios pass everything through.
std::vector<UserLibrary> derive_training(std::span<const UserLibrary> libraries,
                                         const TestSet& testset, const Catalog& catalog);

/// Each query's relevant docs are the other members of its set. Query ids
/// are the query article ids (unique because sets are disjoint).
Qrels make_qrels(const TestSet& testset);

struct SynthParams {
    std::size_t topics = 5;
    std::size_t articles_per_topic = 15;
    std::size_t users = 200;
    std::size_t topic_vocab = 40;
    std::size_t background_vocab = 200;
    std::size_t title_words = 6;
    std::size_t abstract_words = 50;
    double noise = 0.1;
    double abstract_rate = 0.8;
    double tag_rate = 0.3;
    double keyword_rate = 0.5;
    double mesh_rate = 0.3;
    std::size_t min_library = 5;
    std::size_t max_library = 20;
    std::uint64_t seed = 1;

    void validate() const;
    std::string to_json() const;
    static SynthParams from_json(std::string_view text);
};

/// Planted-topic catalog. Topic vocabularies are disjoint; noise swaps text
/// words for shared background words and library items for random
/// articles. Every scenario key is populated: one group, venue and owner
/// per topic. User i < topics owns topic i's articles.
Catalog synth_corpus(const SynthParams& params);

/// Topic index of a synthetic article id, for tests and diagnostics.
std::size_t synth_topic_of(std::string_view article_id);

}  // namespace scholarrec
