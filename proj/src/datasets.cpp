#include "scholarrec/datasets.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "scholarrec/error.hpp"
#include "scholarrec/random.hpp"

namespace scholarrec {

using nlohmann::json;

std::string_view scenario_name(Scenario scenario) noexcept
{
    switch (scenario) {
        case Scenario::groups: return "groups";
        case Scenario::venues: return "venues";
        case Scenario::publications: return "publications";
        case Scenario::libraries: return "libraries";
    }
    return "?";
}

Scenario parse_scenario(std::string_view name)
{
    for (auto s : {Scenario::groups, Scenario::venues, Scenario::publications, Scenario::libraries}) {
        if (scenario_name(s) == name) return s;
    }
    fail(ErrorCategory::config, "unknown scenario '" + std::string(name) + "'");
}

std::vector<std::string> TestSet::article_ids() const
{
    std::vector<std::string> ids;
    for (const auto& s : sets) ids.insert(ids.end(), s.article_ids.begin(), s.article_ids.end());
    std::sort(ids.begin(), ids.end());
    return ids;
}

const ArticleSet* TestSet::find_set(std::string_view set_id) const
{
    for (const auto& s : sets) {
        if (s.set_id == set_id) return &s;
    }
    return nullptr;
}

std::string TestSet::to_json() const
{
    json j;
    j["scenario"] = scenario_name(scenario);
    j["seed"] = seed;
    json sets_json = json::array();
    for (const auto& s : sets) sets_json.push_back({{"set_id", s.set_id}, {"article_ids", s.article_ids}});
    j["sets"] = std::move(sets_json);
    json queries_json = json::array();
    for (const auto& q : queries) {
        queries_json.push_back({{"query", q.article_id}, {"set_id", q.set_id}});
    }
    j["queries"] = std::move(queries_json);
    return j.dump(1);
}

TestSet TestSet::from_json(std::string_view text)
{
    TestSet t;
    try {
        auto j = json::parse(text);
        t.scenario = parse_scenario(j.at("scenario").get<std::string>());
        t.seed = j.value("seed", std::uint64_t{0});
        for (const auto& s : j.at("sets")) {
            t.sets.push_back({s.at("set_id").get<std::string>(),
                              s.at("article_ids").get<std::vector<std::string>>()});
        }
        for (const auto& q : j.at("queries")) {
            t.queries.push_back({q.at("query").get<std::string>(), q.at("set_id").get<std::string>()});
        }
    } catch (const json::exception& e) {
        fail(ErrorCategory::parse, std::string("test set: ") + e.what());
    }
    std::set<std::string> seen;
    for (const auto& s : t.sets) {
        for (const auto& id : s.article_ids) {
            if (!seen.insert(id).second) {
                fail(ErrorCategory::data, "test set: article '" + id + "' appears in two sets");
            }
        }
    }
    for (const auto& q : t.queries) {
        const auto* s = t.find_set(q.set_id);
        if (!s || !std::binary_search(s->article_ids.begin(), s->article_ids.end(), q.article_id)) {
            fail(ErrorCategory::data, "test set: query '" + q.article_id + "' is not in set '" +
                                          q.set_id + "'");
        }
    }
    return t;
}

void TestSet::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for writing");
    out << to_json() << '\n';
}

TestSet TestSet::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

void TestSetOptions::validate() const
{
    if (min_set_size < 2 || min_set_size > max_set_size) {
        fail(ErrorCategory::config, "set size bounds must satisfy 2 <= min <= max");
    }
    if (queries_per_set < 1 || queries_per_set > min_set_size) {
        fail(ErrorCategory::config, "queries_per_set must be between 1 and the minimum set size");
    }
    if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
        fail(ErrorCategory::config, "sample_fraction must be in (0, 1]");
    }
}

namespace {

using Candidates = std::map<std::string, std::set<std::string>>;

Candidates candidate_sets(const Catalog& catalog, Scenario scenario, double sample_fraction, Rng& rng)
{
    Candidates out;
    for (const auto& [id, a] : catalog.articles) {
        switch (scenario) {
            case Scenario::groups:
                for (const auto& g : a.group_ids) out[g].insert(id);
                break;
            case Scenario::venues:
                if (a.venue_id && !a.venue_id->empty()) out[*a.venue_id].insert(id);
                break;
            case Scenario::publications:
                for (const auto& u : a.owner_user_ids) out[u].insert(id);
                break;
            case Scenario::libraries: break;
        }
    }
    if (scenario == Scenario::libraries) {
        for (const auto& lib : catalog.libraries) {
            if (sample_fraction < 1.0 && !rng.chance(sample_fraction)) continue;
            auto& ids = out[lib.user_id];
            for (const auto& id : lib.article_ids) {
                if (catalog.articles.count(id)) ids.insert(id);
            }
        }
    }
    return out;
}

}  // namespace

TestSet build_testset(const Catalog& catalog, Scenario scenario, std::uint64_t seed,
                      const TestSetOptions& options)
{
    options.validate();
    Rng rng(seed);
    auto candidates = candidate_sets(catalog, scenario, options.sample_fraction, rng);

    std::vector<const Candidates::value_type*> order;
    for (const auto& entry : candidates) order.push_back(&entry);
    std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        return a->second.size() > b->second.size();
    });

    TestSet t;
    t.scenario = scenario;
    t.seed = seed;
    std::set<std::string> claimed;
    for (const auto* entry : order) {
        std::vector<std::string> members;
        for (const auto& id : entry->second) {
            if (!claimed.count(id)) members.push_back(id);
        }
        if (members.size() > options.max_set_size) {
            members = rng.sample(std::move(members), options.max_set_size);
            std::sort(members.begin(), members.end());
        }
        if (members.size() < options.min_set_size) continue;
        claimed.insert(members.begin(), members.end());
        for (auto& q : rng.sample(members, options.queries_per_set)) {
            t.queries.push_back({std::move(q), entry->first});
        }
        t.sets.push_back({entry->first, std::move(members)});
    }
    if (t.sets.empty()) {
        fail(ErrorCategory::data, "no article set survives for scenario '" +
                                      std::string(scenario_name(scenario)) + "'");
    }
    return t;
}

std::string normalize_name(std::string_view name)
{
    std::string out;
    bool pending_space = false;
    for (char c : name) {
        const auto u = static_cast<unsigned char>(c);
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            pending_space = !out.empty();
            continue;
        }
        if (u < 0x80 && !std::isalnum(u)) continue;
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
    }
    return out;
}

std::vector<UserLibrary> derive_training(std::span<const UserLibrary> libraries,
                                         const TestSet& testset, const Catalog& catalog)
{
    std::vector<UserLibrary> out;
    switch (testset.scenario) {
        case Scenario::groups:
        case Scenario::venues: out.assign(libraries.begin(), libraries.end()); break;
        case Scenario::publications: {
            std::set<std::string> owners;
            std::set<std::string> author_names;
            for (const auto& id : testset.article_ids()) {
                const auto* a = catalog.find(id);
                if (!a) continue;
                owners.insert(a->owner_user_ids.begin(), a->owner_user_ids.end());
                for (const auto& name : a->authors) {
                    auto n = normalize_name(name);
                    if (!n.empty()) author_names.insert(std::move(n));
                }
            }
            for (const auto& lib : libraries) {
                if (owners.count(lib.user_id)) continue;
                if (lib.user_name && author_names.count(normalize_name(*lib.user_name))) continue;
                out.push_back(lib);
            }
            break;
        }
        case Scenario::libraries: {
            std::set<std::string> sources;
            for (const auto& s : testset.sets) sources.insert(s.set_id);
            for (const auto& lib : libraries) {
                if (!sources.count(lib.user_id)) out.push_back(lib);
            }
            break;
        }
    }
    return out;
}

Qrels make_qrels(const TestSet& testset)
{
    Qrels qrels;
    for (const auto& q : testset.queries) {
        const auto* s = testset.find_set(q.set_id);
        if (!s) fail(ErrorCategory::data, "query '" + q.article_id + "' names unknown set");
        auto& docs = qrels.relevant[q.article_id];
        for (const auto& id : s->article_ids) {
            if (id != q.article_id) docs.insert(id);
        }
    }
    return qrels;
}

void SynthParams::validate() const
{
    if (topics < 1 || articles_per_topic < 1 || topic_vocab < 1 || background_vocab < 1 ||
        title_words < 1 || abstract_words < 1) {
        fail(ErrorCategory::config, "synthetic corpus sizes must be positive");
    }
    if (!(noise >= 0.0 && noise < 1.0)) fail(ErrorCategory::config, "noise must be in [0, 1)");
    for (double rate : {abstract_rate, tag_rate, keyword_rate, mesh_rate}) {
        if (!(rate >= 0.0 && rate <= 1.0)) fail(ErrorCategory::config, "field rates must be in [0, 1]");
    }
    if (min_library < 1 || min_library > max_library) {
        fail(ErrorCategory::config, "library size bounds must satisfy 1 <= min <= max");
    }
}

std::string SynthParams::to_json() const
{
    json j;
    j["topics"] = topics;
    j["articles_per_topic"] = articles_per_topic;
    j["users"] = users;
    j["topic_vocab"] = topic_vocab;
    j["background_vocab"] = background_vocab;
    j["title_words"] = title_words;
    j["abstract_words"] = abstract_words;
    j["noise"] = noise;
    j["abstract_rate"] = abstract_rate;
    j["tag_rate"] = tag_rate;
    j["keyword_rate"] = keyword_rate;
    j["mesh_rate"] = mesh_rate;
    j["min_library"] = min_library;
    j["max_library"] = max_library;
    j["seed"] = seed;
    return j.dump();
}

SynthParams SynthParams::from_json(std::string_view text)
{
    SynthParams p;
    try {
        auto j = json::parse(text);
        p.topics = j.value("topics", p.topics);
        p.articles_per_topic = j.value("articles_per_topic", p.articles_per_topic);
        p.users = j.value("users", p.users);
        p.topic_vocab = j.value("topic_vocab", p.topic_vocab);
        p.background_vocab = j.value("background_vocab", p.background_vocab);
        p.title_words = j.value("title_words", p.title_words);
        p.abstract_words = j.value("abstract_words", p.abstract_words);
        p.noise = j.value("noise", p.noise);
        p.abstract_rate = j.value("abstract_rate", p.abstract_rate);
        p.tag_rate = j.value("tag_rate", p.tag_rate);
        p.keyword_rate = j.value("keyword_rate", p.keyword_rate);
        p.mesh_rate = j.value("mesh_rate", p.mesh_rate);
        p.min_library = j.value("min_library", p.min_library);
        p.max_library = j.value("max_library", p.max_library);
        p.seed = j.value("seed", p.seed);
    } catch (const json::exception& e) {
        fail(ErrorCategory::config, std::string("synth params: ") + e.what());
    }
    p.validate();
    return p;
}

namespace {

// Generated words end in a digit, which no Porter rule touches, so they
// survive title stemming unchanged.
std::string topic_word(std::size_t topic, std::size_t i)
{
    return "t" + std::to_string(topic) + "w" + std::to_string(i);
}

std::string background_word(std::size_t i)
{
    return "bg" + std::to_string(i);
}

std::string article_id(std::size_t topic, std::size_t i)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "t%02zua%03zu", topic, i);
    return buf;
}

std::string user_id(std::size_t u)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "u%04zu", u);
    return buf;
}

std::string owner_name(std::size_t topic)
{
    return "Author T" + std::to_string(topic);
}

}  // namespace

std::size_t synth_topic_of(std::string_view article_id)
{
    if (article_id.size() < 2 || article_id.front() != 't') {
        fail(ErrorCategory::data, "not a synthetic article id: '" + std::string(article_id) + "'");
    }
    std::size_t topic = 0;
    std::size_t i = 1;
    for (; i < article_id.size() && article_id[i] >= '0' && article_id[i] <= '9'; ++i) {
        topic = topic * 10 + static_cast<std::size_t>(article_id[i] - '0');
    }
    if (i == 1) fail(ErrorCategory::data, "not a synthetic article id: '" + std::string(article_id) + "'");
    return topic;
}

Catalog synth_corpus(const SynthParams& params)
{
    params.validate();
    Rng rng(params.seed);
    constexpr std::size_t kCoauthorsPerTopic = 8;
    constexpr std::size_t kMeshPerTopic = 6;

    auto text = [&](std::size_t topic, std::size_t words) {
        std::string out;
        for (std::size_t w = 0; w < words; ++w) {
            if (!out.empty()) out += ' ';
            if (rng.chance(params.noise)) {
                out += background_word(rng.below(params.background_vocab));
            } else {
                out += topic_word(topic, rng.below(params.topic_vocab));
            }
        }
        return out;
    };
    auto topic_terms = [&](std::size_t topic, std::size_t lo, std::size_t hi) {
        std::vector<std::size_t> pool(params.topic_vocab);
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
        std::vector<std::string> out;
        for (auto i : rng.sample(pool, rng.between(lo, hi))) out.push_back(topic_word(topic, i));
        return out;
    };

    std::vector<Article> articles;
    std::vector<std::vector<std::string>> topic_articles(params.topics);
    for (std::size_t t = 0; t < params.topics; ++t) {
        for (std::size_t i = 0; i < params.articles_per_topic; ++i) {
            Article a;
            a.id = article_id(t, i);
            a.title = text(t, params.title_words);
            if (rng.chance(params.abstract_rate)) a.abstract_text = text(t, params.abstract_words);
            a.authors.push_back(owner_name(t));
            for (std::size_t c = rng.between(0, 2); c > 0; --c) {
                a.authors.push_back(owner_name(t) + "." + std::to_string(rng.below(kCoauthorsPerTopic)));
            }
            std::sort(a.authors.begin() + 1, a.authors.end());
            a.authors.erase(std::unique(a.authors.begin(), a.authors.end()), a.authors.end());
            if (rng.chance(params.tag_rate)) a.tags = topic_terms(t, 1, 3);
            if (rng.chance(params.keyword_rate)) a.keywords = topic_terms(t, 2, 4);
            if (rng.chance(params.mesh_rate)) {
                for (std::size_t m = rng.between(1, 3); m > 0; --m) {
                    a.mesh_terms.push_back("MeSH T" + std::to_string(t) + " " +
                                           std::to_string(rng.below(kMeshPerTopic)));
                }
                std::sort(a.mesh_terms.begin(), a.mesh_terms.end());
                a.mesh_terms.erase(std::unique(a.mesh_terms.begin(), a.mesh_terms.end()),
                                   a.mesh_terms.end());
            }
            a.venue_id = "venue-" + std::to_string(t);
            a.group_ids.push_back("group-" + std::to_string(t));
            a.owner_user_ids.push_back(user_id(t));
            topic_articles[t].push_back(a.id);
            articles.push_back(std::move(a));
        }
    }

    std::vector<UserLibrary> libraries;
    const std::size_t total_articles = articles.size();
    for (std::size_t u = 0; u < params.users; ++u) {
        UserLibrary lib;
        lib.user_id = user_id(u);
        std::vector<std::size_t> topics;
        if (u < params.topics) {
            // topic owner: their own publications plus reading in the topic
            topics.push_back(u);
            lib.user_name = owner_name(u);
            lib.article_ids.insert(topic_articles[u].begin(), topic_articles[u].end());
        } else {
            std::vector<std::size_t> all(params.topics);
            for (std::size_t t = 0; t < all.size(); ++t) all[t] = t;
            topics = rng.sample(all, rng.between(1, std::min<std::size_t>(3, params.topics)));
        }
        std::vector<std::string> pool;
        for (auto t : topics) pool.insert(pool.end(), topic_articles[t].begin(), topic_articles[t].end());
        const auto size = rng.between(params.min_library, params.max_library);
        for (auto& id : rng.sample(pool, size)) {
            if (rng.chance(params.noise)) {
                lib.article_ids.insert(articles[rng.below(total_articles)].id);
            } else {
                lib.article_ids.insert(std::move(id));
            }
        }
        libraries.push_back(std::move(lib));
    }
    return make_catalog(std::move(articles), std::move(libraries));
}

}  // namespace scholarrec
