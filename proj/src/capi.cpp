#include "scholarrec/scholarrec.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "scholarrec/error.hpp"
#include "scholarrec/harness.hpp"
#include "scholarrec/index.hpp"

struct srec_config {
    scholarrec::ExperimentConfig value;
};
struct srec_catalog {
    scholarrec::Catalog value;
};
struct srec_testset {
    scholarrec::TestSet value;
};
struct srec_neighbors {
    scholarrec::NeighborMap value;
};
struct srec_index {
    scholarrec::FieldedIndex value;
};
struct srec_run {
    scholarrec::RankedRun value;
};

namespace {

using namespace scholarrec;

thread_local std::string last_error;

srec_status to_status(ErrorCategory category)
{
    switch (category) {
        case ErrorCategory::internal: return SREC_ERR_INTERNAL;
        case ErrorCategory::config: return SREC_ERR_CONFIG;
        case ErrorCategory::io: return SREC_ERR_IO;
        case ErrorCategory::parse: return SREC_ERR_PARSE;
        case ErrorCategory::data: return SREC_ERR_DATA;
    }
    return SREC_ERR_INTERNAL;
}

template <class F>
srec_status try_(F&& body)
{
    last_error.clear();
    try {
        body();
        return SREC_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return to_status(e.category());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown failure";
    }
    return SREC_ERR_INTERNAL;
}

template <class T>
const T& need(const T* p, const char* what)
{
    if (!p) fail(ErrorCategory::config, std::string(what) + " must not be null");
    return *p;
}

template <class T>
T& need(T* p, const char* what)
{
    if (!p) fail(ErrorCategory::config, std::string(what) + " must not be null");
    return *p;
}

std::string path_arg(const char* p, const char* what)
{
    if (!p || !*p) fail(ErrorCategory::config, std::string(what) + " must be a non-empty path");
    return p;
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void hand_out(char** out, const std::string& s)
{
    if (out) *out = dup_string(s);
}

std::uint64_t parse_u64(const std::string& text, const char* what)
{
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        fail(ErrorCategory::config, std::string(what) + " must be a non-negative integer, got '" + text + "'");
    }
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        fail(ErrorCategory::config, std::string(what) + " is out of range: '" + text + "'");
    }
}

std::vector<std::size_t> parse_ks(const std::string& text)
{
    std::vector<std::size_t> ks;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) ks.push_back(parse_u64(item, "cutoff"));
    if (ks.empty()) fail(ErrorCategory::config, "no precision cutoffs given");
    return ks;
}

void set_key(ExperimentConfig& c, const std::string& key, const std::string& value)
{
    if (key == "scenario") {
        c.scenario = parse_scenario(value);
    } else if (key == "recommender") {
        c.recommender = parse_recommender(value);
    } else if (key == "seed") {
        c.seed = parse_u64(value, "seed");
    } else if (key == "variant") {
        c.content.variant = parse_variant(value);
    } else if (key == "measure") {
        c.cf.measure = parse_measure(value);
    } else if (key == "fields") {
        c.content.fields_used = parse_field_list(value);
    } else if (key == "corpus") {
        set_corpus_dir(c, value);
    } else if (key == "articles") {
        c.articles = value;
    } else if (key == "libraries") {
        c.libraries = value;
    } else if (key == "neighbor_weighting") {
        c.neighbor_weighting = parse_weighting(value);
    } else if (key == "depth") {
        c.depth = parse_u64(value, "depth");
    } else if (key == "ks") {
        c.ks = parse_ks(value);
    } else {
        fail(ErrorCategory::config, "unknown config key '" + key + "'");
    }
}

void require_corpus(const ExperimentConfig& c)
{
    for (const auto* p : {&c.articles, &c.libraries}) {
        if (p->empty()) fail(ErrorCategory::config, "no corpus configured (--corpus)");
        if (!std::filesystem::is_regular_file(*p)) {
            fail(ErrorCategory::config, "corpus file '" + p->string() + "' does not exist");
        }
    }
}

ExperimentConfig config_or_default(const srec_config* config)
{
    return config ? config->value : ExperimentConfig{};
}

}  // namespace

extern "C" {

const char* srec_version(void)
{
    return "0.1.0";
}

const char* srec_status_name(srec_status status)
{
    switch (status) {
        case SREC_OK: return "ok";
        case SREC_ERR_INTERNAL: return "internal";
        case SREC_ERR_CONFIG: return "config";
        case SREC_ERR_IO: return "io";
        case SREC_ERR_PARSE: return "parse";
        case SREC_ERR_DATA: return "data";
    }
    return "internal";
}

const char* srec_last_error(void)
{
    return last_error.c_str();
}

void srec_string_free(char* text)
{
    std::free(text);
}

srec_status srec_config_new(const char* json, srec_config** out)
{
    return try_([&] {
        need(out, "out");
        auto c = std::make_unique<srec_config>();
        if (json) c->value = ExperimentConfig::from_json(json);
        *out = c.release();
    });
}

srec_status srec_config_set(srec_config* config, const char* key, const char* value)
{
    return try_([&] {
        auto& c = need(config, "config").value;
        if (!key || !value) fail(ErrorCategory::config, "key and value must not be null");
        set_key(c, key, value);
    });
}

srec_status srec_config_to_json(const srec_config* config, char** out)
{
    return try_([&] { hand_out(out, need(config, "config").value.to_json()); });
}

srec_status srec_config_hash(const srec_config* config, char** out)
{
    return try_([&] { hand_out(out, need(config, "config").value.hash()); });
}

void srec_config_free(srec_config* config)
{
    delete config;
}

srec_status srec_catalog_load(const char* articles_path, const char* libraries_path, srec_catalog** out)
{
    return try_([&] {
        need(out, "out");
        ExperimentConfig c;
        c.articles = path_arg(articles_path, "articles path");
        c.libraries = path_arg(libraries_path, "libraries path");
        require_corpus(c);
        *out = new srec_catalog{load_corpus(c.articles, c.libraries)};
    });
}

srec_status srec_catalog_load_config(const srec_config* config, srec_catalog** out)
{
    return try_([&] {
        need(out, "out");
        const auto& c = need(config, "config").value;
        require_corpus(c);
        *out = new srec_catalog{prepare_catalog(c)};
    });
}

srec_status srec_catalog_synth(const char* params_json, uint64_t seed, srec_catalog** out)
{
    return try_([&] {
        need(out, "out");
        auto params = params_json ? SynthParams::from_json(params_json) : SynthParams{};
        params.seed = seed;
        *out = new srec_catalog{synth_corpus(params)};
    });
}

srec_status srec_catalog_save(const srec_catalog* catalog, const char* dir, int overwrite)
{
    return try_([&] {
        const auto& cat = need(catalog, "catalog").value;
        const std::filesystem::path root = path_arg(dir, "output directory");
        std::error_code ec;
        std::filesystem::create_directories(root, ec);
        if (ec) fail(ErrorCategory::io, "cannot create output directory '" + root.string() + "'");
        const auto articles = root / "articles.jsonl";
        const auto libraries = root / "libraries.csv";
        ensure_writable(articles, overwrite != 0);
        ensure_writable(libraries, overwrite != 0);
        save_articles(articles, catalog_articles(cat));
        save_libraries(libraries, cat.libraries, LibraryFormat::csv);
    });
}

srec_status srec_catalog_validate(const srec_catalog* catalog, char** report_json)
{
    return try_([&] { hand_out(report_json, validate(need(catalog, "catalog").value).to_json()); });
}

srec_status srec_catalog_add_textrank(srec_catalog* catalog, const srec_config* config)
{
    return try_([&] {
        auto& cat = need(catalog, "catalog").value;
        cat = with_textrank(std::move(cat), config_or_default(config).textrank);
    });
}

size_t srec_catalog_article_count(const srec_catalog* catalog)
{
    return catalog ? catalog->value.articles.size() : 0;
}

size_t srec_catalog_library_count(const srec_catalog* catalog)
{
    return catalog ? catalog->value.libraries.size() : 0;
}

void srec_catalog_free(srec_catalog* catalog)
{
    delete catalog;
}

srec_status srec_testset_build(const srec_catalog* catalog, const srec_config* config, srec_testset** out)
{
    return try_([&] {
        need(out, "out");
        const auto& c = need(config, "config").value;
        if (!c.seed) fail(ErrorCategory::config, "a seed is required (--seed)");
        c.testset.validate();
        *out = new srec_testset{build_testset(need(catalog, "catalog").value, c.scenario, *c.seed, c.testset)};
    });
}

srec_status srec_testset_load(const char* path, srec_testset** out)
{
    return try_([&] {
        need(out, "out");
        *out = new srec_testset{TestSet::load(path_arg(path, "test set path"))};
    });
}

srec_status srec_testset_save(const srec_testset* testset, const char* path, const srec_config* config,
                              int overwrite)
{
    return try_([&] {
        const std::filesystem::path p = path_arg(path, "test set path");
        ensure_writable(p, overwrite != 0);
        save_testset_artifact(p, need(testset, "testset").value, config_or_default(config));
    });
}

srec_status srec_testset_save_qrels(const srec_testset* testset, const char* path,
                                    const srec_config* config, int overwrite)
{
    return try_([&] {
        const std::filesystem::path p = path_arg(path, "qrels path");
        ensure_writable(p, overwrite != 0);
        const auto qrels = make_qrels(need(testset, "testset").value);
        save_qrels(p, qrels,
                   artifact_header("qrels", config_or_default(config),
                                   "# qrels_hash=" + qrels_hash(qrels) + "\n"));
    });
}

size_t srec_testset_set_count(const srec_testset* testset)
{
    return testset ? testset->value.sets.size() : 0;
}

size_t srec_testset_query_count(const srec_testset* testset)
{
    return testset ? testset->value.queries.size() : 0;
}

uint64_t srec_testset_seed(const srec_testset* testset)
{
    return testset ? testset->value.seed : 0;
}

const char* srec_testset_scenario(const srec_testset* testset)
{
    return testset ? scenario_name(testset->value.scenario).data() : "";
}

void srec_testset_free(srec_testset* testset)
{
    delete testset;
}

srec_status srec_neighbors_train(const srec_catalog* catalog, const srec_testset* testset,
                                 const srec_config* config, srec_neighbors** out)
{
    return try_([&] {
        need(out, "out");
        const auto& cat = need(catalog, "catalog").value;
        const auto params = config_or_default(config).cf;
        params.validate();
        *out = new srec_neighbors{testset ? train_for_testset(cat, testset->value, params)
                                          : train_neighbors(cat.libraries, params)};
    });
}

srec_status srec_neighbors_load(const char* path, srec_neighbors** out)
{
    return try_([&] {
        need(out, "out");
        *out = new srec_neighbors{load_neighbors(path_arg(path, "neighbors path"))};
    });
}

srec_status srec_neighbors_save(const srec_neighbors* neighbors, const char* path,
                                const srec_config* config, int overwrite)
{
    return try_([&] {
        const std::filesystem::path p = path_arg(path, "neighbors path");
        ensure_writable(p, overwrite != 0);
        save_neighbors(p, need(neighbors, "neighbors").value,
                       artifact_header("neighbors", config_or_default(config)));
    });
}

size_t srec_neighbors_item_count(const srec_neighbors* neighbors)
{
    return neighbors ? neighbors->value.size() : 0;
}

void srec_neighbors_free(srec_neighbors* neighbors)
{
    delete neighbors;
}

srec_status srec_index_build(const srec_catalog* catalog, const srec_testset* testset,
                             const srec_config* config, srec_index** out)
{
    return try_([&] {
        need(out, "out");
        const auto& cat = need(catalog, "catalog").value;
        const auto c = config_or_default(config);
        std::vector<Article> articles;
        if (testset) {
            for (const auto& id : testset->value.article_ids()) {
                const auto* a = cat.find(id);
                if (!a) fail(ErrorCategory::data, "test article '" + id + "' is missing from the catalog");
                articles.push_back(*a);
            }
        } else {
            articles = catalog_articles(cat);
        }
        *out = new srec_index{FieldedIndex::build(articles, c.content.fields_used)};
    });
}

srec_status srec_index_load(const char* path, srec_index** out)
{
    return try_([&] {
        need(out, "out");
        *out = new srec_index{FieldedIndex::load(path_arg(path, "index path"))};
    });
}

srec_status srec_index_save(const srec_index* index, const char* path, int overwrite)
{
    return try_([&] {
        const std::filesystem::path p = path_arg(path, "index path");
        ensure_writable(p, overwrite != 0);
        need(index, "index").value.save(p);
    });
}

size_t srec_index_doc_count(const srec_index* index)
{
    return index ? index->value.size() : 0;
}

void srec_index_free(srec_index* index)
{
    delete index;
}

srec_status srec_recommend(const srec_catalog* catalog, const srec_testset* testset,
                           const srec_neighbors* neighbors, const srec_config* config, srec_run** out)
{
    return try_([&] {
        need(out, "out");
        const auto& c = need(config, "config").value;
        c.content.validate();
        if (c.recommender == RecommenderKind::hybrid) c.hybrid().validate();
        *out = new srec_run{recommend_testset(need(catalog, "catalog").value, need(testset, "testset").value,
                                              c, neighbors ? &neighbors->value : nullptr)};
    });
}

srec_status srec_run_load(const char* path, srec_run** out)
{
    return try_([&] {
        need(out, "out");
        *out = new srec_run{load_run(path_arg(path, "run path"))};
    });
}

srec_status srec_run_save(const srec_run* run, const char* path, const srec_config* config, int overwrite)
{
    return try_([&] {
        const std::filesystem::path p = path_arg(path, "run path");
        ensure_writable(p, overwrite != 0);
        save_run(p, need(run, "run").value, artifact_header("run", config_or_default(config)));
    });
}

size_t srec_run_query_count(const srec_run* run)
{
    return run ? run->value.results.size() : 0;
}

void srec_run_free(srec_run* run)
{
    delete run;
}

srec_status srec_evaluate_files(const char* run_path, const char* qrels_path, const size_t* ks,
                                size_t k_count, const char* metrics_path, int overwrite, char** table)
{
    return try_([&] {
        std::vector<std::size_t> cutoffs{5, 10};
        if (k_count > 0) {
            if (!ks) fail(ErrorCategory::config, "ks must not be null");
            cutoffs.assign(ks, ks + k_count);
        }
        for (auto k : cutoffs) {
            if (k < 1) fail(ErrorCategory::config, "precision cutoffs must be >= 1");
        }
        const auto run = load_run(path_arg(run_path, "run path"));
        const auto qrels = load_qrels(path_arg(qrels_path, "qrels path"));
        const auto result = evaluate(run, qrels, cutoffs);
        if (metrics_path) {
            const std::filesystem::path p = path_arg(metrics_path, "metrics path");
            ensure_writable(p, overwrite != 0);
            save_metrics_artifact(p, result, "# scholarrec metrics\n", qrels_hash(qrels), run.tag);
        }
        hand_out(table, result.to_pretty());
    });
}

srec_status srec_pipeline(const srec_config* config, const char* out_dir, int overwrite, char** table)
{
    return try_([&] {
        const auto artifacts =
            run_pipeline(need(config, "config").value, path_arg(out_dir, "output directory"), overwrite != 0);
        hand_out(table, artifacts.table.to_pretty());
    });
}

srec_status srec_compare(const char* const* metrics_paths, size_t count, const char* metric, char** table)
{
    return try_([&] {
        std::vector<std::filesystem::path> paths;
        for (size_t i = 0; i < count; ++i) paths.emplace_back(path_arg(metrics_paths[i], "metrics path"));
        hand_out(table, compare_runs(paths, metric ? metric : "P_5"));
    });
}

}  // extern "C"
