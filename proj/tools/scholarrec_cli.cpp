// scholarrec command line front end over the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scholarrec/scholarrec.h"

namespace fs = std::filesystem;

namespace {

struct Failure {
    srec_status status;
    std::string message;
};

void check(srec_status status)
{
    if (status != SREC_OK) throw Failure{status, srec_last_error()};
}

[[noreturn]] void config_error(const std::string& message)
{
    throw Failure{SREC_ERR_CONFIG, message};
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(ptr); }
    T** out() { return &ptr; }
    T* get() const { return ptr; }
};

using Config = Handle<srec_config, srec_config_free>;
using Catalog = Handle<srec_catalog, srec_catalog_free>;
using TestSet = Handle<srec_testset, srec_testset_free>;
using Neighbors = Handle<srec_neighbors, srec_neighbors_free>;
using Index = Handle<srec_index, srec_index_free>;
using Run = Handle<srec_run, srec_run_free>;

std::string take(char* text)
{
    std::string s = text ? text : "";
    srec_string_free(text);
    return s;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{SREC_ERR_IO, "cannot open '" + path + "' for reading"};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// `--config` accepts a file path or an inline json object.
std::string json_arg(const std::string& value)
{
    auto first = value.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && value[first] == '{') return value;
    return read_file(value);
}

struct Options {
    std::string config;
    std::string corpus;
    std::string articles;
    std::string libraries;
    std::string scenario;
    std::string recommender;
    std::string variant;
    std::string measure;
    std::string weighting;
    std::string fields;
    std::string seed;
    std::string depth;
    std::string ks;
    std::string out;
    std::string testset;
    std::string neighbors;
    std::string run;
    std::string qrels;
    std::string metric = "P_5";
    std::vector<std::string> files;
    bool overwrite = false;
    bool textrank = false;
};

void make_config(const Options& o, Config& config)
{
    std::optional<std::string> json;
    if (!o.config.empty()) json = json_arg(o.config);
    check(srec_config_new(json ? json->c_str() : nullptr, config.out()));
    const std::pair<const char*, const std::string*> overrides[] = {
        {"corpus", &o.corpus},       {"articles", &o.articles},
        {"libraries", &o.libraries}, {"scenario", &o.scenario},
        {"recommender", &o.recommender}, {"variant", &o.variant},
        {"measure", &o.measure},     {"neighbor_weighting", &o.weighting},
        {"fields", &o.fields},       {"seed", &o.seed},
        {"depth", &o.depth},         {"ks", &o.ks},
    };
    for (const auto& [key, value] : overrides) {
        if (!value->empty()) check(srec_config_set(config.get(), key, value->c_str()));
    }
}

fs::path out_dir(const Options& o)
{
    fs::path dir = o.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Failure{SREC_ERR_IO, "cannot create output directory '" + o.out + "'"};
    return dir;
}

void require_seed(const Options& o, const char* command)
{
    if (o.seed.empty() && o.config.empty()) {
        config_error(std::string(command) + " samples at random and needs --seed");
    }
}

void load_catalog(const Options& o, const Config& config, Catalog& catalog)
{
    if (o.corpus.empty() && o.articles.empty() && o.config.empty()) {
        config_error("no corpus given (--corpus DIR or --articles/--libraries)");
    }
    check(srec_catalog_load_config(config.get(), catalog.out()));
}

void cmd_ingest(const Options& o)
{
    Config config;
    make_config(o, config);
    Catalog catalog;
    load_catalog(o, config, catalog);
    if (o.textrank) check(srec_catalog_add_textrank(catalog.get(), config.get()));
    char* report = nullptr;
    check(srec_catalog_validate(catalog.get(), &report));
    const auto text = take(report);
    if (!o.out.empty()) {
        const auto dir = out_dir(o);
        check(srec_catalog_save(catalog.get(), dir.string().c_str(), o.overwrite));
        const auto path = dir / "validation.json";
        if (!o.overwrite && fs::exists(path)) {
            throw Failure{SREC_ERR_IO, "refusing to overwrite existing artifact '" + path.string() + "'"};
        }
        std::ofstream(path, std::ios::binary) << text << '\n';
    }
    std::cout << text << '\n';
}

void cmd_synth(const Options& o)
{
    if (o.seed.empty()) config_error("synth samples at random and needs --seed");
    std::uint64_t seed = 0;
    try {
        std::size_t used = 0;
        seed = std::stoull(o.seed, &used);
        if (used != o.seed.size() || o.seed[0] == '-') throw std::invalid_argument(o.seed);
    } catch (const std::exception&) {
        config_error("seed must be a non-negative integer, got '" + o.seed + "'");
    }
    std::optional<std::string> json;
    if (!o.config.empty()) json = json_arg(o.config);
    Catalog catalog;
    check(srec_catalog_synth(json ? json->c_str() : nullptr, seed, catalog.out()));
    const auto dir = out_dir(o);
    check(srec_catalog_save(catalog.get(), dir.string().c_str(), o.overwrite));
    std::cout << "wrote " << srec_catalog_article_count(catalog.get()) << " articles and "
              << srec_catalog_library_count(catalog.get()) << " libraries to " << dir.string() << '\n';
}

void cmd_make_testset(const Options& o)
{
    require_seed(o, "make-testset");
    Config config;
    make_config(o, config);
    Catalog catalog;
    load_catalog(o, config, catalog);
    TestSet testset;
    check(srec_testset_build(catalog.get(), config.get(), testset.out()));
    const auto dir = out_dir(o);
    check(srec_testset_save(testset.get(), (dir / "testset.json").string().c_str(), config.get(),
                            o.overwrite));
    check(srec_testset_save_qrels(testset.get(), (dir / "qrels.txt").string().c_str(), config.get(),
                                  o.overwrite));
    std::cout << srec_testset_set_count(testset.get()) << " sets, "
              << srec_testset_query_count(testset.get()) << " queries\n";
}

// Loads --testset and, unless a config file says otherwise, records its seed
// and scenario in the config so downstream artifacts share its provenance.
void load_testset(const Options& o, Config& config, TestSet& testset)
{
    if (o.testset.empty()) return;
    check(srec_testset_load(o.testset.c_str(), testset.out()));
    if (!o.config.empty()) return;
    if (o.seed.empty()) {
        check(srec_config_set(config.get(), "seed", std::to_string(srec_testset_seed(testset.get())).c_str()));
    }
    if (o.scenario.empty()) check(srec_config_set(config.get(), "scenario", srec_testset_scenario(testset.get())));
}

void cmd_cf_train(const Options& o)
{
    Config config;
    make_config(o, config);
    Catalog catalog;
    load_catalog(o, config, catalog);
    TestSet testset;
    load_testset(o, config, testset);
    Neighbors neighbors;
    check(srec_neighbors_train(catalog.get(), testset.get(), config.get(), neighbors.out()));
    const auto dir = out_dir(o);
    check(srec_neighbors_save(neighbors.get(), (dir / "neighbors.tsv").string().c_str(), config.get(),
                              o.overwrite));
    std::cout << srec_neighbors_item_count(neighbors.get()) << " items with neighbors\n";
}

void cmd_index(const Options& o)
{
    Config config;
    make_config(o, config);
    Catalog catalog;
    load_catalog(o, config, catalog);
    TestSet testset;
    load_testset(o, config, testset);
    Index index;
    check(srec_index_build(catalog.get(), testset.get(), config.get(), index.out()));
    const auto dir = out_dir(o);
    check(srec_index_save(index.get(), (dir / "index.json").string().c_str(), o.overwrite));
    std::cout << srec_index_doc_count(index.get()) << " documents indexed\n";
}

void cmd_recommend(const Options& o)
{
    Config config;
    make_config(o, config);
    Catalog catalog;
    load_catalog(o, config, catalog);
    TestSet testset;
    load_testset(o, config, testset);
    Neighbors neighbors;
    if (!o.neighbors.empty()) check(srec_neighbors_load(o.neighbors.c_str(), neighbors.out()));
    Run run;
    check(srec_recommend(catalog.get(), testset.get(), neighbors.get(), config.get(), run.out()));
    const auto dir = out_dir(o);
    check(srec_run_save(run.get(), (dir / "run.txt").string().c_str(), config.get(), o.overwrite));
    std::cout << srec_run_query_count(run.get()) << " queries answered\n";
}

std::vector<size_t> parse_cutoffs(const std::string& text)
{
    std::vector<size_t> ks;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            config_error("cutoffs must be a comma list of positive integers, got '" + text + "'");
        }
        ks.push_back(std::stoul(item));
    }
    return ks;
}

void cmd_evaluate(const Options& o)
{
    const auto ks = o.ks.empty() ? std::vector<size_t>{5, 10} : parse_cutoffs(o.ks);
    std::string metrics;
    if (!o.out.empty()) metrics = (out_dir(o) / "metrics.tsv").string();
    char* table = nullptr;
    check(srec_evaluate_files(o.run.c_str(), o.qrels.c_str(), ks.data(), ks.size(),
                              metrics.empty() ? nullptr : metrics.c_str(), o.overwrite, &table));
    std::cout << take(table);
}

void cmd_pipeline(const Options& o)
{
    require_seed(o, "pipeline");
    Config config;
    make_config(o, config);
    char* table = nullptr;
    check(srec_pipeline(config.get(), o.out.c_str(), o.overwrite, &table));
    std::cout << take(table);
}

void cmd_compare(const Options& o)
{
    std::vector<const char*> paths;
    for (const auto& f : o.files) paths.push_back(f.c_str());
    char* table = nullptr;
    check(srec_compare(paths.data(), paths.size(), o.metric.c_str(), &table));
    std::cout << take(table);
}

void corpus_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--corpus", o.corpus, "Directory with articles.jsonl and libraries.{csv,jsonl}");
    cmd->add_option("--articles", o.articles, "Articles jsonl file");
    cmd->add_option("--libraries", o.libraries, "User libraries file (csv or jsonl)");
}

void config_flag(CLI::App* cmd, Options& o)
{
    cmd->add_option("--config", o.config, "Experiment config: json file or inline json object");
}

void content_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--variant", o.variant, "Content variant: tfidf, nq, prf, bm25c");
    cmd->add_option("--fields", o.fields, "Comma list of fields; 'all' and '-field' supported");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Scientific literature recommendation experiments"};
    app.set_version_flag("--version", std::string(srec_version()));
    app.require_subcommand(1);
    Options o;

    auto* ingest = app.add_subcommand("ingest", "Validate a corpus and report field population");
    corpus_flags(ingest, o);
    config_flag(ingest, o);
    ingest->add_flag("--textrank", o.textrank, "Compute TextRank keywords from abstracts");
    ingest->add_option("--out", o.out, "Write the normalized corpus here");
    ingest->add_flag("--overwrite", o.overwrite, "Replace existing artifacts");

    auto* synth = app.add_subcommand("synth", "Generate a planted-topic synthetic corpus");
    synth->add_option("--config", o.config, "Generator parameters: json file or inline json");
    synth->add_option("--seed", o.seed, "Random seed")->required();
    synth->add_option("--out", o.out, "Output directory")->required();
    synth->add_flag("--overwrite", o.overwrite, "Replace existing artifacts");

    auto* make_testset = app.add_subcommand("make-testset", "Build article sets, queries and qrels");
    corpus_flags(make_testset, o);
    config_flag(make_testset, o);
    make_testset->add_option("--scenario", o.scenario, "groups, venues, publications or libraries");
    make_testset->add_option("--seed", o.seed, "Random seed");
    make_testset->add_option("--out", o.out, "Output directory")->required();
    make_testset->add_flag("--overwrite", o.overwrite, "Replace existing artifacts");

    auto* cf_train = app.add_subcommand("cf-train", "Compute item neighbor lists from user libraries");
    corpus_flags(cf_train, o);
    config_flag(cf_train, o);
    cf_train->add_option("--testset", o.testset, "Remove libraries that leak into this test set");
    cf_train->add_option("--measure", o.measure, "Similarity measure");
    cf_train->add_option("--out", o.out, "Output directory")->required();
    cf_train->add_flag("--overwrite", o.overwrite, "Replace existing artifacts");

    auto* index = app.add_subcommand("index", "Build and export the fielded inverted index");
    corpus_flags(index, o);
    config_flag(index, o);
    index->add_option("--testset", o.testset, "Index only this test set's articles");
    index->add_option("--fields", o.fields, "Comma list of fields; 'all' and '-field' supported");
    index->add_option("--out", o.out, "Output directory")->required();
    index->add_flag("--overwrite", o.overwrite, "Replace existing artifacts");

    auto* recommend = app.add_subcommand("recommend", "Rank the test set for every query");
    corpus_flags(recommend, o);
    config_flag(recommend, o);
    content_flags(recommend, o);
    recommend->add_option("--recommender", o.recommender, "content, cf or hybrid");
    recommend->add_option("--weighting", o.weighting, "Hybrid neighbor terms: similarity or unweighted");
    recommend->add_option("--testset", o.testset, "Test set json")->required();
    recommend->add_option("--neighbors", o.neighbors, "Neighbor tsv (cf and hybrid)");
    recommend->add_option("--depth", o.depth, "Results per query");
    recommend->add_option("--out", o.out, "Output directory")->required();
    recommend->add_flag("--overwrite", o.overwrite, "Replace existing artifacts");

    auto* evaluate = app.add_subcommand("evaluate", "Precision at k of a run against qrels");
    evaluate->add_option("--run", o.run, "Run file")->required();
    evaluate->add_option("--qrels", o.qrels, "Qrels file")->required();
    evaluate->add_option("--k", o.ks, "Comma list of cutoffs (default 5,10)");
    evaluate->add_option("--out", o.out, "Write metrics.tsv here");
    evaluate->add_flag("--overwrite", o.overwrite, "Replace existing artifacts");

    auto* pipeline = app.add_subcommand("pipeline", "Run every stage for one experiment config");
    corpus_flags(pipeline, o);
    config_flag(pipeline, o);
    content_flags(pipeline, o);
    pipeline->add_option("--scenario", o.scenario, "groups, venues, publications or libraries");
    pipeline->add_option("--recommender", o.recommender, "content, cf or hybrid");
    pipeline->add_option("--measure", o.measure, "Similarity measure");
    pipeline->add_option("--weighting", o.weighting, "Hybrid neighbor terms: similarity or unweighted");
    pipeline->add_option("--seed", o.seed, "Random seed");
    pipeline->add_option("--depth", o.depth, "Results per query");
    pipeline->add_option("--k", o.ks, "Comma list of cutoffs (default 5,10)");
    pipeline->add_option("--out", o.out, "Output directory")->required();
    pipeline->add_flag("--overwrite", o.overwrite, "Replace existing artifacts");

    auto* compare = app.add_subcommand("compare", "Compare metrics files side by side");
    compare->add_option("files", o.files, "metrics.tsv files")->required();
    compare->add_option("--metric", o.metric, "Metric row to compare");

    const std::vector<std::pair<CLI::App*, std::function<void(const Options&)>>> commands = {
        {ingest, cmd_ingest},       {synth, cmd_synth},         {make_testset, cmd_make_testset},
        {cf_train, cmd_cf_train},   {index, cmd_index},         {recommend, cmd_recommend},
        {evaluate, cmd_evaluate},   {pipeline, cmd_pipeline},   {compare, cmd_compare},
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return SREC_ERR_CONFIG;
    }

    try {
        for (const auto& [cmd, run] : commands) {
            if (cmd->parsed()) run(o);
        }
    } catch (const Failure& f) {
        std::string message = f.message;
        for (auto& c : message) {
            if (c == '\n' || c == '\r') c = ' ';
        }
        std::fprintf(stderr, "error: %s: %s\n", srec_status_name(f.status), message.c_str());
        return f.status;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return SREC_ERR_INTERNAL;
    }
    return 0;
}
