#include "scholarrec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scholarrec/error.hpp"
#include "scholarrec/parallel.hpp"

namespace scholarrec {

using nlohmann::json;

std::string_view recommender_name(RecommenderKind kind) noexcept
{
    switch (kind) {
        case RecommenderKind::content: return "content";
        case RecommenderKind::cf: return "cf";
        case RecommenderKind::hybrid: return "hybrid";
    }
    return "?";
}

RecommenderKind parse_recommender(std::string_view name)
{
    for (auto k : {RecommenderKind::content, RecommenderKind::cf, RecommenderKind::hybrid}) {
        if (recommender_name(k) == name) return k;
    }
    fail(ErrorCategory::config, "unknown recommender '" + std::string(name) + "'");
}

HybridConfig ExperimentConfig::hybrid() const
{
    auto h = hybrid_defaults(content);
    if (neighbor_weighting) h.neighbor_weighting = *neighbor_weighting;
    h.include_self_id = include_self_id;
    return h;
}

void ExperimentConfig::validate() const
{
    if (!seed) fail(ErrorCategory::config, "a seed is required (--seed)");
    content.validate();
    cf.validate();
    testset.validate();
    if (recommender == RecommenderKind::hybrid) hybrid().validate();
    if (depth < 1) fail(ErrorCategory::config, "depth must be >= 1");
    if (ks.empty()) fail(ErrorCategory::config, "at least one precision cutoff is required");
    for (auto k : ks) {
        if (k < 1) fail(ErrorCategory::config, "precision cutoffs must be >= 1");
    }
    if (articles.empty()) fail(ErrorCategory::config, "no articles file configured (--corpus)");
    if (!std::filesystem::is_regular_file(articles)) {
        fail(ErrorCategory::config, "articles file '" + articles.string() + "' does not exist");
    }
    if (libraries.empty()) fail(ErrorCategory::config, "no libraries file configured (--corpus)");
    if (!std::filesystem::is_regular_file(libraries)) {
        fail(ErrorCategory::config, "libraries file '" + libraries.string() + "' does not exist");
    }
}

std::string ExperimentConfig::to_json() const
{
    json j;
    j["scenario"] = scenario_name(scenario);
    j["recommender"] = recommender_name(recommender);
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["content"] = json::parse(content.to_json());
    j["cf"] = json::parse(cf.to_json());
    j["hybrid"] = {{"neighbor_weighting", weighting_name(hybrid().neighbor_weighting)},
                   {"include_self_id", include_self_id}};
    j["testset"] = {{"min_set_size", testset.min_set_size},
                    {"max_set_size", testset.max_set_size},
                    {"queries_per_set", testset.queries_per_set},
                    {"sample_fraction", testset.sample_fraction}};
    j["textrank"] = {{"window", textrank.window},
                     {"damping", textrank.damping},
                     {"top_n", textrank.top_n},
                     {"max_iterations", textrank.max_iterations},
                     {"tolerance", textrank.tolerance}};
    j["depth"] = depth;
    j["ks"] = ks;
    j["articles"] = articles.generic_string();
    j["libraries"] = libraries.generic_string();
    return j.dump();
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text)
{
    ExperimentConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCategory::config, std::string("experiment config: ") + e.what());
    }
    try {
        if (j.contains("scenario")) c.scenario = parse_scenario(j["scenario"].get<std::string>());
        if (j.contains("recommender")) {
            c.recommender = parse_recommender(j["recommender"].get<std::string>());
        }
        if (j.contains("seed") && !j["seed"].is_null()) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("content")) c.content = ContentConfig::from_json(j["content"].dump());
        if (j.contains("cf")) c.cf = CfParams::from_json(j["cf"].dump());
        if (j.contains("hybrid")) {
            const auto& h = j["hybrid"];
            if (h.contains("neighbor_weighting")) {
                c.neighbor_weighting = parse_weighting(h["neighbor_weighting"].get<std::string>());
            }
            c.include_self_id = h.value("include_self_id", c.include_self_id);
        }
        if (j.contains("testset")) {
            const auto& t = j["testset"];
            c.testset.min_set_size = t.value("min_set_size", c.testset.min_set_size);
            c.testset.max_set_size = t.value("max_set_size", c.testset.max_set_size);
            c.testset.queries_per_set = t.value("queries_per_set", c.testset.queries_per_set);
            c.testset.sample_fraction = t.value("sample_fraction", c.testset.sample_fraction);
        }
        if (j.contains("textrank")) {
            const auto& t = j["textrank"];
            c.textrank.window = t.value("window", c.textrank.window);
            c.textrank.damping = t.value("damping", c.textrank.damping);
            c.textrank.top_n = t.value("top_n", c.textrank.top_n);
            c.textrank.max_iterations = t.value("max_iterations", c.textrank.max_iterations);
            c.textrank.tolerance = t.value("tolerance", c.textrank.tolerance);
        }
        c.depth = j.value("depth", c.depth);
        if (j.contains("ks")) c.ks = j["ks"].get<std::vector<std::size_t>>();
        if (j.contains("articles")) c.articles = j["articles"].get<std::string>();
        if (j.contains("libraries")) c.libraries = j["libraries"].get<std::string>();
    } catch (const json::exception& e) {
        fail(ErrorCategory::config, std::string("experiment config: ") + e.what());
    }
    return c;
}

std::string content_hash(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string ExperimentConfig::hash() const
{
    return content_hash(to_json());
}

std::string artifact_header(std::string_view artifact, const ExperimentConfig& config,
                            std::string_view extra)
{
    std::string h;
    h += "# scholarrec " + std::string(artifact) + "\n";
    h += "# config_hash=" + config.hash() + "\n";
    h += "# seed=" + (config.seed ? std::to_string(*config.seed) : std::string("none")) + "\n";
    h += "# config=" + config.to_json() + "\n";
    h += extra;
    return h;
}

void set_corpus_dir(ExperimentConfig& config, const std::filesystem::path& dir)
{
    config.articles = dir / "articles.jsonl";
    auto csv = dir / "libraries.csv";
    auto jsonl = dir / "libraries.jsonl";
    config.libraries = !std::filesystem::exists(csv) && std::filesystem::exists(jsonl) ? jsonl : csv;
}

Catalog load_corpus(const std::filesystem::path& articles, const std::filesystem::path& libraries)
{
    return make_catalog(load_articles(articles), load_libraries(libraries));
}

Catalog with_textrank(Catalog catalog, const TextRankOptions& options)
{
    for (auto& [_, a] : catalog.articles) {
        if (a.textrank_keywords.empty() && a.abstract_text && !a.abstract_text->empty()) {
            a.textrank_keywords = textrank_keywords(*a.abstract_text, options);
        }
    }
    return catalog;
}

Catalog prepare_catalog(const ExperimentConfig& config)
{
    auto catalog = load_corpus(config.articles, config.libraries);
    const auto& fields = config.content.fields_used;
    if (std::find(fields.begin(), fields.end(), FieldName::textrank_keyword) != fields.end()) {
        catalog = with_textrank(std::move(catalog), config.textrank);
    }
    return catalog;
}

NeighborMap train_for_testset(const Catalog& catalog, const TestSet& testset, const CfParams& params)
{
    auto training = derive_training(catalog.libraries, testset, catalog);
    return train_neighbors(training, params);
}

RankedRun recommend_testset(const Catalog& catalog, const TestSet& testset,
                            const ExperimentConfig& config, const NeighborMap* neighbors)
{
    if (config.recommender != RecommenderKind::content && !neighbors) {
        fail(ErrorCategory::config, "the cf and hybrid recommenders need a neighbor map");
    }
    const auto ids = testset.article_ids();
    std::vector<Article> articles;
    articles.reserve(ids.size());
    for (const auto& id : ids) {
        const auto* a = catalog.find(id);
        if (!a) fail(ErrorCategory::data, "test article '" + id + "' is missing from the catalog");
        articles.push_back(*a);
    }

    std::optional<FieldedIndex> index;
    if (config.recommender != RecommenderKind::cf) {
        index = FieldedIndex::build(articles, config.content.fields_used);
        if (config.recommender == RecommenderKind::hybrid) index = augment_index(*index, *neighbors);
    }
    const std::set<std::string, std::less<>> candidates(ids.begin(), ids.end());
    const auto hybrid = config.hybrid();

    std::vector<RankedList> results(testset.queries.size());
    parallel_blocks(testset.queries.size(), worker_count(),
                    [&](std::size_t begin, std::size_t end, std::size_t) {
                        for (std::size_t i = begin; i < end; ++i) {
                            const auto& q = testset.queries[i];
                            const Article& article = *catalog.find(q.article_id);
                            switch (config.recommender) {
                                case RecommenderKind::content:
                                    results[i] = recommend(*index, article, config.content, config.depth);
                                    break;
                                case RecommenderKind::cf:
                                    results[i] =
                                        recommend_cf(*neighbors, q.article_id, candidates, config.depth);
                                    break;
                                case RecommenderKind::hybrid:
                                    results[i] = recommend_hybrid(*index, article, *neighbors, hybrid,
                                                                  config.depth);
                                    break;
                            }
                        }
                    });

    RankedRun run;
    run.tag = std::string(recommender_name(config.recommender));
    if (config.recommender != RecommenderKind::cf) {
        run.tag += "-" + std::string(variant_name(config.content.variant));
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        run.results[testset.queries[i].article_id] = std::move(results[i]);
    }
    return run;
}

void ensure_writable(const std::filesystem::path& path, bool overwrite)
{
    if (!overwrite && std::filesystem::exists(path)) {
        fail(ErrorCategory::io, "refusing to overwrite existing artifact '" + path.string() + "'");
    }
}

namespace {

void write_text(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for writing");
    out << text;
}

}  // namespace

void save_testset_artifact(const std::filesystem::path& path, const TestSet& testset,
                           const ExperimentConfig& config)
{
    auto j = json::parse(testset.to_json());
    j["provenance"] = {{"config", json::parse(config.to_json())},
                       {"config_hash", config.hash()},
                       {"seed", config.seed ? json(*config.seed) : json(nullptr)}};
    write_text(path, j.dump(1) + "\n");
}

std::string qrels_hash(const Qrels& qrels)
{
    std::ostringstream out;
    write_qrels(out, qrels);
    return content_hash(out.str());
}

void save_metrics_artifact(const std::filesystem::path& path, const MetricsTable& table,
                           std::string_view header, std::string_view qrels_hash,
                           std::string_view label)
{
    std::string text(header);
    text += "# qrels_hash=" + std::string(qrels_hash) + "\n";
    text += "# label=" + std::string(label) + "\n";
    write_text(path, text + table.to_tsv());
}

PipelineArtifacts run_pipeline(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                               bool overwrite)
{
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCategory::io, "cannot create output directory '" + out_dir.string() + "'");

    PipelineArtifacts out;
    out.testset = out_dir / "testset.json";
    out.qrels = out_dir / "qrels.txt";
    out.run = out_dir / "run.txt";
    out.metrics = out_dir / "metrics.tsv";
    if (config.recommender != RecommenderKind::content) out.neighbors = out_dir / "neighbors.tsv";
    for (const auto* p : {&out.testset, &out.qrels, &out.run, &out.metrics, &out.neighbors}) {
        if (!p->empty()) ensure_writable(*p, overwrite);
    }

    const auto catalog = prepare_catalog(config);

    const auto testset = build_testset(catalog, config.scenario, *config.seed, config.testset);
    const auto header = [&](std::string_view artifact, std::string_view extra = {}) {
        return artifact_header(artifact, config, extra);
    };
    save_testset_artifact(out.testset, testset, config);

    const auto qrels = make_qrels(testset);
    const auto truth_hash = qrels_hash(qrels);
    save_qrels(out.qrels, qrels, header("qrels", "# qrels_hash=" + truth_hash + "\n"));

    std::optional<NeighborMap> neighbors;
    if (config.recommender != RecommenderKind::content) {
        save_neighbors(out.neighbors, train_for_testset(catalog, testset, config.cf),
                       header("neighbors"));
        // rank from the exported form so staged CLI runs give identical output
        neighbors = load_neighbors(out.neighbors);
    }

    const auto run = recommend_testset(catalog, testset, config, neighbors ? &*neighbors : nullptr);
    save_run(out.run, run, header("run"));

    out.table = evaluate(run, qrels, config.ks);
    save_metrics_artifact(out.metrics, out.table, header("metrics"), truth_hash, run.tag);
    return out;
}

MetricsFile load_metrics_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    MetricsFile file;
    file.path = path;
    file.label = path.parent_path().filename().string();
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("# qrels_hash=", 0) == 0) file.qrels_hash = line.substr(13);
        if (line.rfind("# label=", 0) == 0) file.label = line.substr(8);
    }
    std::istringstream body(text);
    file.table = parse_metrics(body, path.string());
    return file;
}

std::string compare_runs(std::span<const std::filesystem::path> metrics_files, std::string_view metric)
{
    if (metrics_files.size() < 2) {
        fail(ErrorCategory::config, "compare needs at least two metrics files");
    }
    std::vector<MetricsFile> files;
    for (const auto& p : metrics_files) files.push_back(load_metrics_file(p));
    for (const auto& f : files) {
        if (f.qrels_hash.empty()) {
            fail(ErrorCategory::data, "'" + f.path.string() + "' carries no qrels provenance hash");
        }
        if (f.qrels_hash != files.front().qrels_hash) {
            fail(ErrorCategory::data, "qrels hash mismatch: '" + f.path.string() +
                                          "' was evaluated against different ground truth");
        }
    }

    auto value_of = [&](const MetricsFile& f, AveragingMode mode) {
        const auto* row = f.table.find(metric, mode);
        if (!row) {
            fail(ErrorCategory::data, "'" + f.path.string() + "' has no " + std::string(metric) + " row");
        }
        return row->value;
    };
    auto cell = [](double v) {
        if (std::isnan(v)) return std::string("nan");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", v);
        return std::string(buf);
    };
    auto delta = [](double v) {
        char buf[32];
        if (std::isnan(v)) return std::string("nan");
        std::snprintf(buf, sizeof buf, "%+.4f", v);
        return std::string(buf);
    };

    std::ostringstream out;
    out << "metric\tmode";
    for (const auto& f : files) out << '\t' << f.label;
    for (std::size_t i = 1; i < files.size(); ++i) out << "\tdelta(" << files[i].label << ")";
    out << '\n';
    for (auto mode : {AveragingMode::all_queries, AveragingMode::answered_only}) {
        out << metric << '\t' << mode_name(mode);
        const double base = value_of(files.front(), mode);
        for (const auto& f : files) out << '\t' << cell(value_of(f, mode));
        for (std::size_t i = 1; i < files.size(); ++i) out << '\t' << delta(value_of(files[i], mode) - base);
        out << '\n';
    }
    return out.str();
}

}  // namespace scholarrec
