#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scholarrec/cf.hpp"
#include "scholarrec/contentrec.hpp"
#include "scholarrec/datasets.hpp"
#include "scholarrec/eval.hpp"
#include "scholarrec/hybrid.hpp"

namespace scholarrec {

enum class RecommenderKind { content, cf, hybrid };

std::string_view recommender_name(RecommenderKind kind) noexcept;
RecommenderKind parse_recommender(std::string_view name);

struct ExperimentConfig {
    Scenario scenario = Scenario::groups;
    RecommenderKind recommender = RecommenderKind::hybrid;
    std::optional<std::uint64_t> seed;
    ContentConfig content;
    CfParams cf;
    std::optional<NeighborWeighting> neighbor_weighting;  // unset: variant default
    bool include_self_id = true;
    TestSetOptions testset;
    TextRankOptions textrank;
    std::size_t depth = 10;               // results written per query
    std::vector<std::size_t> ks{5, 10};   // precision cutoffs reported
    std::filesystem::path articles;
    std::filesystem::path libraries;

    HybridConfig hybrid() const;
    /// Throws config errors, including a missing seed or unreadable corpus.
    void validate() const;

    /// Canonical form (sorted keys); the provenance hash is taken over it.
    std::string to_json() const;
    static ExperimentConfig from_json(std::string_view text);
    std::string hash() const;
};

/// 64-bit FNV-1a, hex encoded.
std::string content_hash(std::string_view bytes);

/// `# key=value` comment lines stamped on every artifact.
std::string artifact_header(std::string_view artifact, const ExperimentConfig& config,
                            std::string_view extra = {});

/// Test set json with a `provenance` object carrying the config, its hash
/// and the seed (json has no comment syntax).
void save_testset_artifact(const std::filesystem::path& path, const TestSet& testset,
                           const ExperimentConfig& config);

/// Hash of the canonical qrels text; metrics files carry it so that only
/// runs judged against the same ground truth are compared.
std::string qrels_hash(const Qrels& qrels);

void save_metrics_artifact(const std::filesystem::path& path, const MetricsTable& table,
                           std::string_view header, std::string_view qrels_hash,
                           std::string_view label);

/// Resolves DIR/articles.jsonl and DIR/libraries.{csv,jsonl}.
void set_corpus_dir(ExperimentConfig& config, const std::filesystem::path& dir);

Catalog load_corpus(const std::filesystem::path& articles, const std::filesystem::path& libraries);

/// Computes TextRank keywords for articles that have an abstract but no
/// keywords yet.
Catalog with_textrank(Catalog catalog, const TextRankOptions& options);

/// Loads the configured corpus, adding TextRank keywords when the content
/// fields use them.
Catalog prepare_catalog(const ExperimentConfig& config);

NeighborMap train_for_testset(const Catalog& catalog, const TestSet& testset, const CfParams& params);

/// Runs the configured recommender for every test query. `neighbors` is
/// required for cf and hybrid. Queries are processed in parallel; results
/// are merged by query id.
RankedRun recommend_testset(const Catalog& catalog, const TestSet& testset,
                            const ExperimentConfig& config, const NeighborMap* neighbors);

struct PipelineArtifacts {
    std::filesystem::path testset;
    std::filesystem::path qrels;
    std::filesystem::path neighbors;  // empty for content runs
    std::filesystem::path run;
    std::filesystem::path metrics;
    MetricsTable table;
};

/// ingest -> test set -> training -> recommend -> evaluate. Artifacts are
/// write-once unless `overwrite` is set.
PipelineArtifacts run_pipeline(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                               bool overwrite = false);

/// Refuses to replace an existing artifact unless overwrite is set.
void ensure_writable(const std::filesystem::path& path, bool overwrite);

struct MetricsFile {
    std::filesystem::path path;
    std::string label;
    std::string qrels_hash;
    MetricsTable table;
};

MetricsFile load_metrics_file(const std::filesystem::path& path);

/// Side-by-side P@k per file with deltas against the first file. All files
/// must carry the same qrels hash.
std::string compare_runs(std::span<const std::filesystem::path> metrics_files,
                         std::string_view metric = "P_5");

}  // namespace scholarrec
