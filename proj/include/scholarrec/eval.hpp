#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scholarrec/index.hpp"

namespace scholarrec {

/// Binary relevance judgements: query id -> relevant doc ids.
struct Qrels {
    std::map<std::string, std::set<std::string>, std::less<>> relevant;

    std::size_t query_count() const noexcept { return relevant.size(); }
    std::size_t judgement_count() const noexcept;
    bool is_relevant(std::string_view query, std::string_view doc) const;
};

/// One ranked list per query. Queries whose model produced nothing may be
/// present with an empty list or absent altogether.
struct RankedRun {
    std::map<std::string, RankedList, std::less<>> results;
    std::string tag = "scholarrec";

    bool operator==(const RankedRun&) const = default;
};

/// `qid 0 docid rel` lines.
void write_qrels(std::ostream& out, const Qrels& qrels);
void save_qrels(const std::filesystem::path& path, const Qrels& qrels, std::string_view header = {});
Qrels parse_qrels(std::istream& in, const std::string& source = "<stream>");
Qrels load_qrels(const std::filesystem::path& path);

/// `qid Q0 docid rank score tag` lines, score with six decimals.
void write_run(std::ostream& out, const RankedRun& run);
void save_run(const std::filesystem::path& path, const RankedRun& run, std::string_view header = {});
RankedRun parse_run(std::istream& in, const std::string& source = "<stream>");
RankedRun load_run(const std::filesystem::path& path);

enum class AveragingMode { all_queries, answered_only };

std::string_view mode_name(AveragingMode mode) noexcept;

/// Relevant docs in the first k results divided by k.
double query_precision_at_k(const RankedList& results, const std::set<std::string>& relevant,
                            std::size_t k);

/// Macro-averaged P@k. all_queries averages over every judged query
/// (missing or empty results score 0); answered_only averages over judged
/// queries that have at least one result and fails when there are none.
double precision_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k, AveragingMode mode);

struct MetricRow {
    std::string metric;
    AveragingMode mode;
    double value;
    bool defined = true;  // false for answered_only with nothing answered
};

struct MetricsTable {
    std::vector<MetricRow> rows;
    std::size_t queries = 0;
    std::size_t answered = 0;

    const MetricRow* find(std::string_view metric, AveragingMode mode) const;
    std::string to_tsv() const;
    std::string to_pretty() const;
};

MetricsTable evaluate(const RankedRun& run, const Qrels& qrels, std::span<const std::size_t> ks);

/// Reads `metric \t mode \t value` rows (comment lines skipped).
MetricsTable parse_metrics(std::istream& in, const std::string& source = "<stream>");

}  // namespace scholarrec
