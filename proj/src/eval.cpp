#include "scholarrec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scholarrec/error.hpp"

namespace scholarrec {

namespace {

std::vector<std::string> split_ws(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (in >> field) out.push_back(field);
    return out;
}

bool blank_or_comment(const std::string& line)
{
    auto first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '#';
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for writing");
    return out;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for reading");
    return in;
}

std::string format_fixed(double value, int decimals)
{
    if (std::isnan(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

}  // namespace

std::size_t Qrels::judgement_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& [_, docs] : relevant) n += docs.size();
    return n;
}

bool Qrels::is_relevant(std::string_view query, std::string_view doc) const
{
    auto it = relevant.find(query);
    return it != relevant.end() && it->second.count(std::string(doc)) != 0;
}

void write_qrels(std::ostream& out, const Qrels& qrels)
{
    for (const auto& [query, docs] : qrels.relevant) {
        for (const auto& doc : docs) out << query << " 0 " << doc << " 1\n";
    }
}

void save_qrels(const std::filesystem::path& path, const Qrels& qrels, std::string_view header)
{
    auto out = open_output(path);
    out << header;
    write_qrels(out, qrels);
}

Qrels parse_qrels(std::istream& in, const std::string& source)
{
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        const auto at = source + ":" + std::to_string(line_no);
        auto f = split_ws(line);
        if (f.size() != 4) fail(ErrorCategory::parse, at + ": expected 'qid 0 docid rel'");
        long rel = 0;
        try {
            std::size_t used = 0;
            rel = std::stol(f[3], &used);
            if (used != f[3].size()) throw std::invalid_argument(f[3]);
        } catch (const std::exception&) {
            fail(ErrorCategory::parse, at + ": relevance must be an integer");
        }
        auto& docs = qrels.relevant[f[0]];
        if (rel > 0 && !docs.insert(f[2]).second) {
            fail(ErrorCategory::parse, at + ": document '" + f[2] + "' judged twice");
        }
    }
    return qrels;
}

Qrels load_qrels(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_qrels(in, path.string());
}

void write_run(std::ostream& out, const RankedRun& run)
{
    for (const auto& [query, list] : run.results) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            out << query << " Q0 " << list[i].id << ' ' << (i + 1) << ' '
                << format_fixed(list[i].score, 6) << ' ' << run.tag << '\n';
        }
    }
}

void save_run(const std::filesystem::path& path, const RankedRun& run, std::string_view header)
{
    auto out = open_output(path);
    out << header;
    write_run(out, run);
}

RankedRun parse_run(std::istream& in, const std::string& source)
{
    RankedRun run;
    bool tag_seen = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        const auto at = source + ":" + std::to_string(line_no);
        auto f = split_ws(line);
        if (f.size() != 6) fail(ErrorCategory::parse, at + ": expected 'qid Q0 docid rank score tag'");
        std::size_t rank = 0;
        double score = 0.0;
        try {
            std::size_t used = 0;
            rank = std::stoul(f[3], &used);
            if (used != f[3].size()) throw std::invalid_argument(f[3]);
            score = std::stod(f[4], &used);
            if (used != f[4].size()) throw std::invalid_argument(f[4]);
        } catch (const std::exception&) {
            fail(ErrorCategory::parse, at + ": bad rank or score");
        }
        auto& list = run.results[f[0]];
        if (rank != list.size() + 1) {
            fail(ErrorCategory::parse, at + ": rank " + f[3] + " for query '" + f[0] +
                                           "' where " + std::to_string(list.size() + 1) +
                                           " was expected");
        }
        list.push_back({f[2], score});
        if (!tag_seen) {
            run.tag = f[5];
            tag_seen = true;
        }
    }
    return run;
}

RankedRun load_run(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_run(in, path.string());
}

std::string_view mode_name(AveragingMode mode) noexcept
{
    return mode == AveragingMode::all_queries ? "all_queries" : "answered_only";
}

double query_precision_at_k(const RankedList& results, const std::set<std::string>& relevant,
                            std::size_t k)
{
    if (k < 1) fail(ErrorCategory::config, "precision cutoff k must be >= 1");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < results.size() && i < k; ++i) {
        hits += relevant.count(results[i].id);
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

double precision_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k, AveragingMode mode)
{
    if (k < 1) fail(ErrorCategory::config, "precision cutoff k must be >= 1");
    double sum = 0.0;
    std::size_t counted = 0;
    for (const auto& [query, relevant] : qrels.relevant) {
        auto it = run.results.find(query);
        const bool answered = it != run.results.end() && !it->second.empty();
        if (mode == AveragingMode::answered_only && !answered) continue;
        ++counted;
        if (answered) sum += query_precision_at_k(it->second, relevant, k);
    }
    if (counted == 0) {
        if (mode == AveragingMode::answered_only) {
            fail(ErrorCategory::data, "no judged query has results; answered_only P@k is undefined");
        }
        return 0.0;
    }
    return sum / static_cast<double>(counted);
}

const MetricRow* MetricsTable::find(std::string_view metric, AveragingMode mode) const
{
    for (const auto& row : rows) {
        if (row.metric == metric && row.mode == mode) return &row;
    }
    return nullptr;
}

MetricsTable evaluate(const RankedRun& run, const Qrels& qrels, std::span<const std::size_t> ks)
{
    MetricsTable table;
    table.queries = qrels.query_count();
    for (const auto& [query, _] : qrels.relevant) {
        auto it = run.results.find(query);
        if (it != run.results.end() && !it->second.empty()) ++table.answered;
    }
    for (auto k : ks) {
        const std::string metric = "P_" + std::to_string(k);
        for (auto mode : {AveragingMode::all_queries, AveragingMode::answered_only}) {
            MetricRow row{metric, mode, 0.0, true};
            if (mode == AveragingMode::answered_only && table.answered == 0) {
                row.value = std::nan("");
                row.defined = false;
            } else {
                row.value = precision_at_k(run, qrels, k, mode);
            }
            table.rows.push_back(row);
        }
    }
    return table;
}

std::string MetricsTable::to_tsv() const
{
    std::ostringstream out;
    out << "num_q\tall_queries\t" << queries << '\n';
    out << "num_q\tanswered_only\t" << answered << '\n';
    for (const auto& row : rows) {
        out << row.metric << '\t' << mode_name(row.mode) << '\t' << format_fixed(row.value, 4) << '\n';
    }
    return out.str();
}

std::string MetricsTable::to_pretty() const
{
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-14s %10s\n", "metric", "mode", "value");
    out << line;
    std::snprintf(line, sizeof line, "%-10s %-14s %10zu\n", "num_q", "all_queries", queries);
    out << line;
    std::snprintf(line, sizeof line, "%-10s %-14s %10zu\n", "num_q", "answered_only", answered);
    out << line;
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%-10s %-14s %10s\n", row.metric.c_str(),
                      std::string(mode_name(row.mode)).c_str(), format_fixed(row.value, 4).c_str());
        out << line;
    }
    return out.str();
}

MetricsTable parse_metrics(std::istream& in, const std::string& source)
{
    MetricsTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        const auto at = source + ":" + std::to_string(line_no);
        auto f = split_ws(line);
        if (f.size() != 3) fail(ErrorCategory::parse, at + ": expected 'metric<TAB>mode<TAB>value'");
        AveragingMode mode;
        if (f[1] == "all_queries") {
            mode = AveragingMode::all_queries;
        } else if (f[1] == "answered_only") {
            mode = AveragingMode::answered_only;
        } else {
            fail(ErrorCategory::parse, at + ": unknown averaging mode '" + f[1] + "'");
        }
        double value = 0.0;
        try {
            value = std::stod(f[2]);
        } catch (const std::exception&) {
            fail(ErrorCategory::parse, at + ": bad value '" + f[2] + "'");
        }
        if (f[0] == "num_q") {
            (mode == AveragingMode::all_queries ? table.queries : table.answered) =
                static_cast<std::size_t>(value);
            continue;
        }
        table.rows.push_back({f[0], mode, value, !std::isnan(value)});
    }
    return table;
}

}  // namespace scholarrec
