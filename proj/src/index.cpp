#include "scholarrec/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scholarrec/corpus.hpp"
#include "scholarrec/error.hpp"

namespace scholarrec {

using nlohmann::json;

void FieldedQuery::add(FieldName field, std::string term, double weight)
{
    auto it = std::find_if(fields_.begin(), fields_.end(),
                           [&](const FieldQuery& f) { return f.field == field; });
    if (it == fields_.end()) {
        fields_.push_back({field, {}});
        it = std::prev(fields_.end());
    }
    for (auto& tw : it->terms) {
        if (tw.term == term) {
            tw.weight += weight;
            return;
        }
    }
    it->terms.push_back({std::move(term), weight});
}

bool FieldedQuery::empty() const noexcept
{
    return term_count() == 0;
}

std::size_t FieldedQuery::term_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& f : fields_) n += f.terms.size();
    return n;
}

std::size_t FieldedQuery::populated_field_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(
        fields_.begin(), fields_.end(), [](const FieldQuery& f) { return !f.terms.empty(); }));
}

const FieldQuery* FieldedQuery::find(FieldName field) const noexcept
{
    for (const auto& f : fields_) {
        if (f.field == field) return &f;
    }
    return nullptr;
}

bool FieldedQuery::contains(FieldName field, std::string_view term) const noexcept
{
    const auto* f = find(field);
    if (!f) return false;
    return std::any_of(f->terms.begin(), f->terms.end(),
                       [&](const TermWeight& tw) { return tw.term == term; });
}

bool ranked_before(const ScoredDoc& a, const ScoredDoc& b) noexcept
{
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
}

std::vector<TermCount> count_terms(std::span<const std::string> terms)
{
    std::map<std::string, std::uint32_t> counts;
    for (const auto& t : terms) ++counts[t];
    std::vector<TermCount> out;
    out.reserve(counts.size());
    for (auto& [term, tf] : counts) out.push_back({term, tf});
    return out;
}

FieldedIndex FieldedIndex::build(std::span<const Article> articles, std::span<const FieldName> fields)
{
    FieldedIndex index;
    std::vector<const Article*> sorted;
    sorted.reserve(articles.size());
    for (const auto& a : articles) sorted.push_back(&a);
    std::sort(sorted.begin(), sorted.end(),
              [](const Article* x, const Article* y) { return x->id < y->id; });
    for (const auto* a : sorted) {
        auto number = static_cast<DocNumber>(index.doc_ids_.size());
        if (!index.doc_numbers_.emplace(a->id, number).second) {
            fail(ErrorCategory::data, "duplicate article id '" + a->id + "' in index input");
        }
        index.doc_ids_.push_back(a->id);
    }
    for (auto field : fields) {
        if (field == FieldName::cf) {
            fail(ErrorCategory::config, "the cf field is added by hybrid augmentation only");
        }
        if (index.has_field(field)) continue;
        const auto spec = field_spec(field);
        std::vector<std::vector<TermCount>> forward(sorted.size());
        for (std::size_t d = 0; d < sorted.size(); ++d) {
            auto values = field_values(*sorted[d], field);
            forward[d] = count_terms(analyze(spec, values));
        }
        index.index_field(field, std::move(forward));
    }
    return index;
}

void FieldedIndex::add_raw_field(FieldName field,
                                 const std::vector<std::vector<std::string>>& per_doc_terms)
{
    if (has_field(field)) {
        fail(ErrorCategory::data, "field '" + std::string(field_name(field)) + "' already indexed");
    }
    if (per_doc_terms.size() != doc_ids_.size()) {
        fail(ErrorCategory::internal, "per-document term lists do not match the index size");
    }
    std::vector<std::vector<TermCount>> forward(per_doc_terms.size());
    for (std::size_t d = 0; d < per_doc_terms.size(); ++d) {
        forward[d] = count_terms(per_doc_terms[d]);
    }
    index_field(field, std::move(forward));
}

void FieldedIndex::index_field(FieldName field, std::vector<std::vector<TermCount>> forward)
{
    FieldData data;
    data.lengths.assign(forward.size(), 0);
    std::uint64_t total = 0;
    for (std::size_t d = 0; d < forward.size(); ++d) {
        std::uint32_t length = 0;
        for (const auto& tc : forward[d]) {
            data.postings[tc.term].push_back({static_cast<DocNumber>(d), tc.tf});
            length += tc.tf;
        }
        data.lengths[d] = length;
        if (length > 0) {
            ++data.doc_count;
            total += length;
        }
    }
    data.avg_length = data.doc_count == 0 ? 0.0
                                          : static_cast<double>(total) /
                                                static_cast<double>(data.doc_count);
    data.forward = std::move(forward);
    fields_[field] = std::move(data);
}

const FieldedIndex::FieldData* FieldedIndex::field_data(FieldName field) const noexcept
{
    auto it = fields_.find(field);
    return it == fields_.end() ? nullptr : &it->second;
}

std::optional<DocNumber> FieldedIndex::doc_number(std::string_view id) const
{
    auto it = doc_numbers_.find(std::string(id));
    if (it == doc_numbers_.end()) return std::nullopt;
    return it->second;
}

std::vector<FieldName> FieldedIndex::fields() const
{
    std::vector<FieldName> out;
    for (const auto& [f, _] : fields_) out.push_back(f);
    return out;
}

std::span<const Posting> FieldedIndex::postings(FieldName field, std::string_view term) const
{
    const auto* data = field_data(field);
    if (!data) return {};
    auto it = data->postings.find(std::string(term));
    if (it == data->postings.end()) return {};
    return it->second;
}

std::uint32_t FieldedIndex::doc_freq(FieldName field, std::string_view term) const
{
    return static_cast<std::uint32_t>(postings(field, term).size());
}

std::uint32_t FieldedIndex::term_frequency(FieldName field, std::string_view term,
                                           DocNumber doc) const
{
    auto terms = doc_terms(field, doc);
    auto it = std::lower_bound(terms.begin(), terms.end(), term,
                               [](const TermCount& tc, std::string_view t) { return tc.term < t; });
    return it != terms.end() && it->term == term ? it->tf : 0;
}

std::uint32_t FieldedIndex::field_length(FieldName field, DocNumber doc) const
{
    const auto* data = field_data(field);
    return data ? data->lengths.at(doc) : 0;
}

std::uint32_t FieldedIndex::doc_count(FieldName field) const
{
    const auto* data = field_data(field);
    return data ? data->doc_count : 0;
}

double FieldedIndex::avg_field_length(FieldName field) const
{
    const auto* data = field_data(field);
    return data ? data->avg_length : 0.0;
}

std::size_t FieldedIndex::vocabulary_size(FieldName field) const
{
    const auto* data = field_data(field);
    return data ? data->postings.size() : 0;
}

std::span<const TermCount> FieldedIndex::doc_terms(FieldName field, DocNumber doc) const
{
    const auto* data = field_data(field);
    if (!data) return {};
    return data->forward.at(doc);
}

std::string FieldedIndex::to_json() const
{
    json j;
    j["format"] = "scholarrec-index";
    j["format_version"] = kFormatVersion;
    j["docs"] = doc_ids_;
    json fields_json = json::array();
    for (const auto& [field, data] : fields_) {
        json docs = json::array();
        for (const auto& terms : data.forward) {
            json row = json::array();
            for (const auto& tc : terms) row.push_back(json::array({tc.term, tc.tf}));
            docs.push_back(std::move(row));
        }
        fields_json.push_back({{"name", field_name(field)}, {"doc_terms", std::move(docs)}});
    }
    j["fields"] = std::move(fields_json);
    return j.dump();
}

FieldedIndex FieldedIndex::from_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCategory::parse, std::string("index snapshot: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "scholarrec-index") {
            fail(ErrorCategory::parse, "not an index snapshot");
        }
        auto version = j.at("format_version").get<int>();
        if (version != kFormatVersion) {
            fail(ErrorCategory::parse,
                 "unsupported index snapshot version " + std::to_string(version));
        }
        FieldedIndex index;
        for (const auto& id : j.at("docs")) {
            auto number = static_cast<DocNumber>(index.doc_ids_.size());
            index.doc_ids_.push_back(id.get<std::string>());
            if (!index.doc_numbers_.emplace(index.doc_ids_.back(), number).second) {
                fail(ErrorCategory::parse, "index snapshot: duplicate doc id");
            }
        }
        for (const auto& f : j.at("fields")) {
            auto name = parse_field_name(f.at("name").get<std::string>());
            if (!name) fail(ErrorCategory::parse, "index snapshot: unknown field");
            const auto& docs = f.at("doc_terms");
            if (docs.size() != index.doc_ids_.size()) {
                fail(ErrorCategory::parse, "index snapshot: field row count mismatch");
            }
            std::vector<std::vector<TermCount>> forward;
            forward.reserve(docs.size());
            for (const auto& row : docs) {
                std::vector<TermCount> terms;
                for (const auto& pair : row) {
                    terms.push_back({pair.at(0).get<std::string>(), pair.at(1).get<std::uint32_t>()});
                }
                forward.push_back(std::move(terms));
            }
            index.index_field(*name, std::move(forward));
        }
        return index;
    } catch (const json::exception& e) {
        fail(ErrorCategory::parse, std::string("index snapshot: ") + e.what());
    }
}

void FieldedIndex::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for writing");
    out << to_json() << '\n';
}

FieldedIndex FieldedIndex::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for reading");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

double tfidf_idf(std::uint32_t docs_in_field, std::uint32_t doc_freq)
{
    return 1.0 + std::log(static_cast<double>(docs_in_field) / (static_cast<double>(doc_freq) + 1.0));
}

double bm25_idf(std::uint32_t docs_in_field, std::uint32_t doc_freq)
{
    const double n = docs_in_field;
    const double df = doc_freq;
    return std::max(0.0, std::log((n - df + 0.5) / (df + 0.5)));
}

namespace {

double tfidf_term(double weight, std::uint32_t tf, double idf, std::uint32_t length)
{
    return weight * std::sqrt(static_cast<double>(tf)) * idf * idf /
           std::sqrt(static_cast<double>(length));
}

double bm25_term(double weight, std::uint32_t tf, double idf, std::uint32_t length, double avg_length,
                 const Bm25Params& p)
{
    const double f = tf;
    const double norm = 1.0 - p.b + p.b * static_cast<double>(length) / avg_length;
    return weight * idf * f * (p.k1 + 1.0) / (f + p.k1 * norm);
}

DocNumber require_doc(const FieldedIndex& index, std::string_view doc)
{
    auto number = index.doc_number(doc);
    if (!number) fail(ErrorCategory::data, "unknown document '" + std::string(doc) + "'");
    return *number;
}

}  // namespace

double tfidf_score(const FieldedIndex& index, const FieldedQuery& query, std::string_view doc)
{
    const DocNumber d = require_doc(index, doc);
    const std::size_t total_terms = query.term_count();
    if (total_terms == 0) return 0.0;
    double sum = 0.0;
    std::size_t matched = 0;
    for (const auto& fq : query.fields()) {
        if (!index.has_field(fq.field)) continue;
        const auto n = index.doc_count(fq.field);
        for (const auto& tw : fq.terms) {
            const auto tf = index.term_frequency(fq.field, tw.term, d);
            if (tf == 0) continue;
            ++matched;
            const double idf = tfidf_idf(n, index.doc_freq(fq.field, tw.term));
            sum += tfidf_term(tw.weight, tf, idf, index.field_length(fq.field, d));
        }
    }
    return sum * (static_cast<double>(matched) / static_cast<double>(total_terms));
}

double bm25_score(const FieldedIndex& index, const FieldedQuery& query, std::string_view doc,
                  const Bm25Params& params)
{
    const DocNumber d = require_doc(index, doc);
    double sum = 0.0;
    for (const auto& fq : query.fields()) {
        const double avg = index.avg_field_length(fq.field);
        if (avg <= 0.0) continue;
        const auto n = index.doc_count(fq.field);
        for (const auto& tw : fq.terms) {
            const auto tf = index.term_frequency(fq.field, tw.term, d);
            if (tf == 0) continue;
            const double idf = bm25_idf(n, index.doc_freq(fq.field, tw.term));
            sum += bm25_term(tw.weight, tf, idf, index.field_length(fq.field, d), avg, params);
        }
    }
    return sum;
}

std::vector<Candidate> score_candidates(const FieldedIndex& index, const FieldedQuery& query,
                                        Scorer scorer, const Bm25Params& params)
{
    const std::size_t total_terms = query.term_count();
    if (total_terms == 0 || index.size() == 0) return {};

    std::optional<DocNumber> excluded;
    if (query.excluded_doc) excluded = index.doc_number(*query.excluded_doc);

    std::vector<double> acc(index.size(), 0.0);
    std::vector<std::uint32_t> matched_terms(index.size(), 0);
    std::vector<std::uint32_t> matched_fields(index.size(), 0);
    std::vector<std::uint32_t> last_field_seen(index.size(), 0);
    std::uint32_t field_tag = 0;

    for (const auto& fq : query.fields()) {
        ++field_tag;
        if (!index.has_field(fq.field)) continue;
        const auto n = index.doc_count(fq.field);
        const double avg = index.avg_field_length(fq.field);
        for (const auto& tw : fq.terms) {
            auto plist = index.postings(fq.field, tw.term);
            if (plist.empty()) continue;
            const auto df = static_cast<std::uint32_t>(plist.size());
            const double idf = scorer == Scorer::tfidf ? tfidf_idf(n, df) : bm25_idf(n, df);
            for (const auto& p : plist) {
                const auto length = index.field_length(fq.field, p.doc);
                if (scorer == Scorer::tfidf) {
                    acc[p.doc] += tfidf_term(tw.weight, p.tf, idf, length);
                } else if (avg > 0.0) {
                    acc[p.doc] += bm25_term(tw.weight, p.tf, idf, length, avg, params);
                }
                ++matched_terms[p.doc];
                if (last_field_seen[p.doc] != field_tag) {
                    last_field_seen[p.doc] = field_tag;
                    ++matched_fields[p.doc];
                }
            }
        }
    }

    std::vector<Candidate> out;
    for (DocNumber d = 0; d < index.size(); ++d) {
        if (matched_terms[d] == 0 || (excluded && *excluded == d)) continue;
        double score = acc[d];
        if (scorer == Scorer::tfidf) {
            score *= static_cast<double>(matched_terms[d]) / static_cast<double>(total_terms);
        }
        out.push_back({d, score, matched_fields[d]});
    }
    return out;
}

RankedList top_k(const FieldedIndex& index, std::span<const Candidate> candidates, std::size_t k)
{
    std::vector<const Candidate*> kept;
    kept.reserve(candidates.size());
    for (const auto& c : candidates) {
        if (c.score > 0.0) kept.push_back(&c);
    }
    auto before = [](const Candidate* a, const Candidate* b) {
        if (a->score != b->score) return a->score > b->score;
        return a->doc < b->doc;
    };
    const std::size_t n = std::min(k, kept.size());
    std::partial_sort(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(n), kept.end(), before);
    RankedList out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back({index.doc_id(kept[i]->doc), kept[i]->score});
    return out;
}

RankedList search(const FieldedIndex& index, const FieldedQuery& query, Scorer scorer, std::size_t k,
                  const Bm25Params& params)
{
    if (k < 1) fail(ErrorCategory::config, "search depth k must be >= 1");
    auto candidates = score_candidates(index, query, scorer, params);
    return top_k(index, candidates, k);
}

}  // namespace scholarrec
