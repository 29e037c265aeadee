#include "scholarrec/cf.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scholarrec/corpus.hpp"
#include "scholarrec/error.hpp"
#include "scholarrec/parallel.hpp"

namespace scholarrec {

using nlohmann::json;

std::string_view measure_name(SimilarityMeasure measure) noexcept
{
    switch (measure) {
        case SimilarityMeasure::cooccurrence: return "cooccurrence";
        case SimilarityMeasure::cosine: return "cosine";
        case SimilarityMeasure::tanimoto: return "tanimoto";
        case SimilarityMeasure::loglikelihood: return "loglikelihood";
        case SimilarityMeasure::cityblock: return "cityblock";
        case SimilarityMeasure::euclidean: return "euclidean";
    }
    return "?";
}

SimilarityMeasure parse_measure(std::string_view name)
{
    for (auto m : kAllMeasures) {
        if (measure_name(m) == name) return m;
    }
    if (name == "cooc") return SimilarityMeasure::cooccurrence;
    if (name == "logl" || name == "llr") return SimilarityMeasure::loglikelihood;
    if (name == "tani" || name == "jaccard") return SimilarityMeasure::tanimoto;
    if (name == "city") return SimilarityMeasure::cityblock;
    if (name == "l2") return SimilarityMeasure::euclidean;
    fail(ErrorCategory::config, "unknown similarity measure '" + std::string(name) + "'");
}

std::optional<std::uint32_t> InteractionMatrix::item_index(std::string_view id) const
{
    auto it = std::lower_bound(items.begin(), items.end(), id);
    if (it == items.end() || *it != id) return std::nullopt;
    return static_cast<std::uint32_t>(it - items.begin());
}

std::vector<std::vector<std::uint32_t>> InteractionMatrix::user_items() const
{
    std::vector<std::vector<std::uint32_t>> out(users.size());
    for (std::uint32_t i = 0; i < item_users.size(); ++i) {
        for (auto u : item_users[i]) out[u].push_back(i);
    }
    return out;
}

InteractionMatrix build_interactions(std::span<const UserLibrary> libraries,
                                     const LibraryBounds& bounds)
{
    std::vector<const UserLibrary*> kept;
    for (const auto& lib : libraries) {
        const auto n = lib.article_ids.size();
        if (n >= bounds.min_articles && n <= bounds.max_articles) kept.push_back(&lib);
    }
    std::sort(kept.begin(), kept.end(),
              [](const UserLibrary* a, const UserLibrary* b) { return a->user_id < b->user_id; });

    InteractionMatrix m;
    std::map<std::string, std::vector<std::uint32_t>> by_item;
    for (const auto* lib : kept) {
        auto user = static_cast<std::uint32_t>(m.users.size());
        m.users.push_back(lib->user_id);
        for (const auto& id : lib->article_ids) by_item[id].push_back(user);
    }
    m.items.reserve(by_item.size());
    m.item_users.reserve(by_item.size());
    for (auto& [id, users] : by_item) {
        m.items.push_back(id);
        m.item_users.push_back(std::move(users));  // ascending: users were appended in order
    }
    return m;
}

CooccurrenceGraph cap_cooccurrences(const InteractionMatrix& matrix, std::size_t max_cooc,
                                    std::size_t threads)
{
    if (max_cooc < 1) fail(ErrorCategory::config, "max_cooccurrences must be >= 1");
    const std::size_t n_items = matrix.items.size();
    const auto user_items = matrix.user_items();
    std::vector<std::vector<ItemCount>> retained(n_items);

    const auto workers = worker_count(threads);
    parallel_blocks(n_items, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::vector<std::uint32_t> counts(n_items, 0);
        std::vector<std::uint32_t> touched;
        for (std::size_t a = begin; a < end; ++a) {
            touched.clear();
            for (auto u : matrix.item_users[a]) {
                for (auto b : user_items[u]) {
                    if (b == a) continue;
                    if (counts[b]++ == 0) touched.push_back(b);
                }
            }
            std::vector<ItemCount> row;
            row.reserve(touched.size());
            for (auto b : touched) {
                row.push_back({b, counts[b]});
                counts[b] = 0;
            }
            auto by_count = [](const ItemCount& x, const ItemCount& y) {
                if (x.count != y.count) return x.count > y.count;
                return x.item < y.item;
            };
            if (row.size() > max_cooc) {
                std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(max_cooc),
                                  row.end(), by_count);
                row.resize(max_cooc);
            }
            retained[a] = std::move(row);
        }
    });

    CooccurrenceGraph graph;
    graph.partners.resize(n_items);
    for (std::uint32_t a = 0; a < n_items; ++a) {
        for (const auto& ic : retained[a]) {
            graph.partners[a].push_back(ic);
            graph.partners[ic.item].push_back({a, ic.count});
        }
    }
    for (auto& row : graph.partners) {
        std::sort(row.begin(), row.end(),
                  [](const ItemCount& x, const ItemCount& y) { return x.item < y.item; });
        row.erase(std::unique(row.begin(), row.end(),
                              [](const ItemCount& x, const ItemCount& y) { return x.item == y.item; }),
                  row.end());
    }
    return graph;
}

namespace {

double x_log_x(double x)
{
    return x <= 0.0 ? 0.0 : x * std::log(x);
}

// Sums two terms in an order independent of which item is "a" so the
// measure stays exactly symmetric in floating point.
double ordered_sum(double x, double y)
{
    return x < y ? x + y : y + x;
}

double log_likelihood_ratio(double k11, double k12, double k21, double k22)
{
    const double cells = x_log_x(k11) + ordered_sum(x_log_x(k12), x_log_x(k21)) + x_log_x(k22);
    const double marginals =
        ordered_sum(x_log_x(k11 + k12) + x_log_x(k21 + k22), x_log_x(k11 + k21) + x_log_x(k12 + k22));
    const double g2 = 2.0 * (cells - marginals + x_log_x(k11 + k12 + k21 + k22));
    return std::max(0.0, g2);
}

}  // namespace

double similarity_from_counts(SimilarityMeasure measure, std::size_t a_users, std::size_t b_users,
                              std::size_t shared, std::size_t n_users)
{
    const double a = static_cast<double>(a_users);
    const double b = static_cast<double>(b_users);
    const double c = static_cast<double>(shared);
    switch (measure) {
        case SimilarityMeasure::cooccurrence: return c;
        case SimilarityMeasure::cosine:
            return a == 0.0 || b == 0.0 ? 0.0 : c / std::sqrt(a * b);
        case SimilarityMeasure::tanimoto: {
            const double denom = a + b - c;
            return denom == 0.0 ? 0.0 : c / denom;
        }
        case SimilarityMeasure::cityblock: return 1.0 / (1.0 + (a + b - 2.0 * c));
        case SimilarityMeasure::euclidean: return 1.0 / (1.0 + std::sqrt(a + b - 2.0 * c));
        case SimilarityMeasure::loglikelihood: {
            const double n = static_cast<double>(n_users);
            const double g2 = log_likelihood_ratio(c, b - c, a - c, n - a - b + c);
            return 1.0 - 1.0 / (1.0 + g2);
        }
    }
    return 0.0;
}

double similarity(SimilarityMeasure measure, const InteractionMatrix& matrix, std::string_view a,
                  std::string_view b)
{
    auto ia = matrix.item_index(a);
    auto ib = matrix.item_index(b);
    if (!ia || !ib) {
        fail(ErrorCategory::data,
             "item '" + std::string(!ia ? a : b) + "' is absent from the interaction matrix");
    }
    if (*ia == *ib) fail(ErrorCategory::data, "similarity requires two distinct items");
    const auto& ua = matrix.item_users[*ia];
    const auto& ub = matrix.item_users[*ib];
    std::size_t shared = 0;
    auto x = ua.begin();
    auto y = ub.begin();
    while (x != ua.end() && y != ub.end()) {
        if (*x < *y) {
            ++x;
        } else if (*y < *x) {
            ++y;
        } else {
            ++shared;
            ++x;
            ++y;
        }
    }
    return similarity_from_counts(measure, ua.size(), ub.size(), shared, matrix.n_users());
}

NeighborMap top_k_neighbors(const InteractionMatrix& matrix, const CooccurrenceGraph& graph,
                            SimilarityMeasure measure, std::size_t max_similarities_per_item,
                            std::size_t threads)
{
    if (max_similarities_per_item < 1) {
        fail(ErrorCategory::config, "max_similarities must be >= 1");
    }
    const std::size_t n_items = matrix.items.size();
    if (graph.partners.size() != n_items) {
        fail(ErrorCategory::internal, "co-occurrence graph does not match the interaction matrix");
    }
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n_items);
    parallel_blocks(n_items, worker_count(threads), [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t a = begin; a < end; ++a) {
            auto& row = rows[a];
            row.reserve(graph.partners[a].size());
            for (const auto& p : graph.partners[a]) {
                row.emplace_back(p.item, similarity_from_counts(measure, matrix.item_users[a].size(),
                                                                matrix.item_users[p.item].size(),
                                                                p.count, matrix.n_users()));
            }
            auto before = [](const auto& x, const auto& y) {
                if (x.second != y.second) return x.second > y.second;
                return x.first < y.first;
            };
            const auto keep = std::min(row.size(), max_similarities_per_item);
            std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep), row.end(),
                              before);
            row.resize(keep);
        }
    });

    NeighborMap out;
    for (std::size_t a = 0; a < n_items; ++a) {
        std::vector<Neighbor> list;
        list.reserve(rows[a].size());
        for (const auto& [b, score] : rows[a]) list.push_back({matrix.items[b], score});
        out.emplace(matrix.items[a], std::move(list));
    }
    return out;
}

void CfParams::validate() const
{
    if (max_cooccurrences < 1) fail(ErrorCategory::config, "max_cooccurrences must be >= 1");
    if (max_similarities < 1) fail(ErrorCategory::config, "max_similarities must be >= 1");
    if (bounds.min_articles > bounds.max_articles) {
        fail(ErrorCategory::config, "library size bounds are inverted");
    }
}

std::string CfParams::to_json() const
{
    json j;
    j["measure"] = measure_name(measure);
    j["max_cooccurrences"] = max_cooccurrences;
    j["max_similarities"] = max_similarities;
    j["min_library_size"] = bounds.min_articles;
    j["max_library_size"] = bounds.max_articles;
    return j.dump();
}

CfParams CfParams::from_json(std::string_view text)
{
    CfParams p;
    json j;
    try {
        j = json::parse(text);
        if (j.contains("measure")) p.measure = parse_measure(j["measure"].get<std::string>());
        p.max_cooccurrences = j.value("max_cooccurrences", p.max_cooccurrences);
        p.max_similarities = j.value("max_similarities", p.max_similarities);
        p.bounds.min_articles = j.value("min_library_size", p.bounds.min_articles);
        p.bounds.max_articles = j.value("max_library_size", p.bounds.max_articles);
    } catch (const json::exception& e) {
        fail(ErrorCategory::config, std::string("cf config: ") + e.what());
    }
    p.validate();
    return p;
}

NeighborMap train_neighbors(std::span<const UserLibrary> libraries, const CfParams& params)
{
    params.validate();
    auto matrix = build_interactions(libraries, params.bounds);
    auto graph = cap_cooccurrences(matrix, params.max_cooccurrences, params.threads);
    return top_k_neighbors(matrix, graph, params.measure, params.max_similarities, params.threads);
}

RankedList recommend_cf(const NeighborMap& neighbors, std::string_view query,
                        const std::set<std::string, std::less<>>& candidates, std::size_t k)
{
    if (k < 1) fail(ErrorCategory::config, "search depth k must be >= 1");
    RankedList out;
    auto it = neighbors.find(query);
    if (it == neighbors.end()) return out;
    for (const auto& n : it->second) {
        if (n.id == query || !candidates.count(n.id)) continue;
        out.push_back({n.id, n.score});
        if (out.size() == k) break;
    }
    return out;
}

void write_neighbors(std::ostream& out, const NeighborMap& neighbors)
{
    char score[64];
    for (const auto& [item, list] : neighbors) {
        for (const auto& n : list) {
            std::snprintf(score, sizeof score, "%.6f", n.score);
            out << item << '\t' << n.id << '\t' << score << '\n';
        }
    }
}

void save_neighbors(const std::filesystem::path& path, const NeighborMap& neighbors,
                    std::string_view header)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for writing");
    out << header;
    write_neighbors(out, neighbors);
}

NeighborMap parse_neighbors(std::istream& in, const std::string& source)
{
    NeighborMap out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto at = source + ":" + std::to_string(line_no);
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
            fail(ErrorCategory::parse, at + ": expected 'item<TAB>neighbor<TAB>score'");
        }
        std::string item = line.substr(0, t1);
        std::string neighbor = line.substr(t1 + 1, t2 - t1 - 1);
        std::string score_text = line.substr(t2 + 1);
        if (item.empty() || neighbor.empty()) fail(ErrorCategory::parse, at + ": empty id");
        if (item == neighbor) fail(ErrorCategory::data, at + ": item lists itself as a neighbor");
        char* end = nullptr;
        double score = std::strtod(score_text.c_str(), &end);
        if (score_text.empty() || end != score_text.c_str() + score_text.size()) {
            fail(ErrorCategory::parse, at + ": bad score '" + score_text + "'");
        }
        out[item].push_back({std::move(neighbor), score});
    }
    return out;
}

NeighborMap load_neighbors(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "' for reading");
    return parse_neighbors(in, path.string());
}

}  // namespace scholarrec
