#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scholarrec/index.hpp"

namespace scholarrec {

struct UserLibrary;

enum class SimilarityMeasure { cooccurrence, cosine, tanimoto, loglikelihood, cityblock, euclidean };

inline constexpr SimilarityMeasure kAllMeasures[] = {
    SimilarityMeasure::cooccurrence, SimilarityMeasure::cosine,    SimilarityMeasure::tanimoto,
    SimilarityMeasure::loglikelihood, SimilarityMeasure::cityblock, SimilarityMeasure::euclidean,
};

std::string_view measure_name(SimilarityMeasure measure) noexcept;
SimilarityMeasure parse_measure(std::string_view name);

/// Boolean user-item data. Items and users are sorted by id; item_users
/// holds sorted user indices.
struct InteractionMatrix {
    std::vector<std::string> items;
    std::vector<std::string> users;
    std::vector<std::vector<std::uint32_t>> item_users;

    std::size_t n_users() const noexcept { return users.size(); }
    std::optional<std::uint32_t> item_index(std::string_view id) const;
    std::vector<std::vector<std::uint32_t>> user_items() const;
};

struct LibraryBounds {
    std::size_t min_articles = 2;
    std::size_t max_articles = 1000;
};

/// Drops libraries outside the bounds and inverts the rest.
InteractionMatrix build_interactions(std::span<const UserLibrary> libraries,
                                     const LibraryBounds& bounds = {});

struct ItemCount {
    std::uint32_t item;
    std::uint32_t count;

    bool operator==(const ItemCount&) const = default;
};

/// Symmetric co-occurrence lists surviving the per-item cap, sorted by
/// partner index.
struct CooccurrenceGraph {
    std::vector<std::vector<ItemCount>> partners;
};

/// Each item keeps its max_cooc partners with the highest counts (ties by
/// ascending id); a pair survives when either endpoint keeps it.
CooccurrenceGraph cap_cooccurrences(const InteractionMatrix& matrix, std::size_t max_cooc = 100,
                                    std::size_t threads = 0);

/// a_users = |A|, b_users = |B|, shared = |A and B|, n_users = all users.
double similarity_from_counts(SimilarityMeasure measure, std::size_t a_users, std::size_t b_users,
                              std::size_t shared, std::size_t n_users);

double similarity(SimilarityMeasure measure, const InteractionMatrix& matrix, std::string_view a,
                  std::string_view b);

struct Neighbor {
    std::string id;
    double score;

    bool operator==(const Neighbor&) const = default;
};

/// item id -> neighbors, descending score then ascending id. Every item of
/// the training matrix has an entry, possibly empty.
using NeighborMap = std::map<std::string, std::vector<Neighbor>, std::less<>>;

NeighborMap top_k_neighbors(const InteractionMatrix& matrix, const CooccurrenceGraph& graph,
                            SimilarityMeasure measure, std::size_t max_similarities_per_item = 100,
                            std::size_t threads = 0);

struct CfParams {
    SimilarityMeasure measure = SimilarityMeasure::loglikelihood;
    std::size_t max_cooccurrences = 100;
    std::size_t max_similarities = 100;
    LibraryBounds bounds;
    std::size_t threads = 0;

    void validate() const;
    std::string to_json() const;
    static CfParams from_json(std::string_view text);
};

NeighborMap train_neighbors(std::span<const UserLibrary> libraries, const CfParams& params = {});

/// neighbors(query) restricted to candidates, top-k; empty for cold start.
RankedList recommend_cf(const NeighborMap& neighbors, std::string_view query,
                        const std::set<std::string, std::less<>>& candidates, std::size_t k);

/// `item \t neighbor \t score` with six decimals; items with no neighbors
/// produce no lines.
void write_neighbors(std::ostream& out, const NeighborMap& neighbors);
void save_neighbors(const std::filesystem::path& path, const NeighborMap& neighbors,
                    std::string_view header = {});
NeighborMap parse_neighbors(std::istream& in, const std::string& source = "<stream>");
NeighborMap load_neighbors(const std::filesystem::path& path);

}  // namespace scholarrec
