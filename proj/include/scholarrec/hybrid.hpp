#pragma once

#include <string>
#include <string_view>

#include "scholarrec/cf.hpp"
#include "scholarrec/contentrec.hpp"

namespace scholarrec {

enum class NeighborWeighting { similarity, unweighted };

std::string_view weighting_name(NeighborWeighting weighting) noexcept;
NeighborWeighting parse_weighting(std::string_view name);

struct HybridConfig {
    ContentConfig base;
    NeighborWeighting neighbor_weighting = NeighborWeighting::similarity;
    bool include_self_id = true;

    /// Besides the base checks: BM25C requires unweighted neighbor terms.
    void validate() const;
    std::string to_json() const;
    static HybridConfig from_json(std::string_view text);
};

/// Default hybrid settings for a base variant (unweighted for BM25C).
HybridConfig hybrid_defaults(const ContentConfig& base);

/// Copies the index and adds a cf field whose terms are each document's
/// neighbor ids (tf 1). Fails if a cf field already exists.
FieldedIndex augment_index(const FieldedIndex& index, const NeighborMap& neighbors);

FieldedQuery build_hybrid_query(const Article& article, const NeighborMap& neighbors,
                                const HybridConfig& config);

/// cf query terms that no document carries are dropped before ranking, so
/// they cannot dilute the coord factor or the NQ field count.
RankedList recommend_hybrid(const FieldedIndex& augmented, const Article& article,
                            const NeighborMap& neighbors, const HybridConfig& config, std::size_t k);

}  // namespace scholarrec
