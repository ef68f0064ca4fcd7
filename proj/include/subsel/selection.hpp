#ifndef SUBSEL_SELECTION_HPP
#define SUBSEL_SELECTION_HPP

#include "subsel/clustering.hpp"
#include "subsel/core.hpp"

#include <optional>
#include <string_view>

namespace subsel {

/// Strategy 1: the member closest to the cluster centroid. Ties go to the
/// lowest point index.
std::size_t representative_strategy1(const PointSet& points,
                                     std::span<const std::size_t> member_indices);

/// Strategy 2: the member with the smallest total distance to all members
/// of the cluster. Ties go to the lowest point index.
std::size_t representative_strategy2(const PointSet& points,
                                     std::span<const std::size_t> member_indices);

/// One representative per cluster; |result| == assignment.k.
Subset subset_from_clusters(const PointSet& points, const ClusterAssignment& assignment,
                            int strategy);

struct GreedyStats {
    /// Number of single-candidate marginal-gain evaluations performed.
    std::size_t gain_evaluations = 0;
};

/// Greedy inclusion minimizing IGD against the full point set. The first
/// pick is the point with the smallest mean distance to all points (the
/// 1-medoid); every later pick maximizes the IGD reduction. Deterministic;
/// ties go to the lowest index.
Subset greedy_igd_inclusion(const PointSet& points, std::size_t k,
                            GreedyStats* stats = nullptr);

/// Same contract and output as greedy_igd_inclusion, accelerated with
/// stale-bound priority ordering (marginal gains only shrink as the
/// subset grows, so a previous gain upper-bounds the current one).
Subset lazy_greedy_igd_inclusion(const PointSet& points, std::size_t k,
                                 GreedyStats* stats = nullptr);

/// Greedy removal of the point with the smallest IGD contribution until k
/// points remain. Reference set is the full point set.
Subset greedy_igd_removal(const PointSet& points, std::size_t k);

/// K-medoids with the IGD+ one-sided similarity in both the assignment
/// and the medoid-update step, which biases medoids toward knee regions.
/// Euclidean K-means++ seeding, same stopping rule as kmedoids.
KMedoidsResult knee_kmedoids(const PointSet& points, std::size_t k, std::size_t max_iter,
                             RngStream& rng);

enum class AlgoKind {
    kmeanspp,
    kmedoids,
    greedy_igd,
    hc_ward,
    hc_weighted,
    hc_single,
    hc_complete,
    knee_kmedoids,
};

const char* to_string(AlgoKind algo);
AlgoKind algo_from_string(std::string_view name);

/// True for algorithms whose clusters need a representative-point
/// strategy (K-means++ and the hierarchical family). The others return
/// their own centers directly.
bool algo_uses_strategy(AlgoKind algo);

struct SelectInfo {
    std::size_t iterations = 0;
};

/// Uniform dispatch over all selection algorithms. `strategy` (1 or 2,
/// default 2) applies only where algo_uses_strategy; it is accepted and
/// ignored elsewhere. Clustering runs are capped at 100 iterations.
Subset select(const PointSet& points, AlgoKind algo, std::size_t k,
              std::optional<int> strategy, RngStream& rng, SelectInfo* info = nullptr);

} // namespace subsel

#endif
