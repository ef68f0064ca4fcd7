#ifndef SUBSEL_METRICS_HPP
#define SUBSEL_METRICS_HPP

#include "subsel/core.hpp"

namespace subsel {

/// Euclidean distance; throws std::invalid_argument on dimension mismatch.
double euclidean(std::span<const double> x, std::span<const double> y);

/// Inverted generational distance: mean distance from each reference
/// point to its nearest solution point. Throws if either set is empty or
/// the dimensions differ.
double igd(const PointSet& solution, const PointSet& reference);

/// IGD increase caused by removing `p_index` from the solution subset.
/// Requires p_index to be a member and |solution| >= 2. Never negative.
double igd_contribution(std::size_t p_index, const Subset& solution,
                        const PointSet& reference);

/// Sum over clusters of member-to-medoid distances. The i-th medoid (in
/// the subset's ascending index order) serves cluster label i.
double clustering_objective(const PointSet& points, const Subset& medoids,
                            const ClusterAssignment& assignment);

/// One-sided similarity used by the IGD+ indicator:
/// s(x, y) = sqrt(sum_i max(y_i - x_i, 0)^2). Not symmetric.
double igd_plus_similarity(std::span<const double> x, std::span<const double> y);

/// Labels every point with its nearest center, ties toward the lowest
/// center index.
ClusterAssignment assign_to_nearest(const PointSet& points, const PointSet& centers);

/// Same, with centers given as rows of `points` selected by a Subset;
/// cluster label i corresponds to the i-th smallest subset index.
ClusterAssignment assign_to_nearest(const PointSet& points, const Subset& centers);

} // namespace subsel

#endif
