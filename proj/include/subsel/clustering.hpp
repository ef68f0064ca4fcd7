#ifndef SUBSEL_CLUSTERING_HPP
#define SUBSEL_CLUSTERING_HPP

#include "subsel/core.hpp"

namespace subsel {

/// Inter-cluster distance rules for agglomerative clustering.
enum class LinkageKind { single, complete, weighted_average, ward };

const char* to_string(LinkageKind kind);

/// Cluster centers for K-means: arithmetic means, not data points.
struct CentroidState {
    PointSet centroids;
    std::vector<std::size_t> sizes;
};

/// K-means++ seeding: first center uniform, every further center drawn
/// with probability proportional to the squared distance to the nearest
/// center chosen so far.
Subset kmeanspp_init(const PointSet& points, std::size_t k, RngStream& rng);

struct KMeansResult {
    CentroidState centroids;
    ClusterAssignment assignment;
    /// Sum of squared point-to-centroid distances after each iteration.
    std::vector<double> objective_history;
    std::size_t iterations = 0;
};

/// Lloyd iterations from a K-means++ seeding. Stops when the labels stop
/// changing or after max_iter full iterations; the returned assignment
/// has no empty clusters.
KMeansResult kmeans(const PointSet& points, std::size_t k, std::size_t max_iter,
                    RngStream& rng);

struct KMedoidsResult {
    Subset medoids;
    ClusterAssignment assignment;
    /// Total member-to-medoid distance after the initial assignment and
    /// after each update/reassign round.
    std::vector<double> objective_history;
    std::size_t iterations = 0;
};

/// Alternating K-medoids (Voronoi style): nearest-medoid assignment, then
/// per-cluster medoid update minimizing total intra-cluster distance.
/// Seeded by kmeanspp_init; stops on a medoid fixpoint or max_iter.
/// Cluster label i corresponds to the i-th smallest medoid index.
KMedoidsResult kmedoids(const PointSet& points, std::size_t k, std::size_t max_iter,
                        RngStream& rng);

/// What merge_distance needs to know about one cluster. Member lists feed
/// single/complete linkage, members+weights feed weighted average, and
/// centroid+count feed Ward.
struct ClusterSummary {
    const PointSet* points = nullptr;
    std::vector<std::size_t> members;
    std::vector<double> weights;
    std::vector<double> centroid;
    std::size_t count = 0;
};

/// Inter-cluster distance computed directly from summaries. Throws
/// std::invalid_argument when the summary lacks what the kind requires.
double merge_distance(LinkageKind kind, const ClusterSummary& left,
                      const ClusterSummary& right);

/// Lance-Williams form: distance from r = merge(p, q) to s, given the
/// cached prior distances d(p,s), d(q,s) and the merge distance d(p,q).
/// Sizes are only consulted for Ward.
double merge_distance_update(LinkageKind kind, double d_ps, double d_qs, double d_pq,
                             std::size_t n_p, std::size_t n_q, std::size_t n_s);

/// Agglomerative clustering down to exactly k clusters. Deterministic; no
/// RNG. Cluster labels are assigned in order of each cluster's smallest
/// member index.
ClusterAssignment hierarchical(const PointSet& points, std::size_t k, LinkageKind kind);

} // namespace subsel

#endif
