#include "subsel/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subsel {

namespace {

double sq_dist(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

} // namespace

double euclidean(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("euclidean: dimension mismatch");
    }
    return std::sqrt(sq_dist(x, y));
}

double igd(const PointSet& solution, const PointSet& reference) {
    if (solution.empty()) {
        throw std::invalid_argument("igd: empty solution set");
    }
    if (reference.empty()) {
        throw std::invalid_argument("igd: empty reference set");
    }
    if (solution.dim() != reference.dim()) {
        throw std::invalid_argument("igd: dimension mismatch");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < reference.size(); ++j) {
        auto ref = reference.row(j);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < solution.size(); ++s) {
            best = std::min(best, sq_dist(ref, solution.row(s)));
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

double igd_contribution(std::size_t p_index, const Subset& solution,
                        const PointSet& reference) {
    if (!solution.contains(p_index)) {
        throw std::invalid_argument("igd_contribution: p_index not in solution");
    }
    if (solution.size() < 2) {
        throw std::invalid_argument("igd_contribution: solution must have >= 2 points");
    }
    if (solution.parent_size() != reference.size()) {
        throw std::invalid_argument("igd_contribution: subset parent is not the reference set");
    }
    // Per reference point, the nearest member and the nearest member other
    // than p share all distance computations, so each term of the
    // difference is exactly >= 0.
    double total = 0.0;
    for (std::size_t j = 0; j < reference.size(); ++j) {
        auto ref = reference.row(j);
        double best = std::numeric_limits<double>::infinity();
        double best_without = std::numeric_limits<double>::infinity();
        for (std::size_t s : solution.indices()) {
            const double d = sq_dist(ref, reference.row(s));
            best = std::min(best, d);
            if (s != p_index) {
                best_without = std::min(best_without, d);
            }
        }
        total += std::sqrt(best_without) - std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

double clustering_objective(const PointSet& points, const Subset& medoids,
                            const ClusterAssignment& assignment) {
    if (medoids.size() != assignment.k) {
        throw std::invalid_argument("clustering_objective: medoid count != k");
    }
    if (assignment.labels.size() != points.size()) {
        throw std::invalid_argument("clustering_objective: assignment size mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t lab = assignment.labels[i];
        if (lab >= assignment.k) {
            throw std::invalid_argument("clustering_objective: label out of range");
        }
        total += euclidean(points.row(i), points.row(medoids.indices()[lab]));
    }
    return total;
}

double igd_plus_similarity(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("igd_plus_similarity: dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::max(y[i] - x[i], 0.0);
        acc += d * d;
    }
    return std::sqrt(acc);
}

ClusterAssignment assign_to_nearest(const PointSet& points, const PointSet& centers) {
    if (centers.empty()) {
        throw std::invalid_argument("assign_to_nearest: no centers");
    }
    if (centers.dim() != points.dim()) {
        throw std::invalid_argument("assign_to_nearest: dimension mismatch");
    }
    ClusterAssignment out;
    out.k = centers.size();
    out.labels.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto x = points.row(i);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double d = sq_dist(x, centers.row(c));
            if (d < best) {
                best = d;
                best_c = c;
            }
        }
        out.labels[i] = best_c;
    }
    return out;
}

ClusterAssignment assign_to_nearest(const PointSet& points, const Subset& centers) {
    return assign_to_nearest(points, points.gather(centers.indices()));
}

} // namespace subsel
