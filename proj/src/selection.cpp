#include "subsel/selection.hpp"

#include "subsel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace subsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq_dist(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

std::vector<std::size_t> sorted_copy(std::span<const std::size_t> indices) {
    std::vector<std::size_t> out(indices.begin(), indices.end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::size_t representative_strategy1(const PointSet& points,
                                     std::span<const std::size_t> member_indices) {
    if (member_indices.empty()) {
        throw std::invalid_argument("representative_strategy1: empty member list");
    }
    const std::size_t m = points.dim();
    std::vector<double> centroid(m, 0.0);
    for (std::size_t idx : member_indices) {
        auto x = points.row(idx);
        for (std::size_t d = 0; d < m; ++d) centroid[d] += x[d];
    }
    for (double& c : centroid) c /= static_cast<double>(member_indices.size());

    double best = kInf;
    std::size_t best_idx = 0;
    for (std::size_t idx : sorted_copy(member_indices)) {
        const double d = sq_dist(points.row(idx), centroid);
        if (d < best) {
            best = d;
            best_idx = idx;
        }
    }
    return best_idx;
}

std::size_t representative_strategy2(const PointSet& points,
                                     std::span<const std::size_t> member_indices) {
    if (member_indices.empty()) {
        throw std::invalid_argument("representative_strategy2: empty member list");
    }
    const auto members = sorted_copy(member_indices);
    double best = kInf;
    std::size_t best_idx = 0;
    for (std::size_t idx : members) {
        double total = 0.0;
        for (std::size_t other : members) {
            total += std::sqrt(sq_dist(points.row(idx), points.row(other)));
        }
        if (total < best) {
            best = total;
            best_idx = idx;
        }
    }
    return best_idx;
}

Subset subset_from_clusters(const PointSet& points, const ClusterAssignment& assignment,
                            int strategy) {
    if (strategy != 1 && strategy != 2) {
        throw std::invalid_argument("subset_from_clusters: strategy must be 1 or 2");
    }
    assignment.validate();
    if (assignment.labels.size() != points.size()) {
        throw std::invalid_argument("subset_from_clusters: assignment size mismatch");
    }
    std::vector<std::size_t> reps;
    reps.reserve(assignment.k);
    for (const auto& cluster : assignment.members()) {
        reps.push_back(strategy == 1 ? representative_strategy1(points, cluster)
                                     : representative_strategy2(points, cluster));
    }
    return Subset(std::move(reps), points.size());
}

namespace {

// Shared distance provider for the greedy twins. Caches the full matrix
// when it fits; either path yields bit-identical values, which the
// lazy/naive equivalence contract depends on.
class PairDistances {
public:
    explicit PairDistances(const PointSet& pts) : pts_(pts), n_(pts.size()) {
        if (n_ != 0 && n_ <= 1500) {
            cache_.resize(n_ * n_);
            for (std::size_t i = 0; i < n_; ++i) {
                cache_[i * n_ + i] = 0.0;
                for (std::size_t j = i + 1; j < n_; ++j) {
                    const double d = std::sqrt(sq_dist(pts_.row(i), pts_.row(j)));
                    cache_[i * n_ + j] = d;
                    cache_[j * n_ + i] = d;
                }
            }
        }
    }

    double operator()(std::size_t i, std::size_t j) const {
        if (!cache_.empty()) {
            return cache_[i * n_ + j];
        }
        return std::sqrt(sq_dist(pts_.row(i), pts_.row(j)));
    }

private:
    const PointSet& pts_;
    std::size_t n_;
    std::vector<double> cache_;
};

std::size_t mean_distance_minimizer(const PointSet& points, const PairDistances& dist) {
    const std::size_t n = points.size();
    double best = kInf;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += dist(i, j);
        if (total < best) {
            best = total;
            best_idx = i;
        }
    }
    return best_idx;
}

double marginal_gain(std::size_t cand, const std::vector<double>& dist_to_sel,
                     const PairDistances& dist) {
    double gain = 0.0;
    for (std::size_t j = 0; j < dist_to_sel.size(); ++j) {
        const double d = dist(cand, j);
        if (d < dist_to_sel[j]) {
            gain += dist_to_sel[j] - d;
        }
    }
    return gain;
}

void absorb(std::size_t picked, std::vector<double>& dist_to_sel,
            const PairDistances& dist) {
    for (std::size_t j = 0; j < dist_to_sel.size(); ++j) {
        dist_to_sel[j] = std::min(dist_to_sel[j], dist(picked, j));
    }
}

} // namespace

Subset greedy_igd_inclusion(const PointSet& points, std::size_t k, GreedyStats* stats) {
    const std::size_t n = points.size();
    if (k == 0 || k > n) {
        throw std::invalid_argument("greedy_igd_inclusion: requires 1 <= k <= n");
    }
    PairDistances dist(points);
    std::vector<char> selected(n, 0);
    std::vector<std::size_t> chosen;
    chosen.reserve(k);

    const std::size_t first = mean_distance_minimizer(points, dist);
    chosen.push_back(first);
    selected[first] = 1;
    std::vector<double> dist_to_sel(n);
    for (std::size_t j = 0; j < n; ++j) dist_to_sel[j] = dist(first, j);

    while (chosen.size() < k) {
        double best_gain = -kInf;
        std::size_t best_c = n;
        for (std::size_t c = 0; c < n; ++c) {
            if (selected[c]) continue;
            const double g = marginal_gain(c, dist_to_sel, dist);
            if (stats) ++stats->gain_evaluations;
            if (g > best_gain) {
                best_gain = g;
                best_c = c;
            }
        }
        chosen.push_back(best_c);
        selected[best_c] = 1;
        absorb(best_c, dist_to_sel, dist);
    }
    return Subset(std::move(chosen), n);
}

Subset lazy_greedy_igd_inclusion(const PointSet& points, std::size_t k,
                                 GreedyStats* stats) {
    const std::size_t n = points.size();
    if (k == 0 || k > n) {
        throw std::invalid_argument("lazy_greedy_igd_inclusion: requires 1 <= k <= n");
    }
    PairDistances dist(points);
    std::vector<std::size_t> chosen;
    chosen.reserve(k);

    const std::size_t first = mean_distance_minimizer(points, dist);
    chosen.push_back(first);
    std::vector<double> dist_to_sel(n);
    for (std::size_t j = 0; j < n; ++j) dist_to_sel[j] = dist(first, j);

    struct Entry {
        double gain;
        std::size_t index;
        std::size_t stamp; // |chosen| at evaluation time
    };
    struct Worse {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.gain != b.gain) return a.gain < b.gain;
            return a.index > b.index;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, Worse> queue;
    for (std::size_t c = 0; c < n; ++c) {
        if (c == first) continue;
        const double g = marginal_gain(c, dist_to_sel, dist);
        if (stats) ++stats->gain_evaluations;
        queue.push({g, c, 1});
    }

    while (chosen.size() < k) {
        Entry top = queue.top();
        queue.pop();
        if (top.stamp == chosen.size()) {
            chosen.push_back(top.index);
            absorb(top.index, dist_to_sel, dist);
        } else {
            top.gain = marginal_gain(top.index, dist_to_sel, dist);
            if (stats) ++stats->gain_evaluations;
            top.stamp = chosen.size();
            queue.push(top);
        }
    }
    return Subset(std::move(chosen), n);
}

Subset greedy_igd_removal(const PointSet& points, std::size_t k) {
    const std::size_t n = points.size();
    if (k == 0 || k > n) {
        throw std::invalid_argument("greedy_igd_removal: requires 1 <= k <= n");
    }
    PairDistances dist(points);
    std::vector<char> in_set(n, 1);
    std::size_t remaining = n;

    while (remaining > k) {
        // nearest and second-nearest member of the current set, per point
        std::vector<std::size_t> n1(n);
        std::vector<double> d1(n, kInf), d2(n, kInf);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t s = 0; s < n; ++s) {
                if (!in_set[s]) continue;
                const double d = dist(s, j);
                if (d < d1[j]) {
                    d2[j] = d1[j];
                    d1[j] = d;
                    n1[j] = s;
                } else if (d < d2[j]) {
                    d2[j] = d;
                }
            }
        }
        std::vector<double> contribution(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            contribution[n1[j]] += d2[j] - d1[j];
        }
        double best = kInf;
        std::size_t victim = n;
        for (std::size_t s = 0; s < n; ++s) {
            if (!in_set[s]) continue;
            if (contribution[s] < best) {
                best = contribution[s];
                victim = s;
            }
        }
        in_set[victim] = 0;
        --remaining;
    }

    std::vector<std::size_t> kept;
    kept.reserve(k);
    for (std::size_t s = 0; s < n; ++s) {
        if (in_set[s]) kept.push_back(s);
    }
    return Subset(std::move(kept), n);
}

KMedoidsResult knee_kmedoids(const PointSet& points, std::size_t k, std::size_t max_iter,
                             RngStream& rng) {
    const std::size_t n = points.size();
    if (k == 0 || k > n) {
        throw std::invalid_argument("knee_kmedoids: requires 1 <= k <= n");
    }
    if (max_iter == 0) {
        throw std::invalid_argument("knee_kmedoids: max_iter must be >= 1");
    }
    if (k == n) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        return KMedoidsResult{Subset(all, n), ClusterAssignment(all, k), {0.0}, 0};
    }

    std::vector<std::size_t> medoids = kmeanspp_init(points, k, rng).indices();

    auto similarity = [&](std::size_t x, std::size_t med) {
        return igd_plus_similarity(points.row(x), points.row(med));
    };

    // nearest medoid under the one-sided similarity; ties toward the
    // lowest cluster id (medoids kept sorted)
    auto assign = [&](std::vector<std::size_t>& meds) {
        std::vector<std::size_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            double best = kInf;
            std::size_t best_c = 0;
            for (std::size_t c = 0; c < meds.size(); ++c) {
                const double s = similarity(i, meds[c]);
                if (s < best) {
                    best = s;
                    best_c = c;
                }
            }
            labels[i] = best_c;
        }
        // empty-cluster repair: hand the medoid to the point with the
        // largest dissimilarity to its currently assigned medoid
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t lab : labels) ++sizes[lab];
        std::vector<char> is_medoid(n, 0);
        for (std::size_t c : meds) is_medoid[c] = 1;
        for (std::size_t pass = 0; pass < 2 * k; ++pass) {
            std::size_t empty = k;
            for (std::size_t c = 0; c < k; ++c) {
                if (sizes[c] == 0) {
                    empty = c;
                    break;
                }
            }
            if (empty == k) break;
            double worst = -1.0;
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (is_medoid[i] || sizes[labels[i]] < 2) continue;
                const double s = similarity(i, meds[labels[i]]);
                if (s > worst) {
                    worst = s;
                    pick = i;
                }
            }
            if (pick == n) {
                throw std::runtime_error("knee_kmedoids: cannot repair empty cluster");
            }
            is_medoid[meds[empty]] = 0;
            meds[empty] = pick;
            is_medoid[pick] = 1;
            --sizes[labels[pick]];
            labels[pick] = empty;
            ++sizes[empty];
        }
        if (!std::is_sorted(meds.begin(), meds.end())) {
            std::vector<std::size_t> perm(meds.size());
            std::iota(perm.begin(), perm.end(), 0);
            std::sort(perm.begin(), perm.end(),
                      [&](std::size_t a, std::size_t b) { return meds[a] < meds[b]; });
            std::vector<std::size_t> pos(meds.size());
            for (std::size_t r = 0; r < perm.size(); ++r) pos[perm[r]] = r;
            for (auto& lab : labels) lab = pos[lab];
            std::sort(meds.begin(), meds.end());
        }
        return labels;
    };

    auto objective = [&](const std::vector<std::size_t>& meds,
                         const std::vector<std::size_t>& labels) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += similarity(i, meds[labels[i]]);
        return total;
    };

    std::vector<std::size_t> labels = assign(medoids);
    KMedoidsResult result{Subset(medoids, n), ClusterAssignment(labels, k), {}, 0};
    result.objective_history.push_back(objective(medoids, labels));

    while (result.iterations < max_iter) {
        ++result.iterations;

        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);

        std::vector<std::size_t> next(k);
        for (std::size_t c = 0; c < k; ++c) {
            double best = kInf;
            std::size_t best_idx = members[c].front();
            for (std::size_t cand : members[c]) {
                double total = 0.0;
                for (std::size_t x : members[c]) {
                    total += similarity(x, cand);
                }
                if (total < best) {
                    best = total;
                    best_idx = cand;
                }
            }
            next[c] = best_idx;
        }
        std::sort(next.begin(), next.end());

        if (next == medoids) break;
        medoids = std::move(next);
        labels = assign(medoids);
        result.objective_history.push_back(objective(medoids, labels));
    }

    result.medoids = Subset(medoids, n);
    result.assignment = ClusterAssignment(std::move(labels), k);
    return result;
}

const char* to_string(AlgoKind algo) {
    switch (algo) {
    case AlgoKind::kmeanspp: return "kmeans++";
    case AlgoKind::kmedoids: return "kmedoids";
    case AlgoKind::greedy_igd: return "greedy-igd";
    case AlgoKind::hc_ward: return "hc-ward";
    case AlgoKind::hc_weighted: return "hc-weighted";
    case AlgoKind::hc_single: return "hc-single";
    case AlgoKind::hc_complete: return "hc-complete";
    case AlgoKind::knee_kmedoids: return "knee-kmedoids";
    }
    return "?";
}

AlgoKind algo_from_string(std::string_view name) {
    for (AlgoKind algo :
         {AlgoKind::kmeanspp, AlgoKind::kmedoids, AlgoKind::greedy_igd, AlgoKind::hc_ward,
          AlgoKind::hc_weighted, AlgoKind::hc_single, AlgoKind::hc_complete,
          AlgoKind::knee_kmedoids}) {
        if (name == to_string(algo)) return algo;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

bool algo_uses_strategy(AlgoKind algo) {
    switch (algo) {
    case AlgoKind::kmeanspp:
    case AlgoKind::hc_ward:
    case AlgoKind::hc_weighted:
    case AlgoKind::hc_single:
    case AlgoKind::hc_complete:
        return true;
    default:
        return false;
    }
}

namespace {

constexpr std::size_t kDefaultMaxIter = 100;

LinkageKind linkage_of(AlgoKind algo) {
    switch (algo) {
    case AlgoKind::hc_ward: return LinkageKind::ward;
    case AlgoKind::hc_weighted: return LinkageKind::weighted_average;
    case AlgoKind::hc_single: return LinkageKind::single;
    case AlgoKind::hc_complete: return LinkageKind::complete;
    default: throw std::invalid_argument("not a hierarchical algorithm");
    }
}

} // namespace

Subset select(const PointSet& points, AlgoKind algo, std::size_t k,
              std::optional<int> strategy, RngStream& rng, SelectInfo* info) {
    const int strat = strategy.value_or(2);
    if (strat != 1 && strat != 2) {
        throw std::invalid_argument("select: strategy must be 1 or 2");
    }
    SelectInfo local;
    SelectInfo& out = info ? *info : local;

    switch (algo) {
    case AlgoKind::kmeanspp: {
        auto result = kmeans(points, k, kDefaultMaxIter, rng);
        out.iterations = result.iterations;
        return subset_from_clusters(points, result.assignment, strat);
    }
    case AlgoKind::hc_ward:
    case AlgoKind::hc_weighted:
    case AlgoKind::hc_single:
    case AlgoKind::hc_complete: {
        auto assignment = hierarchical(points, k, linkage_of(algo));
        out.iterations = points.size() - k;
        return subset_from_clusters(points, assignment, strat);
    }
    case AlgoKind::kmedoids: {
        auto result = kmedoids(points, k, kDefaultMaxIter, rng);
        out.iterations = result.iterations;
        return result.medoids;
    }
    case AlgoKind::greedy_igd: {
        out.iterations = k;
        return lazy_greedy_igd_inclusion(points, k);
    }
    case AlgoKind::knee_kmedoids: {
        auto result = knee_kmedoids(points, k, kDefaultMaxIter, rng);
        out.iterations = result.iterations;
        return result.medoids;
    }
    }
    throw std::invalid_argument("select: unknown algorithm");
}

} // namespace subsel
