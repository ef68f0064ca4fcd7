#include "subsel/clustering.hpp"

#include "subsel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

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

void check_k(std::size_t k, std::size_t n, const char* who) {
    if (k == 0 || k > n) {
        throw std::invalid_argument(std::string(who) + ": requires 1 <= k <= n");
    }
}

std::vector<std::size_t> identity_labels(std::size_t n) {
    std::vector<std::size_t> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return labels;
}

} // namespace

const char* to_string(LinkageKind kind) {
    switch (kind) {
    case LinkageKind::single: return "single";
    case LinkageKind::complete: return "complete";
    case LinkageKind::weighted_average: return "weighted";
    case LinkageKind::ward: return "ward";
    }
    return "?";
}

Subset kmeanspp_init(const PointSet& points, std::size_t k, RngStream& rng) {
    const std::size_t n = points.size();
    check_k(k, n, "kmeanspp_init");
    if (k == n) {
        return Subset(identity_labels(n), n);
    }

    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    std::vector<char> is_chosen(n, 0);

    const std::size_t first = rng.pick_index(n);
    chosen.push_back(first);
    is_chosen[first] = 1;

    std::vector<double> min_sq(n);
    for (std::size_t j = 0; j < n; ++j) {
        min_sq[j] = sq_dist(points.row(j), points.row(first));
    }

    while (chosen.size() < k) {
        double total = 0.0;
        for (double w : min_sq) total += w;

        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double cum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                cum += min_sq[j];
                if (cum > target) {
                    pick = j;
                    break;
                }
            }
            if (pick == n) {
                // fp slack: fall back to the last point with positive weight
                for (std::size_t j = n; j-- > 0;) {
                    if (min_sq[j] > 0.0) {
                        pick = j;
                        break;
                    }
                }
            }
        }
        if (pick == n) {
            // all remaining points duplicate a chosen center
            for (std::size_t j = 0; j < n; ++j) {
                if (!is_chosen[j]) {
                    pick = j;
                    break;
                }
            }
        }
        chosen.push_back(pick);
        is_chosen[pick] = 1;
        min_sq[pick] = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!is_chosen[j]) {
                min_sq[j] = std::min(min_sq[j], sq_dist(points.row(j), points.row(pick)));
            }
        }
    }
    return Subset(std::move(chosen), n);
}

namespace {

// Moves one point into each empty cluster: the point farthest from the
// empty cluster's center, skipping donors that would become empty
// themselves and points that are centers elsewhere (when `center_ids`
// is given, i.e. for K-medoids).
void repair_empty_clusters(const PointSet& points, std::vector<std::size_t>& labels,
                           PointSet& centers, std::vector<std::size_t>* center_ids) {
    const std::size_t k = centers.size();
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t lab : labels) ++sizes[lab];

    std::vector<char> is_center(points.size(), 0);
    if (center_ids) {
        for (std::size_t c : *center_ids) is_center[c] = 1;
    }

    for (std::size_t pass = 0; pass < 2 * k; ++pass) {
        std::size_t empty = k;
        for (std::size_t i = 0; i < k; ++i) {
            if (sizes[i] == 0) {
                empty = i;
                break;
            }
        }
        if (empty == k) {
            return;
        }
        double best = -1.0;
        std::size_t pick = points.size();
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (sizes[labels[j]] < 2) continue;
            if (center_ids && is_center[j]) continue;
            const double d = sq_dist(points.row(j), centers.row(empty));
            if (d > best) {
                best = d;
                pick = j;
            }
        }
        if (pick == points.size()) {
            throw std::runtime_error("empty-cluster repair failed: too many duplicate points");
        }
        if (center_ids) {
            is_center[(*center_ids)[empty]] = 0;
            (*center_ids)[empty] = pick;
            is_center[pick] = 1;
        }
        // rebuild the center coordinates in place
        std::vector<double> coords(points.row(pick).begin(), points.row(pick).end());
        PointSet patched(centers.dim());
        for (std::size_t c = 0; c < k; ++c) {
            if (c == empty) {
                patched.push_row(coords);
            } else {
                patched.push_row(centers.row(c));
            }
        }
        centers = std::move(patched);
        --sizes[labels[pick]];
        labels[pick] = empty;
        ++sizes[empty];
    }
    throw std::runtime_error("empty-cluster repair failed to converge");
}

std::vector<std::size_t> nearest_center_labels(const PointSet& points,
                                               const PointSet& centers) {
    std::vector<std::size_t> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto x = points.row(i);
        double best = kInf;
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double d = sq_dist(x, centers.row(c));
            if (d < best) {
                best = d;
                best_c = c;
            }
        }
        labels[i] = best_c;
    }
    return labels;
}

} // namespace

KMeansResult kmeans(const PointSet& points, std::size_t k, std::size_t max_iter,
                    RngStream& rng) {
    const std::size_t n = points.size();
    const std::size_t m = points.dim();
    check_k(k, n, "kmeans");
    if (max_iter == 0) {
        throw std::invalid_argument("kmeans: max_iter must be >= 1");
    }

    const Subset seeds = kmeanspp_init(points, k, rng);
    PointSet centroids = points.gather(seeds.indices());
    std::vector<std::size_t> sizes(k, 0);

    KMeansResult result;
    std::vector<std::size_t> prev_labels;
    std::vector<std::size_t> labels;

    while (result.iterations < max_iter) {
        ++result.iterations;
        labels = nearest_center_labels(points, centroids);
        repair_empty_clusters(points, labels, centroids, nullptr);

        const bool changed = labels != prev_labels;
        prev_labels = labels;

        std::vector<double> sums(k * m, 0.0);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lab = labels[i];
            ++sizes[lab];
            auto x = points.row(i);
            for (std::size_t d = 0; d < m; ++d) sums[lab * m + d] += x[d];
        }
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t d = 0; d < m; ++d) {
                sums[c * m + d] /= static_cast<double>(sizes[c]);
            }
        }
        centroids = PointSet(k, m, std::move(sums));

        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            objective += sq_dist(points.row(i), centroids.row(labels[i]));
        }
        result.objective_history.push_back(objective);

        if (!changed) break;
    }

    result.centroids = CentroidState{std::move(centroids), std::move(sizes)};
    result.assignment = ClusterAssignment(std::move(labels), k);
    return result;
}

namespace {

double medoid_objective(const PointSet& points, const std::vector<std::size_t>& medoids,
                        const std::vector<std::size_t>& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        total += std::sqrt(sq_dist(points.row(i), points.row(medoids[labels[i]])));
    }
    return total;
}

} // namespace

KMedoidsResult kmedoids(const PointSet& points, std::size_t k, std::size_t max_iter,
                        RngStream& rng) {
    const std::size_t n = points.size();
    check_k(k, n, "kmedoids");
    if (max_iter == 0) {
        throw std::invalid_argument("kmedoids: max_iter must be >= 1");
    }
    if (k == n) {
        std::vector<std::size_t> all = identity_labels(n);
        return KMedoidsResult{Subset(all, n), ClusterAssignment(all, k), {0.0}, 0};
    }

    std::vector<std::size_t> medoids = kmeanspp_init(points, k, rng).indices();

    // Assignment against the sorted medoid list, so cluster label i always
    // means the i-th smallest medoid index. Repair may swap a medoid out;
    // the labels are remapped to keep that correspondence.
    auto assign = [&](std::vector<std::size_t>& meds) {
        PointSet centers = points.gather(meds);
        std::vector<std::size_t> labels = nearest_center_labels(points, centers);
        repair_empty_clusters(points, labels, centers, &meds);
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

    std::vector<std::size_t> labels = assign(medoids);
    KMedoidsResult result{Subset(medoids, n), ClusterAssignment(labels, k), {}, 0};
    result.objective_history.push_back(medoid_objective(points, medoids, labels));

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
                for (std::size_t other : members[c]) {
                    total += std::sqrt(sq_dist(points.row(cand), points.row(other)));
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
        result.objective_history.push_back(medoid_objective(points, medoids, labels));
    }

    result.medoids = Subset(medoids, n);
    result.assignment = ClusterAssignment(std::move(labels), k);
    return result;
}

double merge_distance_update(LinkageKind kind, double d_ps, double d_qs, double d_pq,
                             std::size_t n_p, std::size_t n_q, std::size_t n_s) {
    switch (kind) {
    case LinkageKind::single:
        return std::min(d_ps, d_qs);
    case LinkageKind::complete:
        return std::max(d_ps, d_qs);
    case LinkageKind::weighted_average:
        return 0.5 * (d_ps + d_qs);
    case LinkageKind::ward: {
        const double np = static_cast<double>(n_p);
        const double nq = static_cast<double>(n_q);
        const double ns = static_cast<double>(n_s);
        const double t = np + nq + ns;
        const double sq = ((np + ns) * d_ps * d_ps + (nq + ns) * d_qs * d_qs -
                           ns * d_pq * d_pq) / t;
        return std::sqrt(std::max(sq, 0.0));
    }
    }
    throw std::invalid_argument("merge_distance_update: unknown linkage");
}

double merge_distance(LinkageKind kind, const ClusterSummary& left,
                      const ClusterSummary& right) {
    switch (kind) {
    case LinkageKind::single:
    case LinkageKind::complete: {
        if (!left.points || left.members.empty() || right.members.empty()) {
            throw std::invalid_argument("merge_distance: member lists required");
        }
        const PointSet& pts = *left.points;
        const bool want_min = kind == LinkageKind::single;
        double best = want_min ? kInf : -kInf;
        for (std::size_t a : left.members) {
            for (std::size_t b : right.members) {
                const double d = sq_dist(pts.row(a), pts.row(b));
                best = want_min ? std::min(best, d) : std::max(best, d);
            }
        }
        return std::sqrt(best);
    }
    case LinkageKind::weighted_average: {
        if (!left.points || left.members.empty() || right.members.empty() ||
            left.weights.size() != left.members.size() ||
            right.weights.size() != right.members.size()) {
            throw std::invalid_argument("merge_distance: members and weights required");
        }
        const PointSet& pts = *left.points;
        double total = 0.0;
        for (std::size_t i = 0; i < left.members.size(); ++i) {
            double inner = 0.0;
            for (std::size_t j = 0; j < right.members.size(); ++j) {
                inner += right.weights[j] *
                         std::sqrt(sq_dist(pts.row(left.members[i]), pts.row(right.members[j])));
            }
            total += left.weights[i] * inner;
        }
        return total;
    }
    case LinkageKind::ward: {
        if (left.centroid.empty() || right.centroid.empty() || left.count == 0 ||
            right.count == 0) {
            throw std::invalid_argument("merge_distance: centroid and count required");
        }
        const double na = static_cast<double>(left.count);
        const double nb = static_cast<double>(right.count);
        const double d = std::sqrt(sq_dist(left.centroid, right.centroid));
        return std::sqrt(2.0 * na * nb / (na + nb)) * d;
    }
    }
    throw std::invalid_argument("merge_distance: unknown linkage");
}

namespace {

// Agglomerative engine. Clusters live in slots named by their smallest
// member index. While many clusters are active, inter-cluster distances
// are recomputed on demand from per-cluster state (nearest-neighbor-chain
// order keeps the number of searches linear). Once at most `kMatrixLimit`
// clusters remain, a distance matrix over the survivors is built once and
// maintained with Lance-Williams updates. This keeps memory far below the
// dense n*n matrix that 10,000-point inputs would otherwise need.
class Agglomerator {
public:
    static constexpr std::size_t kMatrixLimit = 2048;

    Agglomerator(const PointSet& points, LinkageKind kind)
        : pts_(points), kind_(kind), n_(points.size()), m_(points.dim()) {
        members_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            members_[i] = {i};
            active_.insert(active_.end(), i);
        }
        size_.assign(n_, 1);
        if (kind_ == LinkageKind::weighted_average) {
            point_weight_.assign(n_, 1.0);
        }
        if (kind_ == LinkageKind::ward) {
            centroid_sum_.assign(n_ * m_, 0.0);
            for (std::size_t i = 0; i < n_; ++i) {
                auto x = pts_.row(i);
                std::copy(x.begin(), x.end(), centroid_sum_.begin() + i * m_);
            }
        }
    }

    struct Merge {
        std::size_t a;
        std::size_t b;
        double height;
    };

    std::vector<Merge> run() {
        std::vector<Merge> merges;
        merges.reserve(n_ - 1);
        std::vector<std::size_t> chain;

        maybe_enter_matrix_stage();
        while (merges.size() + 1 < n_) {
            if (chain.empty()) {
                chain.push_back(*active_.begin());
            }
            const std::size_t a = chain.back();
            const std::size_t prev =
                chain.size() >= 2 ? chain[chain.size() - 2] : n_;

            double best_d = kInf;
            std::size_t best = n_;
            if (prev < n_) {
                best = prev;
                best_d = dist(a, prev);
            }
            for (std::size_t c : active_) {
                if (c == a || c == prev) continue;
                const double d = dist(a, c);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }

            if (best == prev) {
                chain.pop_back();
                chain.pop_back();
                merges.push_back({std::min(a, prev), std::max(a, prev), best_d});
                merge(a, prev, best_d);
                maybe_enter_matrix_stage();
            } else {
                chain.push_back(best);
            }
        }
        return merges;
    }

private:
    double dist(std::size_t a, std::size_t b) const {
        if (!matrix_.empty()) {
            return matrix_[row_[a] * matrix_dim_ + row_[b]];
        }
        return on_demand(a, b);
    }

    double on_demand(std::size_t a, std::size_t b) const {
        switch (kind_) {
        case LinkageKind::single:
        case LinkageKind::complete: {
            const bool want_min = kind_ == LinkageKind::single;
            double best = want_min ? kInf : -kInf;
            for (std::size_t i : members_[a]) {
                auto x = pts_.row(i);
                for (std::size_t j : members_[b]) {
                    const double d = sq_dist(x, pts_.row(j));
                    best = want_min ? std::min(best, d) : std::max(best, d);
                }
            }
            return std::sqrt(best);
        }
        case LinkageKind::weighted_average: {
            double total = 0.0;
            for (std::size_t i : members_[a]) {
                auto x = pts_.row(i);
                double inner = 0.0;
                for (std::size_t j : members_[b]) {
                    inner += point_weight_[j] * std::sqrt(sq_dist(x, pts_.row(j)));
                }
                total += point_weight_[i] * inner;
            }
            return total;
        }
        case LinkageKind::ward: {
            const double na = static_cast<double>(size_[a]);
            const double nb = static_cast<double>(size_[b]);
            double sq = 0.0;
            for (std::size_t d = 0; d < m_; ++d) {
                const double diff = centroid_sum_[a * m_ + d] / na -
                                    centroid_sum_[b * m_ + d] / nb;
                sq += diff * diff;
            }
            return std::sqrt(2.0 * na * nb / (na + nb) * sq);
        }
        }
        return 0.0;
    }

    void merge(std::size_t a, std::size_t b, double height) {
        const std::size_t keep = std::min(a, b);
        const std::size_t drop = std::max(a, b);

        if (!matrix_.empty()) {
            const std::size_t np = size_[keep];
            const std::size_t nq = size_[drop];
            for (std::size_t s : active_) {
                if (s == keep || s == drop) continue;
                const double d = merge_distance_update(
                    kind_, matrix_[row_[keep] * matrix_dim_ + row_[s]],
                    matrix_[row_[drop] * matrix_dim_ + row_[s]], height, np, nq, size_[s]);
                matrix_[row_[keep] * matrix_dim_ + row_[s]] = d;
                matrix_[row_[s] * matrix_dim_ + row_[keep]] = d;
            }
        }

        if (kind_ == LinkageKind::weighted_average) {
            for (std::size_t i : members_[keep]) point_weight_[i] *= 0.5;
            for (std::size_t i : members_[drop]) point_weight_[i] *= 0.5;
        }
        if (kind_ == LinkageKind::ward) {
            for (std::size_t d = 0; d < m_; ++d) {
                centroid_sum_[keep * m_ + d] += centroid_sum_[drop * m_ + d];
            }
        }
        auto& dst = members_[keep];
        auto& src = members_[drop];
        dst.insert(dst.end(), src.begin(), src.end());
        src.clear();
        src.shrink_to_fit();
        size_[keep] += size_[drop];
        active_.erase(drop);
    }

    void maybe_enter_matrix_stage() {
        if (!matrix_.empty() || active_.size() > kMatrixLimit || active_.size() < 2) {
            return;
        }
        matrix_dim_ = active_.size();
        row_.assign(n_, 0);
        std::vector<std::size_t> slots(active_.begin(), active_.end());
        for (std::size_t r = 0; r < slots.size(); ++r) row_[slots[r]] = r;
        matrix_.assign(matrix_dim_ * matrix_dim_, 0.0);
        for (std::size_t i = 0; i < slots.size(); ++i) {
            for (std::size_t j = i + 1; j < slots.size(); ++j) {
                const double d = on_demand(slots[i], slots[j]);
                matrix_[i * matrix_dim_ + j] = d;
                matrix_[j * matrix_dim_ + i] = d;
            }
        }
    }

    const PointSet& pts_;
    LinkageKind kind_;
    std::size_t n_;
    std::size_t m_;
    std::set<std::size_t> active_;
    std::vector<std::vector<std::size_t>> members_;
    std::vector<std::size_t> size_;
    std::vector<double> point_weight_;
    std::vector<double> centroid_sum_;
    std::vector<double> matrix_;
    std::vector<std::size_t> row_;
    std::size_t matrix_dim_ = 0;
};

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

ClusterAssignment hierarchical(const PointSet& points, std::size_t k, LinkageKind kind) {
    const std::size_t n = points.size();
    check_k(k, n, "hierarchical");
    if (k == n) {
        return ClusterAssignment(identity_labels(n), n);
    }

    Agglomerator engine(points, kind);
    auto merges = engine.run();

    // Cut the dendrogram at k clusters: apply the n-k lowest merges.
    // Reducible linkages give monotone dendrograms, so a stable sort by
    // height keeps children ahead of their parents.
    std::vector<std::size_t> order(merges.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return merges[a].height < merges[b].height;
    });

    UnionFind uf(n);
    for (std::size_t i = 0; i + k < n; ++i) {
        uf.unite(merges[order[i]].a, merges[order[i]].b);
    }

    std::vector<std::size_t> root_label(n, n);
    std::vector<std::size_t> labels(n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = uf.find(i);
        if (root_label[r] == n) {
            root_label[r] = next++;
        }
        labels[i] = root_label[r];
    }
    return ClusterAssignment(std::move(labels), k);
}

} // namespace subsel
