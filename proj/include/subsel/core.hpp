#ifndef SUBSEL_CORE_HPP
#define SUBSEL_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace subsel {

/// A fixed-dimension collection of points in objective space, stored
/// row-major. The row index is the point's identity: every algorithm in
/// this library hands back indices into a PointSet, never copies of the
/// coordinates.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t dim);
    PointSet(std::size_t n, std::size_t dim, std::vector<double> row_major);

    static PointSet from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }
    std::size_t dim() const { return m_; }
    bool empty() const { return n_ == 0; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * m_, m_};
    }
    double operator()(std::size_t i, std::size_t j) const {
        return data_[i * m_ + j];
    }

    /// Appends one point; throws std::invalid_argument on dimension
    /// mismatch or non-finite coordinates.
    void push_row(std::span<const double> coords);

    /// New PointSet holding the rows at `indices`, in the given order.
    PointSet gather(std::span<const std::size_t> indices) const;

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> data_;
};

/// Labels every point of a parent PointSet with a cluster id in [0, k).
struct ClusterAssignment {
    std::vector<std::size_t> labels;
    std::size_t k = 0;

    ClusterAssignment() = default;
    ClusterAssignment(std::vector<std::size_t> labels_, std::size_t k_);

    std::size_t size() const { return labels.size(); }

    /// Throws unless labels are in range and every cluster is nonempty.
    void validate() const;

    std::vector<std::size_t> cluster_sizes() const;
    std::vector<std::vector<std::size_t>> members() const;
};

/// k distinct indices into a parent PointSet, kept sorted ascending.
class Subset {
public:
    Subset(std::vector<std::size_t> indices, std::size_t parent_size);

    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t parent_size() const { return parent_size_; }
    std::size_t size() const { return indices_.size(); }

    bool contains(std::size_t parent_index) const;
    /// Position of `parent_index` inside indices(); throws if absent.
    std::size_t position_of(std::size_t parent_index) const;

    bool operator==(const Subset& other) const = default;

private:
    std::vector<std::size_t> indices_;
    std::size_t parent_size_ = 0;
};

/// Deterministic 64-bit random stream (SplitMix64). Identical seeds give
/// bit-identical uniform draws on every platform; that is what makes the
/// multi-run benchmark protocol reproducible.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform draw in [0, 1).
    double uniform01();

    /// Uniform draw in [lo, hi); throws std::invalid_argument if lo >= hi.
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n); throws if n == 0.
    std::size_t pick_index(std::size_t n);

    /// Standard normal via Box-Muller.
    double gaussian();

    /// Standard exponential.
    double exponential();

private:
    std::uint64_t state_;
};

/// True iff `a` is no worse than `b` in every coordinate and strictly
/// better in at least one (minimization).
bool dominates(std::span<const double> a, std::span<const double> b);

/// Indices of the points not dominated by any other point, in original
/// order. Exact duplicates of a nondominated point are all retained.
std::vector<std::size_t> nondominated_indices(const PointSet& points);

/// The nondominated points themselves, original relative order preserved.
PointSet nondominated_filter(const PointSet& points);

/// CSV I/O for PointSet: header f1,...,fm, one point per row, LF endings.
PointSet read_points_csv(const std::string& path);
void write_points_csv(const PointSet& points, const std::string& path);

} // namespace subsel

#endif
