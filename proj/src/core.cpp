#include "subsel/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace subsel {

namespace {

void check_finite(std::span<const double> coords) {
    for (double c : coords) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("PointSet: coordinates must be finite");
        }
    }
}

} // namespace

PointSet::PointSet(std::size_t dim) : m_(dim) {}

PointSet::PointSet(std::size_t n, std::size_t dim, std::vector<double> row_major)
    : n_(n), m_(dim), data_(std::move(row_major)) {
    if (data_.size() != n_ * m_) {
        throw std::invalid_argument("PointSet: data size does not match n*m");
    }
    check_finite(data_);
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
    PointSet out(rows.empty() ? 0 : rows.front().size());
    for (const auto& r : rows) {
        out.push_row(r);
    }
    return out;
}

void PointSet::push_row(std::span<const double> coords) {
    if (n_ == 0 && m_ == 0) {
        m_ = coords.size();
    }
    if (coords.size() != m_) {
        throw std::invalid_argument("PointSet: row dimension mismatch");
    }
    check_finite(coords);
    data_.insert(data_.end(), coords.begin(), coords.end());
    ++n_;
}

PointSet PointSet::gather(std::span<const std::size_t> indices) const {
    PointSet out(m_);
    out.data_.reserve(indices.size() * m_);
    for (std::size_t idx : indices) {
        if (idx >= n_) {
            throw std::invalid_argument("PointSet::gather: index out of range");
        }
        out.data_.insert(out.data_.end(), data_.begin() + idx * m_,
                         data_.begin() + (idx + 1) * m_);
    }
    out.n_ = indices.size();
    return out;
}

ClusterAssignment::ClusterAssignment(std::vector<std::size_t> labels_, std::size_t k_)
    : labels(std::move(labels_)), k(k_) {}

void ClusterAssignment::validate() const {
    if (k == 0) {
        throw std::invalid_argument("ClusterAssignment: k must be >= 1");
    }
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t lab : labels) {
        if (lab >= k) {
            throw std::invalid_argument("ClusterAssignment: label out of range");
        }
        ++sizes[lab];
    }
    for (std::size_t s : sizes) {
        if (s == 0) {
            throw std::invalid_argument("ClusterAssignment: empty cluster");
        }
    }
}

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t lab : labels) {
        ++sizes.at(lab);
    }
    return sizes;
}

std::vector<std::vector<std::size_t>> ClusterAssignment::members() const {
    std::vector<std::vector<std::size_t>> out(k);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out.at(labels[i]).push_back(i);
    }
    return out;
}

Subset::Subset(std::vector<std::size_t> indices, std::size_t parent_size)
    : indices_(std::move(indices)), parent_size_(parent_size) {
    if (indices_.empty()) {
        throw std::invalid_argument("Subset: must contain at least one index");
    }
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
        throw std::invalid_argument("Subset: indices must be distinct");
    }
    if (indices_.back() >= parent_size_) {
        throw std::invalid_argument("Subset: index out of parent range");
    }
}

bool Subset::contains(std::size_t parent_index) const {
    return std::binary_search(indices_.begin(), indices_.end(), parent_index);
}

std::size_t Subset::position_of(std::size_t parent_index) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), parent_index);
    if (it == indices_.end() || *it != parent_index) {
        throw std::invalid_argument("Subset: index not a member");
    }
    return static_cast<std::size_t>(it - indices_.begin());
}

std::uint64_t RngStream::next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    if (!(lo < hi)) {
        throw std::invalid_argument("RngStream::uniform: requires lo < hi");
    }
    return lo + (hi - lo) * uniform01();
}

std::size_t RngStream::pick_index(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("RngStream::pick_index: n must be > 0");
    }
    std::size_t idx = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return std::min(idx, n - 1);
}

double RngStream::gaussian() {
    double u1 = 1.0 - uniform01(); // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double RngStream::exponential() {
    return -std::log(1.0 - uniform01());
}

bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        if (a[i] < b[i]) {
            strict = true;
        }
    }
    return strict;
}

namespace {

// Two-objective case: one sweep over points sorted by (f1, f2).
std::vector<char> dominated_flags_2d(const PointSet& pts) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pts(a, 0) != pts(b, 0)) return pts(a, 0) < pts(b, 0);
        if (pts(a, 1) != pts(b, 1)) return pts(a, 1) < pts(b, 1);
        return a < b;
    });

    std::vector<char> dominated(n, 0);
    double prev_min = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && pts(order[j], 0) == pts(order[i], 0)) ++j;
        const double group_min = pts(order[i], 1);
        for (std::size_t t = i; t < j; ++t) {
            const double f2 = pts(order[t], 1);
            if (prev_min <= f2 || group_min < f2) {
                dominated[order[t]] = 1;
            }
        }
        prev_min = std::min(prev_min, group_min);
        i = j;
    }
    return dominated;
}

// Three-objective case: lexicographic sweep plus a (f2 -> min f3)
// staircase of the already-seen points.
std::vector<char> dominated_flags_3d(const PointSet& pts) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        for (std::size_t d = 0; d < 3; ++d) {
            if (pts(a, d) != pts(b, d)) return pts(a, d) < pts(b, d);
        }
        return a < b;
    });

    std::map<double, double> stair; // f2 ascending -> f3 strictly descending
    auto covered = [&](double f2, double f3) {
        auto it = stair.upper_bound(f2);
        if (it == stair.begin()) return false;
        return std::prev(it)->second <= f3;
    };
    auto insert = [&](double f2, double f3) {
        if (covered(f2, f3)) return;
        auto it = stair.lower_bound(f2);
        while (it != stair.end() && it->second >= f3) {
            it = stair.erase(it);
        }
        stair[f2] = f3;
    };

    std::vector<char> dominated(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        auto same = [&](std::size_t a, std::size_t b) {
            return pts(a, 0) == pts(b, 0) && pts(a, 1) == pts(b, 1) &&
                   pts(a, 2) == pts(b, 2);
        };
        while (j < n && same(order[j], order[i])) ++j;
        const std::size_t rep = order[i];
        const bool dom = covered(pts(rep, 1), pts(rep, 2));
        if (dom) {
            for (std::size_t t = i; t < j; ++t) dominated[order[t]] = 1;
        } else {
            insert(pts(rep, 1), pts(rep, 2));
        }
        i = j;
    }
    return dominated;
}

// General case: scan candidates in ascending objective-sum order against
// the archive of survivors. A dominator always has a strictly smaller sum,
// so it is already in the archive when its victim is examined.
std::vector<char> dominated_flags_general(const PointSet& pts) {
    const std::size_t n = pts.size();
    const std::size_t m = pts.dim();
    std::vector<double> sums(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < m; ++d) sums[i] += pts(i, d);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sums[a] != sums[b]) return sums[a] < sums[b];
        return a < b;
    });

    std::vector<char> dominated(n, 0);
    std::vector<std::size_t> archive;
    archive.reserve(n);
    std::size_t last_dominator = n; // invalid

    for (std::size_t idx : order) {
        auto x = pts.row(idx);
        bool dom = false;
        if (last_dominator < n && dominates(pts.row(last_dominator), x)) {
            dom = true;
        } else {
            for (std::size_t y : archive) {
                if (y != last_dominator && dominates(pts.row(y), x)) {
                    dom = true;
                    last_dominator = y;
                    break;
                }
            }
        }
        if (dom) {
            dominated[idx] = 1;
        } else {
            archive.push_back(idx);
        }
    }
    return dominated;
}

} // namespace

std::vector<std::size_t> nondominated_indices(const PointSet& points) {
    std::vector<char> dominated;
    if (points.size() == 0) {
        return {};
    }
    if (points.dim() < 2) {
        throw std::invalid_argument("nondominated_indices: requires m >= 2");
    }
    if (points.dim() == 2) {
        dominated = dominated_flags_2d(points);
    } else if (points.dim() == 3) {
        dominated = dominated_flags_3d(points);
    } else {
        dominated = dominated_flags_general(points);
    }
    std::vector<std::size_t> keep;
    keep.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!dominated[i]) keep.push_back(i);
    }
    return keep;
}

PointSet nondominated_filter(const PointSet& points) {
    if (points.size() == 0) {
        return PointSet(points.dim());
    }
    return points.gather(nondominated_indices(points));
}

PointSet read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::size_t m = 0;
    {
        std::stringstream header(line);
        std::string tok;
        while (std::getline(header, tok, ',')) {
            ++m;
            const std::string expect = "f" + std::to_string(m);
            if (tok != expect) {
                throw std::runtime_error(path + ": bad header column '" + tok +
                                         "', expected '" + expect + "'");
            }
        }
    }
    if (m < 2) {
        throw std::runtime_error(path + ": header must list at least f1,f2");
    }

    PointSet out(m);
    std::vector<double> row(m);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* p = line.c_str();
        char* end = nullptr;
        for (std::size_t j = 0; j < m; ++j) {
            row[j] = std::strtod(p, &end);
            if (end == p) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": malformed number");
            }
            p = end;
            if (j + 1 < m) {
                if (*p != ',') {
                    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                             ": expected ','");
                }
                ++p;
            }
        }
        out.push_row(row);
    }
    return out;
}

void write_points_csv(const PointSet& points, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    for (std::size_t j = 0; j < points.dim(); ++j) {
        out << (j ? "," : "") << "f" << (j + 1);
    }
    out << "\n";
    char buf[40];
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", points(i, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace subsel
