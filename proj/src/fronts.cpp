#include "subsel/fronts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace subsel {

const char* to_string(FrontKind kind) {
    switch (kind) {
    case FrontKind::linear: return "linear";
    case FrontKind::concave: return "concave";
    case FrontKind::convex: return "convex";
    case FrontKind::inverted: return "inverted";
    case FrontKind::dtlz7: return "dtlz7";
    case FrontKind::wfg2: return "wfg2";
    case FrontKind::deb2dk: return "deb2dk";
    case FrontKind::deb3dk: return "deb3dk";
    case FrontKind::wave: return "wave";
    }
    return "?";
}

FrontKind front_from_string(std::string_view name) {
    for (FrontKind kind :
         {FrontKind::linear, FrontKind::concave, FrontKind::convex, FrontKind::inverted,
          FrontKind::dtlz7, FrontKind::wfg2, FrontKind::deb2dk, FrontKind::deb3dk,
          FrontKind::wave}) {
        if (name == to_string(kind)) return kind;
    }
    throw std::invalid_argument("unknown front kind '" + std::string(name) + "'");
}

namespace {

bool is_knee_kind(FrontKind kind) {
    return kind == FrontKind::deb2dk || kind == FrontKind::deb3dk ||
           kind == FrontKind::wave;
}

} // namespace

void FrontSpec::validate() const {
    if (size == 0) {
        throw std::invalid_argument("FrontSpec: size must be >= 1");
    }
    if (objectives < 2) {
        throw std::invalid_argument("FrontSpec: m must be >= 2");
    }
    if ((kind == FrontKind::deb2dk || kind == FrontKind::wave) && objectives != 2) {
        throw std::invalid_argument(std::string("FrontSpec: ") + to_string(kind) +
                                    " requires m = 2");
    }
    if (kind == FrontKind::deb3dk && objectives != 3) {
        throw std::invalid_argument("FrontSpec: deb3dk requires m = 3");
    }
    if (!is_knee_kind(kind) && knees != 0) {
        throw std::invalid_argument("FrontSpec: knees only apply to knee fronts");
    }
}

std::size_t FrontSpec::knee_count() const {
    if (knees != 0) return knees;
    return kind == FrontKind::deb3dk ? 1 : 3;
}

double dtlz7_last_objective(std::span<const double> head) {
    const std::size_t m = head.size() + 1;
    double acc = 0.0;
    for (double f : head) {
        acc += f * (1.0 + std::sin(3.0 * M_PI * f));
    }
    return 2.0 * static_cast<double>(m) - acc;
}

double deb2dk_radius(double t, std::size_t knees) {
    const double kk = static_cast<double>(knees);
    return 5.0 + 10.0 * (t - 0.5) * (t - 0.5) + std::cos(2.0 * kk * M_PI * t) / kk;
}

std::array<double, 2> deb2dk_point(double t, std::size_t knees) {
    const double r = deb2dk_radius(t, knees);
    return {r * std::sin(t * M_PI / 2.0), r * std::cos(t * M_PI / 2.0)};
}

std::vector<double> wfg2_point(std::span<const double> params) {
    const std::size_t m = params.size() + 1;
    std::vector<double> f(m);
    // convex_1 .. convex_{m-1}
    for (std::size_t j = 1; j < m; ++j) {
        double h = 1.0;
        for (std::size_t i = 1; i + j <= m; ++i) {
            h *= 1.0 - std::cos(params[i - 1] * M_PI / 2.0);
        }
        if (j > 1) {
            h *= 1.0 - std::sin(params[m - j] * M_PI / 2.0);
        }
        f[j - 1] = 2.0 * static_cast<double>(j) * h;
    }
    // disconnected last objective, A = 5, alpha = beta = 1
    const double x1 = params[0];
    const double s = std::sin(5.0 * M_PI * x1);
    f[m - 1] = 2.0 * static_cast<double>(m) * (1.0 - x1 * s * s);
    return f;
}

namespace {

std::vector<double> sample_simplex(std::size_t m, RngStream& rng) {
    std::vector<double> e(m);
    double sum = 0.0;
    do {
        sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            e[i] = rng.exponential();
            sum += e[i];
        }
    } while (sum == 0.0);
    for (double& v : e) v = 0.5 * v / sum;
    return e;
}

std::vector<double> sample_sphere_octant(std::size_t m, RngStream& rng) {
    std::vector<double> g(m);
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            g[i] = std::fabs(rng.gaussian());
            norm_sq += g[i] * g[i];
        }
    } while (norm_sq == 0.0);
    const double norm = std::sqrt(norm_sq);
    for (double& v : g) v /= norm;
    return g;
}

// Oversample the raw parameterization, keep the mutually nondominated
// union, repeat until n survive.
template <typename RawRow>
PointSet rejection_sample(std::size_t m, std::size_t n, RngStream& rng, RawRow raw) {
    PointSet pool(m);
    double yield = 0.5;
    for (std::size_t round = 0; round < 200; ++round) {
        if (pool.size() >= n) break;
        const std::size_t need = n - pool.size();
        const std::size_t batch = std::min<std::size_t>(
            1000000, std::max<std::size_t>(
                         64, static_cast<std::size_t>(
                                 static_cast<double>(need) / std::max(yield, 0.02))));
        const std::size_t before = pool.size();
        for (std::size_t i = 0; i < batch; ++i) {
            pool.push_row(raw(rng));
        }
        pool = nondominated_filter(pool);
        const std::size_t gained = pool.size() > before ? pool.size() - before : 0;
        yield = std::max(0.01, static_cast<double>(gained + 1) /
                                   static_cast<double>(batch));
    }
    if (pool.size() < n) {
        throw std::runtime_error("front sampling failed to accumulate enough points");
    }
    std::vector<std::size_t> head(n);
    std::iota(head.begin(), head.end(), 0);
    return pool.gather(head);
}

} // namespace

PointSet sample_front(const FrontSpec& spec, RngStream& rng) {
    spec.validate();
    const std::size_t m = spec.objectives;
    const std::size_t n = spec.size;
    const std::size_t knees = spec.knee_count();

    switch (spec.kind) {
    case FrontKind::linear: {
        PointSet out(m);
        for (std::size_t i = 0; i < n; ++i) out.push_row(sample_simplex(m, rng));
        return out;
    }
    case FrontKind::concave: {
        PointSet out(m);
        for (std::size_t i = 0; i < n; ++i) out.push_row(sample_sphere_octant(m, rng));
        return out;
    }
    case FrontKind::convex: {
        PointSet out(m);
        for (std::size_t i = 0; i < n; ++i) {
            auto u = sample_sphere_octant(m, rng);
            for (std::size_t j = 0; j + 1 < m; ++j) u[j] = u[j] * u[j] * u[j] * u[j];
            u[m - 1] = u[m - 1] * u[m - 1];
            out.push_row(u);
        }
        return out;
    }
    case FrontKind::inverted: {
        PointSet out(m);
        for (std::size_t i = 0; i < n; ++i) {
            auto u = sample_sphere_octant(m, rng);
            for (double& v : u) v = 1.0 - v;
            out.push_row(u);
        }
        return out;
    }
    case FrontKind::dtlz7:
        return rejection_sample(m, n, rng, [m](RngStream& r) {
            std::vector<double> f(m);
            for (std::size_t j = 0; j + 1 < m; ++j) f[j] = r.uniform01();
            f[m - 1] = dtlz7_last_objective({f.data(), m - 1});
            return f;
        });
    case FrontKind::wfg2:
        return rejection_sample(m, n, rng, [m](RngStream& r) {
            std::vector<double> params(m - 1);
            for (double& p : params) p = r.uniform01();
            return wfg2_point(params);
        });
    case FrontKind::deb2dk: {
        PointSet out(2);
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = deb2dk_point(rng.uniform01(), knees);
            out.push_row(p);
        }
        return out;
    }
    case FrontKind::deb3dk:
        return rejection_sample(3, n, rng, [knees](RngStream& r) {
            const double t1 = r.uniform01();
            const double t2 = r.uniform01();
            const double radius =
                0.5 * (deb2dk_radius(t1, knees) + deb2dk_radius(t2, knees));
            const double a1 = t1 * M_PI / 2.0;
            const double a2 = t2 * M_PI / 2.0;
            return std::vector<double>{radius * std::sin(a1) * std::sin(a2),
                                       radius * std::sin(a1) * std::cos(a2),
                                       radius * std::cos(a1)};
        });
    case FrontKind::wave:
        return rejection_sample(2, n, rng, [knees](RngStream& r) {
            const double t = r.uniform01();
            const double kk = static_cast<double>(knees);
            const double bump = (1.0 + std::cos(2.0 * kk * M_PI * t)) / (4.0 * kk);
            return std::vector<double>{t, 1.0 - t + bump};
        });
    }
    throw std::invalid_argument("sample_front: unknown kind");
}

std::vector<PointSet> candidate_sets(const FrontSpec& spec,
                                     std::span<const std::size_t> sizes, RngStream& rng,
                                     std::size_t pool_size) {
    for (std::size_t s : sizes) {
        if (s == 0 || s > pool_size) {
            throw std::invalid_argument("candidate_sets: sizes must be in [1, pool]");
        }
    }
    FrontSpec pool_spec = spec;
    pool_spec.size = pool_size;
    const PointSet pool = sample_front(pool_spec, rng);

    std::vector<PointSet> out;
    out.reserve(sizes.size());
    std::vector<std::size_t> perm(pool_size);
    for (std::size_t s : sizes) {
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = 0; i < s; ++i) {
            const std::size_t j = i + rng.pick_index(pool_size - i);
            std::swap(perm[i], perm[j]);
        }
        std::vector<std::size_t> take(perm.begin(), perm.begin() + s);
        std::sort(take.begin(), take.end());
        out.push_back(pool.gather(take));
    }
    return out;
}

} // namespace subsel
