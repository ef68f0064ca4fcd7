#ifndef SUBSEL_FRONTS_HPP
#define SUBSEL_FRONTS_HPP

#include "subsel/core.hpp"

#include <array>
#include <string_view>

namespace subsel {

enum class FrontKind { linear, concave, convex, inverted, dtlz7, wfg2, deb2dk, deb3dk, wave };

const char* to_string(FrontKind kind);
FrontKind front_from_string(std::string_view name);

/// Declarative description of a Pareto-front sample.
struct FrontSpec {
    FrontKind kind = FrontKind::linear;
    std::size_t objectives = 3;
    /// Knee count for deb2dk/deb3dk/wave; 0 means the kind's default
    /// (3 for deb2dk and wave, 1 for deb3dk). Must stay 0 for other kinds.
    std::size_t knees = 0;
    std::size_t size = 0;

    void validate() const;
    std::size_t knee_count() const;
};

/// Uniformly sampled points on the requested front, mutually nondominated
/// (minimization). Disconnected fronts are produced by oversampling the
/// raw parameterization and filtering until `size` points survive.
PointSet sample_front(const FrontSpec& spec, RngStream& rng);

/// Draws one pool of `pool_size` front points, then returns one uniform
/// without-replacement subsample per requested size.
std::vector<PointSet> candidate_sets(const FrontSpec& spec,
                                     std::span<const std::size_t> sizes, RngStream& rng,
                                     std::size_t pool_size = 200000);

/// Last objective of the raw DTLZ7 parameterization given f_1..f_{m-1}.
double dtlz7_last_objective(std::span<const double> head);

/// Radial knee profile of DEB2DK: r(t) = 5 + 10(t-1/2)^2 + cos(2K pi t)/K.
double deb2dk_radius(double t, std::size_t knees);

std::array<double, 2> deb2dk_point(double t, std::size_t knees);

/// WFG2 front point from m-1 shape parameters in [0,1]: convex shape
/// functions plus the disconnected last objective (A = 5, alpha = beta = 1),
/// objective i scaled by 2i.
std::vector<double> wfg2_point(std::span<const double> params);

} // namespace subsel

#endif
