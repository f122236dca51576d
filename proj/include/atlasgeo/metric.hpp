#pragma once

#include "atlasgeo/atlas.hpp"
#include "atlasgeo/types.hpp"

namespace atlasgeo {

inline constexpr double kDefaultFdStep = 1e-5;
inline constexpr int kDefaultCurveSteps = 15;

/// d x d pullback metric J^T J; symmetric and PSD up to roundoff.
using MetricMatrix = Matrix;

/// A straight latent segment inside one chart, sampled at steps+1 points.
struct SegmentSpec {
    int chart = 1;
    Vec z_a;
    Vec z_b;
    int steps = kDefaultCurveSteps;
};

/// Jacobian of the chart decoder by central finite differences, column j =
/// (G(z + h e_j) - G(z - h e_j)) / (2h). D x d.
Matrix jacobian_fd(const Atlas& atlas, const LatentCoord& p, double h = kDefaultFdStep);

/// J^T J, symmetrized as (A + A^T)/2 to kill asymmetric roundoff.
MetricMatrix pullback_metric(const Atlas& atlas, const LatentCoord& p, double h = kDefaultFdStep);

/// Discretized curve length of the linear latent path from z_a to z_b:
/// the sum of ambient chords between consecutive decoded samples at
/// t_i = i/n, i = 0..n. Always >= the ambient chord of the endpoints.
double curve_length_discrete(const Atlas& atlas, const SegmentSpec& seg);

/// u^T g v under the pullback metric at p. Exactly symmetric in (u, v).
double riemannian_inner(const Atlas& atlas, const LatentCoord& p, const Vec& u, const Vec& v,
                        double h = kDefaultFdStep);

}  // namespace atlasgeo
