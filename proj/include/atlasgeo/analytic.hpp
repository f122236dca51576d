#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atlasgeo/atlas.hpp"

namespace atlasgeo {

// Closed-form atlases with known geodesics. They double as ground-truth
// oracles for the graph pipeline.
//
//   flat    m=1, d=2, D=3   (z1,z2) -> (z1,z2,0)
//   circle  m=2, d=1, D=2   two angular charts offset by pi
//   sphere  m=2, d=2, D=3   stereographic charts from the north/south pole

/// Builds one of the builtin analytic atlases. Throws usage_error on an
/// unknown name.
AtlasPtr make_atlas(const std::string& name);

/// Exact geodesic distance on the named manifold: Euclidean for flat, arc
/// length for circle, great-circle arc for sphere. Inputs must lie on the
/// manifold to within 1e-6 (throws domain_error otherwise).
double oracle_distance(const std::string& name, const AmbientPoint& x0, const AmbientPoint& x1);

/// n points uniform w.r.t. surface measure, deterministic given seed.
/// flat: uniform on [0,5]^2 x {0}; circle: uniform angle; sphere: normalized
/// Gaussian draws.
std::vector<AmbientPoint> sample_manifold(const std::string& name, int n, uint64_t seed);

}  // namespace atlasgeo
