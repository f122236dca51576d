#include "atlasgeo/metric.hpp"

#include <cmath>

namespace atlasgeo {

Matrix jacobian_fd(const Atlas& atlas, const LatentCoord& p, double h) {
    if (!(h > 0.0)) throw usage_error("finite-difference step must be > 0");
    const int d = atlas.latent_dim();
    const int D = atlas.ambient_dim();
    Matrix jac(D, d);
    LatentCoord probe = p;
    for (int j = 0; j < d; ++j) {
        probe.z = p.z;
        probe.z[j] = p.z[j] + h;
        const AmbientPoint fwd = atlas.decode(probe);
        probe.z[j] = p.z[j] - h;
        const AmbientPoint bwd = atlas.decode(probe);
        for (int i = 0; i < D; ++i) jac.at(i, j) = (fwd[i] - bwd[i]) / (2.0 * h);
    }
    return jac;
}

MetricMatrix pullback_metric(const Atlas& atlas, const LatentCoord& p, double h) {
    const Matrix jac = jacobian_fd(atlas, p, h);
    const int d = jac.cols;
    MetricMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int r = 0; r < jac.rows; ++r) s += jac.at(r, i) * jac.at(r, j);
            g.at(i, j) = s;
        }
    // (A + A^T)/2 so the symmetry invariant holds to the last bit.
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const double avg = (g.at(i, j) + g.at(j, i)) / 2.0;
            g.at(i, j) = avg;
            g.at(j, i) = avg;
        }
    return g;
}

double curve_length_discrete(const Atlas& atlas, const SegmentSpec& seg) {
    if (seg.steps < 1) throw usage_error("segment step count must be >= 1");
    const int d = atlas.latent_dim();
    if (static_cast<int>(seg.z_a.size()) != d || static_cast<int>(seg.z_b.size()) != d)
        throw usage_error("segment endpoints do not match the atlas latent dim");

    if (seg.z_a == seg.z_b) return 0.0;  // every sample coincides

    LatentCoord p{seg.chart, seg.z_a};
    AmbientPoint prev = atlas.decode(p);
    double length = 0.0;
    for (int i = 1; i <= seg.steps; ++i) {
        const double t = static_cast<double>(i) / seg.steps;
        for (int j = 0; j < d; ++j) p.z[j] = (1.0 - t) * seg.z_a[j] + t * seg.z_b[j];
        const AmbientPoint cur = atlas.decode(p);
        length += euclidean_distance(prev, cur);
        prev = cur;
    }
    return length;
}

double riemannian_inner(const Atlas& atlas, const LatentCoord& p, const Vec& u, const Vec& v,
                        double h) {
    const int d = atlas.latent_dim();
    if (static_cast<int>(u.size()) != d || static_cast<int>(v.size()) != d)
        throw usage_error("tangent vectors do not match the atlas latent dim");
    const MetricMatrix g = pullback_metric(atlas, p, h);
    // Grouped as g_ii u_i v_i + g_ij (u_i v_j + u_j v_i) so swapping u and v
    // reproduces the same float ops: the result is bit-exactly symmetric.
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        s += g.at(i, i) * (u[i] * v[i]);
        for (int j = i + 1; j < d; ++j) s += g.at(i, j) * (u[i] * v[j] + u[j] * v[i]);
    }
    return s;
}

}  // namespace atlasgeo
