#pragma once

#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "atlasgeo/types.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) {
    return std::string(ATLASGEO_FIXTURE_DIR) + "/" + name;
}

inline bool bits_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

inline bool bits_equal(const atlasgeo::Vec& a, const atlasgeo::Vec& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!bits_equal(a[i], b[i])) return false;
    return true;
}

/// Smallest eigenvalue of a symmetric 1x1 or 2x2 matrix.
inline double min_eigenvalue_sym(const atlasgeo::Matrix& g) {
    if (g.rows == 1) return g.at(0, 0);
    const double tr = g.at(0, 0) + g.at(1, 1);
    const double det = g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return (tr - disc) / 2.0;
}

inline atlasgeo::Vec random_vec(std::mt19937_64& gen, size_t n, double scale) {
    std::normal_distribution<double> dist(0.0, scale);
    atlasgeo::Vec v(n);
    for (double& x : v) x = dist(gen);
    return v;
}

/// Hand-derived Jacobian of the chart-1 (north-pole) stereographic inverse
/// on the unit sphere, used as the finite-difference oracle.
inline atlasgeo::Matrix sphere_chart1_jacobian(const atlasgeo::Vec& z) {
    const double a = z[0], b = z[1];
    const double s = 1.0 + a * a + b * b;
    const double s2 = s * s;
    atlasgeo::Matrix jac(3, 2);
    jac.at(0, 0) = 2.0 * (s - 2.0 * a * a) / s2;
    jac.at(1, 0) = -4.0 * a * b / s2;
    jac.at(2, 0) = 4.0 * a / s2;
    jac.at(0, 1) = -4.0 * a * b / s2;
    jac.at(1, 1) = 2.0 * (s - 2.0 * b * b) / s2;
    jac.at(2, 1) = 4.0 * b / s2;
    return jac;
}

}  // namespace testutil
