#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace atlasgeo {

// Plain dense vectors everywhere; dimensions are checked at API boundaries.
using Vec = std::vector<double>;
using AmbientPoint = Vec;

/// A point in the hybrid latent space R^d x {1..m}. Charts are 1-based.
struct LatentCoord {
    int chart = 1;
    Vec z;
};

/// Per-point chart importances: entries >= 0 summing to 1.
struct SimplexWeights {
    std::vector<double> w;

    // Index of the largest weight, ties resolved to the lowest chart.
    int argmax_chart() const {
        int best = 0;
        for (int i = 1; i < static_cast<int>(w.size()); ++i)
            if (w[i] > w[best]) best = i;
        return best + 1;
    }
};

/// Small row-major dense matrix, used for Jacobians, metrics and layer weights.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

// Error taxonomy; the CLI maps these onto its exit codes.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct no_path_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Query endpoint could not be attached to its chart subgraph.
struct no_connection_error : no_path_error {
    using no_path_error::no_path_error;
};

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline double squared_distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

inline double euclidean_distance(const Vec& a, const Vec& b) {
    return std::sqrt(squared_distance(a, b));
}

inline double norm2(const Vec& a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

}  // namespace atlasgeo
