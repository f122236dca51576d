#include "atlasgeo/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "atlasgeo/rng.hpp"

namespace atlasgeo {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// (z1, z2) -> (z1, z2, 0); a single chart covering the whole plane.
class FlatAtlas final : public Atlas {
public:
    FlatAtlas() : Atlas(1, 2, 3, "flat") {}

protected:
    AmbientPoint decode_impl(int, const Vec& z) const override { return {z[0], z[1], 0.0}; }
    Vec encode_impl(int, const AmbientPoint& x) const override { return {x[0], x[1]}; }
    SimplexWeights partition_impl(const AmbientPoint&) const override { return {{1.0}}; }
};

// Two angular charts offset by pi; the raised-cosine weights vanish exactly
// at each chart's excluded point (theta = pi for chart 1, theta = 0 for
// chart 2).
class CircleAtlas final : public Atlas {
public:
    CircleAtlas() : Atlas(2, 1, 2, "circle") {}

protected:
    AmbientPoint decode_impl(int chart, const Vec& z) const override {
        const double angle = chart == 1 ? z[0] : z[0] + kPi;
        return {std::cos(angle), std::sin(angle)};
    }

    Vec encode_impl(int chart, const AmbientPoint& x) const override {
        const double psi = weight(chart, x);
        if (psi <= 0.0)
            throw domain_error("point lies outside circle chart " + std::to_string(chart) +
                               " (psi == 0)");
        const double theta = std::atan2(x[1], x[0]);
        return {chart == 1 ? theta : wrap(theta - kPi)};
    }

    SimplexWeights partition_impl(const AmbientPoint& x) const override {
        const double w1 = weight(1, x);
        return {{w1, 1.0 - w1}};
    }

private:
    static double wrap(double a) {
        if (a <= -kPi) return a + 2.0 * kPi;
        if (a > kPi) return a - 2.0 * kPi;
        return a;
    }

    static double weight(int chart, const AmbientPoint& x) {
        const double c = std::cos(std::atan2(x[1], x[0]));
        return chart == 1 ? (1.0 + c) / 2.0 : (1.0 - c) / 2.0;
    }
};

// Stereographic charts: chart 1 projects from the north pole (covers the
// sphere minus (0,0,1)), chart 2 from the south pole. Weights are linear in
// x3, clamped so the partition stays on the simplex off-manifold too.
class SphereAtlas final : public Atlas {
public:
    SphereAtlas() : Atlas(2, 2, 3, "sphere") {}

protected:
    AmbientPoint decode_impl(int chart, const Vec& z) const override {
        const double r2 = z[0] * z[0] + z[1] * z[1];
        const double s = 1.0 + r2;
        const double third = chart == 1 ? (r2 - 1.0) / s : (1.0 - r2) / s;
        return {2.0 * z[0] / s, 2.0 * z[1] / s, third};
    }

    Vec encode_impl(int chart, const AmbientPoint& x) const override {
        const double psi = weight(chart, x[2]);
        if (psi <= 0.0)
            throw domain_error("point lies at or beyond the projection pole of sphere chart " +
                               std::to_string(chart) + " (psi == 0)");
        const double denom = chart == 1 ? 1.0 - x[2] : 1.0 + x[2];
        return {x[0] / denom, x[1] / denom};
    }

    SimplexWeights partition_impl(const AmbientPoint& x) const override {
        const double w1 = weight(1, x[2]);
        return {{w1, 1.0 - w1}};
    }

private:
    static double weight(int chart, double x3) {
        const double c = std::clamp(x3, -1.0, 1.0);
        return chart == 1 ? (1.0 - c) / 2.0 : (1.0 + c) / 2.0;
    }
};

void require_on_manifold(const std::string& name, double residual) {
    if (std::abs(residual) > 1e-6)
        throw domain_error("point is off the " + name + " manifold (residual " +
                           std::to_string(residual) + ")");
}

}  // namespace

AtlasPtr make_atlas(const std::string& name) {
    if (name == "flat") return std::make_shared<FlatAtlas>();
    if (name == "circle") return std::make_shared<CircleAtlas>();
    if (name == "sphere") return std::make_shared<SphereAtlas>();
    throw usage_error("unknown atlas '" + name + "' (expected flat, circle or sphere)");
}

double oracle_distance(const std::string& name, const AmbientPoint& x0, const AmbientPoint& x1) {
    if (name == "flat") {
        if (x0.size() != 3 || x1.size() != 3) throw usage_error("flat oracle expects 3-vectors");
        require_on_manifold(name, x0[2]);
        require_on_manifold(name, x1[2]);
        return euclidean_distance(x0, x1);
    }
    if (name == "circle") {
        if (x0.size() != 2 || x1.size() != 2) throw usage_error("circle oracle expects 2-vectors");
        require_on_manifold(name, norm2(x0) - 1.0);
        require_on_manifold(name, norm2(x1) - 1.0);
        const double delta = std::abs(std::atan2(x0[1], x0[0]) - std::atan2(x1[1], x1[0]));
        return std::min(delta, 2.0 * kPi - delta);
    }
    if (name == "sphere") {
        if (x0.size() != 3 || x1.size() != 3) throw usage_error("sphere oracle expects 3-vectors");
        require_on_manifold(name, norm2(x0) - 1.0);
        require_on_manifold(name, norm2(x1) - 1.0);
        double dot = x0[0] * x1[0] + x0[1] * x1[1] + x0[2] * x1[2];
        return std::acos(std::clamp(dot, -1.0, 1.0));
    }
    throw usage_error("unknown atlas '" + name + "'");
}

std::vector<AmbientPoint> sample_manifold(const std::string& name, int n, uint64_t seed) {
    if (n < 1) throw usage_error("sample count must be >= 1");
    std::mt19937_64 gen(seed);
    std::vector<AmbientPoint> pts;
    pts.reserve(n);
    if (name == "flat") {
        for (int i = 0; i < n; ++i)
            pts.push_back({5.0 * uniform_unit(gen), 5.0 * uniform_unit(gen), 0.0});
    } else if (name == "circle") {
        for (int i = 0; i < n; ++i) {
            const double theta = -kPi + 2.0 * kPi * uniform_unit(gen);
            pts.push_back({std::cos(theta), std::sin(theta)});
        }
    } else if (name == "sphere") {
        for (int i = 0; i < n; ++i) {
            double v0 = gaussian(gen), v1 = gaussian(gen), v2 = gaussian(gen);
            double r = std::sqrt(v0 * v0 + v1 * v1 + v2 * v2);
            while (r < 1e-12) {  // essentially unreachable, but never divide by 0
                v0 = gaussian(gen);
                v1 = gaussian(gen);
                v2 = gaussian(gen);
                r = std::sqrt(v0 * v0 + v1 * v1 + v2 * v2);
            }
            pts.push_back({v0 / r, v1 / r, v2 / r});
        }
    } else {
        throw usage_error("unknown atlas '" + name + "'");
    }
    return pts;
}

}  // namespace atlasgeo
