#pragma once

#include <memory>
#include <string>
#include <vector>

#include "atlasgeo/types.hpp"

namespace atlasgeo {

/**
 * An atlas over a data manifold: m charts with decode maps G_y : R^d -> R^D,
 * encode maps F_y defined where chart y carries weight, and a partition of
 * unity psi : R^D -> simplex.
 *
 * Implementations are immutable after construction; every operation is
 * read-only and safe to call from multiple threads.
 */
class Atlas {
public:
    virtual ~Atlas() = default;

    int chart_count() const { return m_; }
    int latent_dim() const { return d_; }
    int ambient_dim() const { return D_; }

    // CLI-addressable identity ("flat", "sphere", "neural:<path>", ...).
    const std::string& spec_string() const { return spec_; }

    /// G_y(z): defined on all of R^d for every chart.
    AmbientPoint decode(const LatentCoord& p) const;

    /// F_y(x). Partial for analytic atlases: throws domain_error where
    /// psi_y(x) == 0 (e.g. a stereographic chart at its projection pole).
    Vec encode(int chart, const AmbientPoint& x) const;

    /// psi(x), a valid point of the standard simplex.
    SimplexWeights partition(const AmbientPoint& x) const;

    /// Charts with psi_y(x) > eps, ascending. Nonempty whenever eps < 1/m.
    std::vector<int> chart_membership(const AmbientPoint& x, double eps) const;

    /// Chart of maximal weight; ties resolved to the lowest index.
    int argmax_chart(const AmbientPoint& x) const;

protected:
    Atlas(int m, int d, int D, std::string spec) : m_(m), d_(d), D_(D), spec_(std::move(spec)) {}

    virtual AmbientPoint decode_impl(int chart, const Vec& z) const = 0;
    virtual Vec encode_impl(int chart, const AmbientPoint& x) const = 0;
    virtual SimplexWeights partition_impl(const AmbientPoint& x) const = 0;

private:
    void check_latent(const LatentCoord& p) const;
    void check_ambient(const AmbientPoint& x) const;
    void check_chart(int chart) const;

    int m_, d_, D_;
    std::string spec_;
};

using AtlasPtr = std::shared_ptr<const Atlas>;

/// Resolves an atlas spec string: a builtin name (flat|circle|sphere) or
/// "neural:<weights-path>".
AtlasPtr resolve_atlas(const std::string& spec);

}  // namespace atlasgeo
