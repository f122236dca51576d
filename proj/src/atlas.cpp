#include "atlasgeo/atlas.hpp"

#include <cmath>

#include "atlasgeo/analytic.hpp"
#include "atlasgeo/neural.hpp"

namespace atlasgeo {

void Atlas::check_chart(int chart) const {
    if (chart < 1 || chart > m_)
        throw usage_error("chart index " + std::to_string(chart) + " outside 1.." +
                          std::to_string(m_));
}

void Atlas::check_latent(const LatentCoord& p) const {
    check_chart(p.chart);
    if (static_cast<int>(p.z.size()) != d_)
        throw usage_error("latent vector length " + std::to_string(p.z.size()) +
                          " != atlas latent dim " + std::to_string(d_));
    if (!all_finite(p.z)) throw usage_error("latent vector has non-finite entries");
}

void Atlas::check_ambient(const AmbientPoint& x) const {
    if (static_cast<int>(x.size()) != D_)
        throw usage_error("ambient vector length " + std::to_string(x.size()) +
                          " != atlas ambient dim " + std::to_string(D_));
    if (!all_finite(x)) throw usage_error("ambient vector has non-finite entries");
}

AmbientPoint Atlas::decode(const LatentCoord& p) const {
    check_latent(p);
    return decode_impl(p.chart, p.z);
}

Vec Atlas::encode(int chart, const AmbientPoint& x) const {
    check_chart(chart);
    check_ambient(x);
    return encode_impl(chart, x);
}

SimplexWeights Atlas::partition(const AmbientPoint& x) const {
    check_ambient(x);
    SimplexWeights psi = partition_impl(x);
    double sum = 0.0;
    for (double w : psi.w) {
        if (!(w >= 0.0))
            throw std::logic_error("partition produced a negative weight on atlas " + spec_);
        sum += w;
    }
    if (psi.w.size() != static_cast<size_t>(m_) || std::abs(sum - 1.0) > 1e-9)
        throw std::logic_error("partition output is not a valid simplex point on atlas " + spec_);
    return psi;
}

std::vector<int> Atlas::chart_membership(const AmbientPoint& x, double eps) const {
    if (eps < 0.0) throw usage_error("membership threshold eps must be >= 0");
    const SimplexWeights psi = partition(x);
    std::vector<int> charts;
    for (int y = 1; y <= m_; ++y)
        if (psi.w[y - 1] > eps) charts.push_back(y);
    return charts;
}

int Atlas::argmax_chart(const AmbientPoint& x) const {
    return partition(x).argmax_chart();
}

AtlasPtr resolve_atlas(const std::string& spec) {
    const std::string prefix = "neural:";
    if (spec.rfind(prefix, 0) == 0) {
        const std::string path = spec.substr(prefix.size());
        if (path.empty()) throw usage_error("neural atlas spec has an empty path");
        NeuralAtlasModel model = load_neural_model(path);
        return make_neural_atlas(std::move(model), spec);
    }
    return make_atlas(spec);
}

}  // namespace atlasgeo
