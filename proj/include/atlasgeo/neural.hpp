#pragma once

#include <string>
#include <vector>

#include "atlasgeo/atlas.hpp"
#include "atlasgeo/types.hpp"

namespace atlasgeo {

enum class Activation { identity, relu, swish, tanh, sigmoid, softmax };

Activation activation_from_string(const std::string& name);
const char* activation_name(Activation a);

/// One affine-then-activation layer. Weight is out x in, row-major.
struct DenseLayer {
    Matrix weight;
    Vec bias;
    Activation act = Activation::identity;
};

using DenseNet = std::vector<DenseLayer>;

/// Sequential forward pass. swish(x) = x*sigmoid(x); softmax is stabilized
/// by max subtraction. All arithmetic in double.
Vec mlp_forward(const DenseNet& layers, const Vec& input);

/// A dense multi-chart model: per-chart encoder (D->d) and decoder (d->D)
/// nets plus a partition net (D->m, final softmax).
struct NeuralAtlasModel {
    int m = 0, d = 0, D = 0;
    std::vector<DenseNet> encoders;
    std::vector<DenseNet> decoders;
    DenseNet partition;
};

/// Parses and validates a weight file. Throws format_error naming the
/// offending field path on malformed input or inconsistent dimensions.
NeuralAtlasModel load_neural_model(const std::string& path);

/// Canonical serialization (17-significant-digit decimals); load-save-load
/// reproduces forward passes bit-exactly.
void save_neural_model(const NeuralAtlasModel& model, const std::string& path);

/// Wraps a model as an Atlas. Neural encoders are total on R^D, so encode
/// never raises a domain error.
AtlasPtr make_neural_atlas(NeuralAtlasModel model, const std::string& spec);

/// load_neural_model + make_neural_atlas with spec "neural:<path>".
AtlasPtr load_neural_atlas(const std::string& path);

}  // namespace atlasgeo
