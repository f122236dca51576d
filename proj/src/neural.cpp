#include "atlasgeo/neural.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "atlasgeo/io.hpp"

namespace atlasgeo {

using nlohmann::json;

Activation activation_from_string(const std::string& name) {
    if (name == "identity") return Activation::identity;
    if (name == "relu") return Activation::relu;
    if (name == "swish") return Activation::swish;
    if (name == "tanh") return Activation::tanh;
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "softmax") return Activation::softmax;
    throw format_error("unknown activation '" + name + "'");
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::swish: return "swish";
        case Activation::tanh: return "tanh";
        case Activation::sigmoid: return "sigmoid";
        case Activation::softmax: return "softmax";
    }
    return "identity";
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void apply_activation(Activation act, Vec& v) {
    switch (act) {
        case Activation::identity:
            return;
        case Activation::relu:
            for (double& x : v) x = x > 0.0 ? x : 0.0;
            return;
        case Activation::swish:
            for (double& x : v) x = x * sigmoid(x);
            return;
        case Activation::tanh:
            for (double& x : v) x = std::tanh(x);
            return;
        case Activation::sigmoid:
            for (double& x : v) x = sigmoid(x);
            return;
        case Activation::softmax: {
            double peak = v[0];
            for (double x : v) peak = std::max(peak, x);
            double sum = 0.0;
            for (double& x : v) {
                x = std::exp(x - peak);
                sum += x;
            }
            for (double& x : v) x /= sum;
            return;
        }
    }
}

}  // namespace

Vec mlp_forward(const DenseNet& layers, const Vec& input) {
    if (layers.empty()) throw usage_error("mlp_forward on an empty network");
    Vec h = input;
    for (const DenseLayer& layer : layers) {
        if (static_cast<int>(h.size()) != layer.weight.cols)
            throw usage_error("input length " + std::to_string(h.size()) +
                              " != layer in-dim " + std::to_string(layer.weight.cols));
        Vec z(layer.weight.rows);
        for (int r = 0; r < layer.weight.rows; ++r) {
            double acc = layer.bias[r];
            const double* row = layer.weight.data.data() +
                                static_cast<size_t>(r) * layer.weight.cols;
            for (int c = 0; c < layer.weight.cols; ++c) acc += row[c] * h[c];
            z[r] = acc;
        }
        apply_activation(layer.act, z);
        h = std::move(z);
    }
    return h;
}

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw format_error(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw format_error(path + ": missing field '" + key + "'");
    return *it;
}

int require_positive_int(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw format_error(path + "." + key + ": expected a positive integer");
    return v.get<int>();
}

DenseLayer parse_layer(const json& j, const std::string& path) {
    DenseLayer layer;
    const json& w = require(j, "w", path);
    if (!w.is_array() || w.empty()) throw format_error(path + ".w: expected a nonempty matrix");
    const int rows = static_cast<int>(w.size());
    int cols = -1;
    for (int r = 0; r < rows; ++r) {
        const json& row = w[r];
        if (!row.is_array() || row.empty())
            throw format_error(path + ".w[" + std::to_string(r) + "]: expected a nonempty row");
        if (cols < 0) {
            cols = static_cast<int>(row.size());
            layer.weight = Matrix(rows, cols);
        } else if (static_cast<int>(row.size()) != cols) {
            throw format_error(path + ".w[" + std::to_string(r) + "]: ragged matrix (expected " +
                               std::to_string(cols) + " columns)");
        }
        for (int c = 0; c < cols; ++c) {
            if (!row[c].is_number())
                throw format_error(path + ".w[" + std::to_string(r) + "][" + std::to_string(c) +
                                   "]: expected a number");
            const double x = row[c].get<double>();
            if (!std::isfinite(x))
                throw format_error(path + ".w[" + std::to_string(r) + "][" + std::to_string(c) +
                                   "]: non-finite weight");
            layer.weight.at(r, c) = x;
        }
    }
    const json& b = require(j, "b", path);
    if (!b.is_array() || static_cast<int>(b.size()) != rows)
        throw format_error(path + ".b: length " + std::to_string(b.size()) + " != rows " +
                           std::to_string(rows));
    layer.bias.resize(rows);
    for (int r = 0; r < rows; ++r) {
        if (!b[r].is_number())
            throw format_error(path + ".b[" + std::to_string(r) + "]: expected a number");
        layer.bias[r] = b[r].get<double>();
        if (!std::isfinite(layer.bias[r]))
            throw format_error(path + ".b[" + std::to_string(r) + "]: non-finite bias");
    }
    const json& act = require(j, "act", path);
    if (!act.is_string()) throw format_error(path + ".act: expected a string");
    try {
        layer.act = activation_from_string(act.get<std::string>());
    } catch (const format_error&) {
        throw format_error(path + ".act: unknown activation '" + act.get<std::string>() + "'");
    }
    return layer;
}

DenseNet parse_net(const json& j, const std::string& path, int in_dim, int out_dim,
                   bool softmax_head) {
    if (!j.is_array() || j.empty())
        throw format_error(path + ": expected a nonempty array of layers");
    DenseNet net;
    int expect = in_dim;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string layer_path = path + "[" + std::to_string(i) + "]";
        DenseLayer layer = parse_layer(j[i], layer_path);
        if (layer.weight.cols != expect)
            throw format_error(layer_path + ".w: in-dim " + std::to_string(layer.weight.cols) +
                               " != expected " + std::to_string(expect));
        const bool last = i + 1 == j.size();
        if (layer.act == Activation::softmax && !(softmax_head && last))
            throw format_error(layer_path +
                               ".act: softmax is only valid as the final partition layer");
        expect = layer.weight.rows;
        net.push_back(std::move(layer));
    }
    if (expect != out_dim)
        throw format_error(path + ": output dim " + std::to_string(expect) + " != expected " +
                           std::to_string(out_dim));
    if (softmax_head && net.back().act != Activation::softmax)
        throw format_error(path + ": final partition activation must be softmax");
    return net;
}

class NeuralAtlas final : public Atlas {
public:
    NeuralAtlas(NeuralAtlasModel model, const std::string& spec)
        : Atlas(model.m, model.d, model.D, spec), model_(std::move(model)) {}

protected:
    AmbientPoint decode_impl(int chart, const Vec& z) const override {
        return mlp_forward(model_.decoders[chart - 1], z);
    }
    // Learned encoders are total on R^D: no domain restriction.
    Vec encode_impl(int chart, const AmbientPoint& x) const override {
        return mlp_forward(model_.encoders[chart - 1], x);
    }
    SimplexWeights partition_impl(const AmbientPoint& x) const override {
        return {mlp_forward(model_.partition, x)};
    }

private:
    NeuralAtlasModel model_;
};

void emit_net(std::string& out, const DenseNet& net) {
    out += '[';
    for (size_t i = 0; i < net.size(); ++i) {
        if (i) out += ',';
        const DenseLayer& layer = net[i];
        out += "{\"w\":[";
        for (int r = 0; r < layer.weight.rows; ++r) {
            if (r) out += ',';
            out += '[';
            for (int c = 0; c < layer.weight.cols; ++c) {
                if (c) out += ',';
                out += format_double(layer.weight.at(r, c));
            }
            out += ']';
        }
        out += "],\"b\":[";
        for (size_t r = 0; r < layer.bias.size(); ++r) {
            if (r) out += ',';
            out += format_double(layer.bias[r]);
        }
        out += "],\"act\":\"";
        out += activation_name(layer.act);
        out += "\"}";
    }
    out += ']';
}

}  // namespace

NeuralAtlasModel load_neural_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open weight file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw format_error("weight file '" + path + "': " + e.what());
    }

    NeuralAtlasModel model;
    model.m = require_positive_int(j, "m", "$");
    model.d = require_positive_int(j, "d", "$");
    model.D = require_positive_int(j, "D", "$");

    const json& encoders = require(j, "encoders", "$");
    const json& decoders = require(j, "decoders", "$");
    if (!encoders.is_array() || static_cast<int>(encoders.size()) != model.m)
        throw format_error("$.encoders: expected exactly m=" + std::to_string(model.m) +
                           " networks");
    if (!decoders.is_array() || static_cast<int>(decoders.size()) != model.m)
        throw format_error("$.decoders: expected exactly m=" + std::to_string(model.m) +
                           " networks");
    for (int i = 0; i < model.m; ++i) {
        model.encoders.push_back(parse_net(encoders[i], "$.encoders[" + std::to_string(i) + "]",
                                           model.D, model.d, false));
        model.decoders.push_back(parse_net(decoders[i], "$.decoders[" + std::to_string(i) + "]",
                                           model.d, model.D, false));
    }
    model.partition = parse_net(require(j, "partition", "$"), "$.partition", model.D, model.m,
                                true);
    return model;
}

void save_neural_model(const NeuralAtlasModel& model, const std::string& path) {
    std::string out = "{\"m\":" + std::to_string(model.m) + ",\"d\":" + std::to_string(model.d) +
                      ",\"D\":" + std::to_string(model.D) + ",\"encoders\":[";
    for (size_t i = 0; i < model.encoders.size(); ++i) {
        if (i) out += ',';
        emit_net(out, model.encoders[i]);
    }
    out += "],\"decoders\":[";
    for (size_t i = 0; i < model.decoders.size(); ++i) {
        if (i) out += ',';
        emit_net(out, model.decoders[i]);
    }
    out += "],\"partition\":";
    emit_net(out, model.partition);
    out += "}";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw format_error("cannot write weight file '" + path + "'");
    f << out;
}

AtlasPtr make_neural_atlas(NeuralAtlasModel model, const std::string& spec) {
    return std::make_shared<NeuralAtlas>(std::move(model), spec);
}

AtlasPtr load_neural_atlas(const std::string& path) {
    return make_neural_atlas(load_neural_model(path), "neural:" + path);
}

}  // namespace atlasgeo
