#!/usr/bin/env python3
"""Regenerate the neural-model fixtures under tests/fixtures/.

Everything here is plain numpy so the bundled input/output pairs come from a
forward pass that shares no code with the C++ inference engine.

  mlp_ref.json       random dense model exercising every activation
  mlp_ref_pairs.json frozen input/output pairs for mlp_ref.json
  sphere_net.json    small model fitted to the two stereographic sphere charts
  img_net.json       random 28x28-image-shaped model (frame-emission tests)
"""
import json
import os
import numpy as np

OUT_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "fixtures")


def act(name, x):
    if name == "identity":
        return x
    if name == "relu":
        return np.maximum(x, 0.0)
    if name == "swish":
        return x / (1.0 + np.exp(-x))
    if name == "tanh":
        return np.tanh(x)
    if name == "sigmoid":
        return 1.0 / (1.0 + np.exp(-x))
    if name == "softmax":
        m = x.max(axis=-1, keepdims=True)
        e = np.exp(x - m)
        return e / e.sum(axis=-1, keepdims=True)
    raise ValueError(name)


def forward(net, x):
    for layer in net:
        x = act(layer["act"], x @ np.asarray(layer["w"]).T + np.asarray(layer["b"]))
    return x


def dense(rng, n_in, n_out, a, scale=None):
    s = scale if scale is not None else np.sqrt(2.0 / n_in)
    return {"w": rng.normal(size=(n_out, n_in)) * s, "b": rng.normal(size=n_out) * 0.1, "act": a}


def net_to_json(net):
    return [{"w": np.asarray(L["w"]).tolist(), "b": np.asarray(L["b"]).tolist(), "act": L["act"]}
            for L in net]


def dump(name, obj):
    path = os.path.join(OUT_DIR, name)
    with open(path, "w") as f:
        json.dump(obj, f)
    print("wrote", path, os.path.getsize(path), "bytes")


# ----------------------------------------------------------------------------
# mlp_ref: random weights, every activation represented, plus frozen pairs.
# ----------------------------------------------------------------------------
def gen_mlp_ref():
    rng = np.random.default_rng(20250810)
    m, d, D = 2, 2, 3
    encoders = [
        [dense(rng, D, 4, "tanh"), dense(rng, 4, d, "identity")],
        [dense(rng, D, 5, "relu"), dense(rng, 5, d, "tanh")],
    ]
    decoders = [
        [dense(rng, d, 4, "swish"), dense(rng, 4, D, "identity")],
        [dense(rng, d, 6, "sigmoid"), dense(rng, 6, D, "identity")],
    ]
    partition = [dense(rng, D, 4, "swish"), dense(rng, 4, m, "softmax")]

    model = {"m": m, "d": d, "D": D,
             "encoders": [net_to_json(n) for n in encoders],
             "decoders": [net_to_json(n) for n in decoders],
             "partition": net_to_json(partition)}
    dump("mlp_ref.json", model)

    pairs = []
    for net_name, nets, in_dim in (("encoder", encoders, D),
                                   ("decoder", decoders, d)):
        for chart, net in enumerate(nets, start=1):
            for _ in range(4):
                x = rng.normal(size=in_dim) * 1.5
                pairs.append({"net": net_name, "chart": chart,
                              "in": x.tolist(), "out": forward(net, x).tolist()})
    for _ in range(4):
        x = rng.normal(size=D) * 1.5
        pairs.append({"net": "partition", "chart": 0,
                      "in": x.tolist(), "out": forward(partition, x).tolist()})
    assert len(pairs) == 20
    dump("mlp_ref_pairs.json", pairs)


# ----------------------------------------------------------------------------
# sphere_net: fit encoders/decoders to the stereographic charts of S^2.
# Chart 1 projects from the north pole, chart 2 from the south pole.
# ----------------------------------------------------------------------------
def fwd_cache(net, x):
    caches, h = [], x
    for L in net:
        z = h @ L["w"].T + L["b"]
        caches.append((h, z))
        h = act(L["act"], z)
    return h, caches


def backward(net, caches, dout):
    grads = [None] * len(net)
    g = dout
    for i in range(len(net) - 1, -1, -1):
        h, z = caches[i]
        a = net[i]["act"]
        if a == "identity":
            dz = g
        elif a == "swish":
            sig = 1.0 / (1.0 + np.exp(-z))
            dz = g * (sig * (1.0 + z * (1.0 - sig)))
        else:
            raise ValueError(a)
        grads[i] = (dz.T @ h, dz.sum(axis=0))
        g = dz @ net[i]["w"]
    return grads


def fit(net, X, Y, rng, steps=4000, batch=512, lr=1e-3):
    ms = [(np.zeros_like(L["w"]), np.zeros_like(L["b"])) for L in net]
    vs = [(np.zeros_like(L["w"]), np.zeros_like(L["b"])) for L in net]
    b1, b2, eps = 0.9, 0.999, 1e-8
    n = len(X)
    for t in range(1, steps + 1):
        idx = rng.integers(0, n, size=batch)
        xb, yb = X[idx], Y[idx]
        pred, caches = fwd_cache(net, xb)
        grads = backward(net, caches, 2.0 * (pred - yb) / batch)
        for i, L in enumerate(net):
            for key, gi, mi, vi in (("w", 0, 0, 0), ("b", 1, 1, 1)):
                g = grads[i][gi]
                m_new = b1 * ms[i][gi] + (1 - b1) * g
                v_new = b2 * vs[i][gi] + (1 - b2) * g * g
                ms[i] = (m_new, ms[i][1]) if gi == 0 else (ms[i][0], m_new)
                vs[i] = (v_new, vs[i][1]) if gi == 0 else (vs[i][0], v_new)
                mh = m_new / (1 - b1 ** t)
                vh = v_new / (1 - b2 ** t)
                L[key] = L[key] - lr * mh / (np.sqrt(vh) + eps)
    pred, _ = fwd_cache(net, X)
    return float(np.mean((pred - Y) ** 2))


def gen_sphere_net():
    rng = np.random.default_rng(31415)
    x = rng.normal(size=(40000, 3))
    x /= np.linalg.norm(x, axis=1, keepdims=True)

    def make(dims, acts):
        return [dense(rng, a, b, ac) for a, b, ac in zip(dims[:-1], dims[1:], acts)]

    encoders, decoders = [], []
    for chart in (1, 2):
        sign = -1.0 if chart == 1 else 1.0       # chart 1: divide by 1 - x3
        keep = x[:, 2] * (-sign) < 0.8           # psi_chart >= 0.1
        xs = x[keep]
        z = xs[:, :2] / (1.0 + sign * xs[:, 2])[:, None]
        enc = make([3, 32, 32, 2], ["swish", "swish", "identity"])
        mse_e = fit(enc, xs, z, rng)
        dec = make([2, 32, 32, 3], ["swish", "swish", "identity"])
        mse_d = fit(dec, z, xs, rng)
        print(f"chart {chart}: encoder mse {mse_e:.2e}, decoder mse {mse_d:.2e}")
        encoders.append(enc)
        decoders.append(dec)

    # Linear logits in x3 through a softmax: chart 2 dominates the upper
    # hemisphere, matching the analytic weights' argmax everywhere.
    partition = [{"w": np.array([[0.0, 0.0, -4.0], [0.0, 0.0, 4.0]]),
                  "b": np.zeros(2), "act": "softmax"}]

    model = {"m": 2, "d": 2, "D": 3,
             "encoders": [net_to_json(n) for n in encoders],
             "decoders": [net_to_json(n) for n in decoders],
             "partition": net_to_json(partition)}
    dump("sphere_net.json", model)


# ----------------------------------------------------------------------------
# img_net: random weights shaped like a 28x28 image model.
# ----------------------------------------------------------------------------
def gen_img_net():
    rng = np.random.default_rng(2718)
    m, d, D = 2, 2, 784
    model = {"m": m, "d": d, "D": D,
             "encoders": [net_to_json([dense(rng, D, 4, "swish"), dense(rng, 4, d, "identity")])
                          for _ in range(m)],
             "decoders": [net_to_json([dense(rng, d, 4, "swish"),
                                       dense(rng, 4, D, "sigmoid", scale=0.5)])
                          for _ in range(m)],
             "partition": net_to_json([dense(rng, D, m, "softmax", scale=0.1)])}
    dump("img_net.json", model)


if __name__ == "__main__":
    os.makedirs(OUT_DIR, exist_ok=True)
    gen_mlp_ref()
    gen_sphere_net()
    gen_img_net()
