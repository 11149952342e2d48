#include "gdnn/network.hpp"

#include <algorithm>
#include <cmath>

#include "gdnn/dataset.hpp"
#include "gdnn/errors.hpp"
#include "gdnn/rng.hpp"

namespace gd {

namespace {

void add_row_bias(Matrix& m, const Vector& b) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double* r = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) r[j] += b[j];
    }
}

Vector colsum(const Matrix& m) {
    Vector s(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* r = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) s[j] += r[j];
    }
    return s;
}

void check_labels(const std::vector<int>& labels, std::size_t rows, std::size_t classes) {
    if (labels.size() != rows) {
        throw ShapeError("labels length " + std::to_string(labels.size()) + " vs batch rows " +
                         std::to_string(rows));
    }
    for (int y : labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= classes) {
            throw DataError("label " + std::to_string(y) + " outside [0," +
                            std::to_string(classes) + ")");
        }
    }
}

// softmax(logits) - onehot, divided by the batch size: the gradient of the
// mean cross-entropy w.r.t. logits.
Matrix dlogits_mean_ce(const Matrix& logits, const std::vector<int>& labels) {
    Matrix d(logits.rows(), logits.cols());
    const double inv_b = 1.0 / static_cast<double>(logits.rows());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        const double* l = logits.row(i);
        double* out = d.row(i);
        double mx = l[0];
        for (std::size_t j = 1; j < logits.cols(); ++j) mx = std::max(mx, l[j]);
        double z = 0.0;
        for (std::size_t j = 0; j < logits.cols(); ++j) z += std::exp(l[j] - mx);
        for (std::size_t j = 0; j < logits.cols(); ++j) out[j] = std::exp(l[j] - mx) / z * inv_b;
        out[labels[i]] -= inv_b;
    }
    return d;
}

}  // namespace

bool Gradients::all_finite() const {
    auto vec_ok = [](const Vector& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    for (const auto& g : hidden) {
        if (!g.dW.all_finite() || !vec_ok(g.db) || !vec_ok(g.dt)) return false;
    }
    return dW_out.all_finite() && vec_ok(db_out);
}

Network init_network(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 3) {
        throw ConfigError("architecture needs input, at least one hidden, and output layer");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw ConfigError("zero-width layer in architecture");
    }

    Network net;
    net.sizes = layer_sizes;
    net.seed = seed;
    const std::size_t n_hidden = layer_sizes.size() - 2;
    for (std::size_t l = 0; l < n_hidden; ++l) {
        const std::size_t n_in = layer_sizes[l];
        const std::size_t n_out = layer_sizes[l + 1];
        RngStream wrng(seed, l);
        RngStream trng(seed, 1000 + l);
        DenseLayer layer;
        layer.W = sample_normal(wrng, n_out, n_in, 0.0, std::sqrt(2.0 / static_cast<double>(n_in)));
        layer.b.assign(n_out, 0.0);
        layer.t.resize(n_out);
        trng.fill_uniform(layer.t.data(), n_out, 0.0, 1.0);
        net.hidden.push_back(std::move(layer));
    }
    RngStream orng(seed, n_hidden);
    const std::size_t n_in = layer_sizes[layer_sizes.size() - 2];
    const std::size_t n_out = layer_sizes.back();
    net.out.W = sample_normal(orng, n_out, n_in, 0.0, std::sqrt(2.0 / static_cast<double>(n_in)));
    net.out.b.assign(n_out, 0.0);
    return net;
}

std::size_t strength_param_count(const std::vector<std::size_t>& layer_sizes) {
    if (layer_sizes.size() < 3) return 0;
    std::size_t n = 0;
    for (std::size_t l = 1; l + 1 < layer_sizes.size(); ++l) n += layer_sizes[l];
    return n;
}

std::vector<MaskWithScale> inference_masks(const Network& net) {
    std::vector<MaskWithScale> masks;
    masks.reserve(net.hidden.size());
    for (const auto& layer : net.hidden) masks.push_back(MaskWithScale::all_ones(layer.out_dim()));
    return masks;
}

ForwardCache forward(const Network& net, const Matrix& batch,
                     const std::vector<MaskWithScale>& masks) {
    if (batch.cols() != net.input_dim()) {
        throw ShapeError("batch dim " + std::to_string(batch.cols()) + " vs input dim " +
                         std::to_string(net.input_dim()));
    }
    if (masks.size() != net.hidden.size()) {
        throw ShapeError("got " + std::to_string(masks.size()) + " masks for " +
                         std::to_string(net.hidden.size()) + " hidden layers");
    }

    ForwardCache cache;
    cache.input = batch;
    cache.layers.resize(net.hidden.size());

    const Matrix* x = &cache.input;
    for (std::size_t l = 0; l < net.hidden.size(); ++l) {
        const DenseLayer& layer = net.hidden[l];
        const MaskWithScale& mask = masks[l];
        if (mask.r.size() != layer.out_dim()) {
            throw ShapeError("mask length " + std::to_string(mask.r.size()) + " vs layer width " +
                             std::to_string(layer.out_dim()));
        }
        auto& lc = cache.layers[l];
        lc.r = mask.r;
        lc.scale = mask.scale;

        lc.z = matmul_nt(*x, layer.W);
        add_row_bias(lc.z, layer.b);

        const std::size_t n = layer.out_dim();
        lc.h = Matrix(lc.z.rows(), n);
        lc.a = Matrix(lc.z.rows(), n);
        lc.am = Matrix(lc.z.rows(), n);
        for (std::size_t i = 0; i < lc.z.rows(); ++i) {
            const double* z = lc.z.row(i);
            double* h = lc.h.row(i);
            double* a = lc.a.row(i);
            double* am = lc.am.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                h[j] = z[j] > 0.0 ? z[j] : 0.0;
                a[j] = layer.t[j] * h[j];
                am[j] = mask.r[j] ? mask.scale * a[j] : 0.0;
            }
        }
        x = &lc.am;
    }

    cache.logits = matmul_nt(*x, net.out.W);
    add_row_bias(cache.logits, net.out.b);
    return cache;
}

double loss_softmax_ce(const Matrix& logits, const std::vector<int>& labels) {
    check_labels(labels, logits.rows(), logits.cols());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        const double* l = logits.row(i);
        double mx = l[0];
        for (std::size_t j = 1; j < logits.cols(); ++j) mx = std::max(mx, l[j]);
        double z = 0.0;
        for (std::size_t j = 0; j < logits.cols(); ++j) z += std::exp(l[j] - mx);
        total += mx + std::log(z) - l[labels[i]];
    }
    return total / static_cast<double>(logits.rows());
}

Gradients backward(const Network& net, const ForwardCache& cache,
                   const std::vector<int>& labels) {
    if (cache.layers.size() != net.hidden.size() || cache.logits.cols() != net.output_dim()) {
        throw ContractError("cache does not match this network");
    }
    for (std::size_t l = 0; l < net.hidden.size(); ++l) {
        if (cache.layers[l].z.cols() != net.hidden[l].out_dim()) {
            throw ContractError("cache layer " + std::to_string(l) + " width mismatch");
        }
    }
    check_labels(labels, cache.logits.rows(), cache.logits.cols());

    Gradients grads;
    grads.hidden.resize(net.hidden.size());

    const Matrix dlogits = dlogits_mean_ce(cache.logits, labels);
    const Matrix& last_am =
        net.hidden.empty() ? cache.input : cache.layers.back().am;
    grads.dW_out = matmul_tn(dlogits, last_am);
    grads.db_out = colsum(dlogits);

    // g holds dL/d(am) for the layer being processed.
    Matrix g = matmul(dlogits, net.out.W);
    for (std::size_t li = net.hidden.size(); li-- > 0;) {
        const DenseLayer& layer = net.hidden[li];
        const auto& lc = cache.layers[li];
        const std::size_t n = layer.out_dim();

        Matrix dz(g.rows(), n);
        Vector dt(n, 0.0);
        for (std::size_t i = 0; i < g.rows(); ++i) {
            const double* gr = g.row(i);
            const double* z = lc.z.row(i);
            const double* h = lc.h.row(i);
            double* dzr = dz.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                const double da = lc.r[j] ? lc.scale * gr[j] : 0.0;
                dt[j] += da * h[j];
                dzr[j] = z[j] > 0.0 ? layer.t[j] * da : 0.0;
            }
        }

        const Matrix& input = li == 0 ? cache.input : cache.layers[li - 1].am;
        auto& lg = grads.hidden[li];
        lg.dW = matmul_tn(dz, input);
        lg.db = colsum(dz);
        lg.dt = std::move(dt);
        if (li > 0) g = matmul(dz, layer.W);
    }
    return grads;
}

double accuracy(const Network& net, const Dataset& data) {
    if (data.size() == 0) return 0.0;
    const auto masks = inference_masks(net);
    constexpr std::size_t kChunk = 256;
    std::size_t hits = 0;
    for (std::size_t start = 0; start < data.size(); start += kChunk) {
        const std::size_t rows = std::min(kChunk, data.size() - start);
        Matrix batch(rows, data.dim());
        std::copy(data.features.row(start), data.features.row(start) + rows * data.dim(),
                  batch.row(0));
        const ForwardCache cache = forward(net, batch, masks);
        for (std::size_t i = 0; i < rows; ++i) {
            const double* l = cache.logits.row(i);
            std::size_t best = 0;
            for (std::size_t j = 1; j < cache.logits.cols(); ++j) {
                if (l[j] > l[best]) best = j;
            }
            hits += (static_cast<int>(best) == data.labels[start + i]);
        }
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace gd
