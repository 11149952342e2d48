#pragma once

#include <cstdint>
#include <vector>

#include "gdnn/mask.hpp"
#include "gdnn/matrix.hpp"

namespace gd {

// One hidden layer: a = t ⊙ relu(W x + b). W is N_out × N_in, |b| = |t| = W.rows.
// t is trained unconstrained; rankings and reporting use |t|.
struct DenseLayer {
    Matrix W;
    Vector b;
    Vector t;

    std::size_t out_dim() const { return W.rows(); }
    std::size_t in_dim() const { return W.cols(); }
};

// Output layer is affine only: logits = W x + b. No strength, never masked.
struct OutputLayer {
    Matrix W;
    Vector b;
};

struct Network {
    std::vector<std::size_t> sizes;  // input, hidden..., output
    std::vector<DenseLayer> hidden;
    OutputLayer out;
    std::uint64_t seed = 0;

    std::size_t input_dim() const { return sizes.front(); }
    std::size_t output_dim() const { return sizes.back(); }
};

// Everything backward needs, captured per layer during forward.
//   z  pre-activation, h = relu(z), a = t ⊙ h, am = scale · (r ⊙ a)
// The input of hidden layer l is X for l = 0, otherwise layers[l-1].am.
struct ForwardCache {
    struct LayerCache {
        Matrix z;
        Matrix h;
        Matrix a;
        Matrix am;
        BinaryVector r;
        double scale = 1.0;
    };
    Matrix input;
    std::vector<LayerCache> layers;
    Matrix logits;
};

struct Gradients {
    struct LayerGrads {
        Matrix dW;
        Vector db;
        Vector dt;
    };
    std::vector<LayerGrads> hidden;
    Matrix dW_out;
    Vector db_out;

    bool all_finite() const;
};

// W ~ N(0, sqrt(2/N_in)), b = 0, t ~ U[0,1). Same seed, same network.
// layer_sizes must list input, at least one hidden, and output width.
Network init_network(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

// Strength parameters the architecture carries (sum of hidden widths).
std::size_t strength_param_count(const std::vector<std::size_t>& layer_sizes);

// masks.size() must equal the hidden layer count; pass all-ones masks with
// scale 1 for inference.
ForwardCache forward(const Network& net, const Matrix& batch,
                     const std::vector<MaskWithScale>& masks);

std::vector<MaskWithScale> inference_masks(const Network& net);

// Mean cross-entropy over the batch, log-sum-exp stabilized.
double loss_softmax_ce(const Matrix& logits, const std::vector<int>& labels);

// Gradients of the mean softmax cross-entropy w.r.t. every parameter.
Gradients backward(const Network& net, const ForwardCache& cache,
                   const std::vector<int>& labels);

struct Dataset;

// Argmax-match fraction in inference mode.
double accuracy(const Network& net, const Dataset& data);

}  // namespace gd
