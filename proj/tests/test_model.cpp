#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gdnn/dataset.hpp"
#include "gdnn/errors.hpp"
#include "gdnn/mask.hpp"
#include "gdnn/network.hpp"
#include "gdnn/rng.hpp"

using namespace gd;

namespace {

Network tiny_fixed_net() {
    // [2,3,2] with hand-picked parameters
    Network net = init_network({2, 3, 2}, 1);
    auto& l = net.hidden[0];
    l.W = Matrix(3, 2, {0.5, 0.25, -0.5, 1.0, 2.0, 0.0});
    l.b = {0.1, -0.2, 0.3};
    l.t = {2.0, 3.0, 0.5};
    net.out.W = Matrix(2, 3, {1.0, 0.0, 1.0, 0.0, 1.0, -1.0});
    net.out.b = {0.05, -0.05};
    return net;
}

double net_loss_with_masks(Network& net, const Matrix& x, const std::vector<int>& labels,
                           const std::vector<MaskWithScale>& masks) {
    const ForwardCache cache = forward(net, x, masks);
    return loss_softmax_ce(cache.logits, labels);
}

}  // namespace

TEST_CASE("init produces the right shapes and ranges") {
    const Network net = init_network({4, 8, 6, 3}, 42);
    CHECK(net.sizes == std::vector<std::size_t>{4, 8, 6, 3});
    CHECK(net.hidden.size() == 2);
    CHECK(net.hidden[0].W.rows() == 8);
    CHECK(net.hidden[0].W.cols() == 4);
    CHECK(net.hidden[1].W.rows() == 6);
    CHECK(net.hidden[1].W.cols() == 8);
    CHECK(net.out.W.rows() == 3);
    CHECK(net.out.W.cols() == 6);
    CHECK(net.input_dim() == 4);
    CHECK(net.output_dim() == 3);

    for (const auto& l : net.hidden) {
        for (double v : l.b) CHECK(v == 0.0);
        for (double v : l.t) {
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
        }
    }
    for (double v : net.out.b) CHECK(v == 0.0);

    // weight scale should follow sqrt(2/fan_in) roughly
    double s2 = 0;
    for (double v : net.hidden[0].W.data()) s2 += v * v;
    const double sd = std::sqrt(s2 / net.hidden[0].W.size());
    CHECK(sd > 0.3);
    CHECK(sd < 1.2);
}

TEST_CASE("init is deterministic in the seed") {
    const Network a = init_network({5, 7, 4}, 9);
    const Network b = init_network({5, 7, 4}, 9);
    const Network c = init_network({5, 7, 4}, 10);
    CHECK(a.hidden[0].W.data() == b.hidden[0].W.data());
    CHECK(a.hidden[0].t == b.hidden[0].t);
    CHECK(a.out.W.data() == b.out.W.data());
    CHECK(a.hidden[0].W.data() != c.hidden[0].W.data());
}

TEST_CASE("init validates the layer list") {
    CHECK_THROWS_AS(init_network({4, 3}, 1), ConfigError);
    CHECK_THROWS_AS(init_network({4, 0, 3}, 1), ConfigError);
    CHECK_THROWS_AS(init_network({}, 1), ConfigError);
}

TEST_CASE("strength parameter count sums hidden widths") {
    CHECK(strength_param_count({784, 8192, 8192, 8192, 10}) == 24576);
    CHECK(strength_param_count({784, 256, 256, 10}) == 512);
    CHECK(strength_param_count({4, 8, 6, 3}) == 14);
}

TEST_CASE("forward matches a hand computation") {
    Network net = tiny_fixed_net();
    const Matrix x(1, 2, {1.0, -1.0});

    std::vector<MaskWithScale> masks = inference_masks(net);
    ForwardCache cache = forward(net, x, masks);
    const auto& lc = cache.layers[0];
    CHECK(lc.z(0, 0) == doctest::Approx(0.35));
    CHECK(lc.z(0, 1) == doctest::Approx(-1.7));
    CHECK(lc.z(0, 2) == doctest::Approx(2.3));
    CHECK(lc.h(0, 0) == doctest::Approx(0.35));
    CHECK(lc.h(0, 1) == 0.0);
    CHECK(lc.h(0, 2) == doctest::Approx(2.3));
    CHECK(lc.a(0, 0) == doctest::Approx(0.7));
    CHECK(lc.a(0, 2) == doctest::Approx(1.15));
    CHECK(cache.logits(0, 0) == doctest::Approx(0.7 + 1.15 + 0.05));
    CHECK(cache.logits(0, 1) == doctest::Approx(-1.15 - 0.05));

    // drop the middle node and rescale
    masks[0].r = {1, 0, 1};
    masks[0].scale = 1.5;
    cache = forward(net, x, masks);
    CHECK(cache.layers[0].am(0, 0) == doctest::Approx(1.05));
    CHECK(cache.layers[0].am(0, 1) == 0.0);
    CHECK(cache.layers[0].am(0, 2) == doctest::Approx(1.725));
    CHECK(cache.logits(0, 0) == doctest::Approx(1.05 + 1.725 + 0.05));
}

TEST_CASE("dropped nodes produce exact zeros") {
    Network net = init_network({6, 10, 4}, 3);
    RngStream rng(4, 0);
    const Matrix x = sample_normal(rng, 5, 6, 0.0, 1.0);
    auto masks = inference_masks(net);
    masks[0].r = {1, 0, 1, 0, 1, 0, 1, 0, 1, 0};
    masks[0].scale = 2.0;
    const ForwardCache cache = forward(net, x, masks);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 1; j < 10; j += 2) CHECK(cache.layers[0].am(i, j) == 0.0);
    }
}

TEST_CASE("forward validates input width and mask shape") {
    Network net = init_network({4, 5, 2}, 1);
    const Matrix bad(2, 3);
    CHECK_THROWS_AS(forward(net, bad, inference_masks(net)), ShapeError);
    auto masks = inference_masks(net);
    masks[0].r.pop_back();
    const Matrix ok(2, 4);
    CHECK_THROWS_AS(forward(net, ok, masks), ShapeError);
}

TEST_CASE("softmax cross entropy is stable and correct") {
    // two rows, hand-computable
    Matrix logits(2, 3, {1.0, 2.0, 3.0, 0.0, 0.0, 0.0});
    const std::vector<int> labels = {2, 0};
    const double l0 = -std::log(std::exp(3.0) / (std::exp(1.0) + std::exp(2.0) + std::exp(3.0)));
    const double l1 = -std::log(1.0 / 3.0);
    CHECK(loss_softmax_ce(logits, labels) == doctest::Approx(0.5 * (l0 + l1)));

    // huge logits must not overflow
    Matrix big(1, 2, {1000.0, 999.0});
    const double lb = loss_softmax_ce(big, {0});
    CHECK(std::isfinite(lb));
    CHECK(lb == doctest::Approx(std::log(1.0 + std::exp(-1.0))));

    CHECK_THROWS_AS(loss_softmax_ce(logits, {2}), ShapeError);      // row count mismatch
    CHECK_THROWS_AS(loss_softmax_ce(logits, {3, 0}), DataError);    // label out of range
    CHECK_THROWS_AS(loss_softmax_ce(logits, {-1, 0}), DataError);
}

TEST_CASE("backward matches central finite differences") {
    Network net = init_network({3, 5, 4, 3}, 77);
    RngStream rng(78, 0);
    const Matrix x = sample_normal(rng, 4, 3, 0.0, 1.0);
    const std::vector<int> labels = {0, 2, 1, 2};

    // non-trivial masks with rescale on both hidden layers
    std::vector<MaskWithScale> masks = inference_masks(net);
    masks[0].r = {1, 0, 1, 1, 0};
    masks[0].scale = 5.0 / 3.0;
    masks[1].r = {1, 1, 0, 1};
    masks[1].scale = 4.0 / 3.0;

    const ForwardCache cache = forward(net, x, masks);
    const Gradients grads = backward(net, cache, labels);

    const double h = 1e-6;
    const double tol = 1e-6;
    auto fd_check = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = net_loss_with_masks(net, x, labels, masks);
        param = saved - h;
        const double dn = net_loss_with_masks(net, x, labels, masks);
        param = saved;
        const double fd = (up - dn) / (2 * h);
        CHECK(std::fabs(fd - analytic) <= tol * std::max(1.0, std::fabs(analytic)));
    };

    for (std::size_t l = 0; l < net.hidden.size(); ++l) {
        auto& layer = net.hidden[l];
        for (std::size_t i = 0; i < layer.W.size(); ++i) {
            fd_check(layer.W.data()[i], grads.hidden[l].dW.data()[i]);
        }
        for (std::size_t i = 0; i < layer.b.size(); ++i) {
            fd_check(layer.b[i], grads.hidden[l].db[i]);
        }
        for (std::size_t i = 0; i < layer.t.size(); ++i) {
            fd_check(layer.t[i], grads.hidden[l].dt[i]);
        }
    }
    for (std::size_t i = 0; i < net.out.W.size(); ++i) {
        fd_check(net.out.W.data()[i], grads.dW_out.data()[i]);
    }
    for (std::size_t i = 0; i < net.out.b.size(); ++i) fd_check(net.out.b[i], grads.db_out[i]);
}

TEST_CASE("dropped nodes receive no strength gradient") {
    Network net = init_network({3, 4, 2}, 5);
    RngStream rng(6, 0);
    const Matrix x = sample_normal(rng, 6, 3, 0.0, 1.0);
    const std::vector<int> labels = {0, 1, 0, 1, 0, 1};
    auto masks = inference_masks(net);
    masks[0].r = {0, 1, 0, 1};
    masks[0].scale = 2.0;
    const ForwardCache cache = forward(net, x, masks);
    const Gradients grads = backward(net, cache, labels);
    CHECK(grads.hidden[0].dt[0] == 0.0);
    CHECK(grads.hidden[0].dt[2] == 0.0);
    CHECK(grads.hidden[0].dt[1] != 0.0);
}

TEST_CASE("backward rejects a cache from another network") {
    Network a = init_network({3, 4, 2}, 5);
    Network b = init_network({3, 5, 2}, 5);
    RngStream rng(6, 0);
    const Matrix x = sample_normal(rng, 2, 3, 0.0, 1.0);
    const ForwardCache cache = forward(a, x, inference_masks(a));
    CHECK_THROWS_AS(backward(b, cache, std::vector<int>{0, 1}), ContractError);
}

TEST_CASE("accuracy counts argmax hits") {
    // identity-like network: logits reproduce the (positive) input
    Network net = init_network({2, 2, 2}, 1);
    net.hidden[0].W = Matrix::identity(2);
    net.hidden[0].b = {0.0, 0.0};
    net.hidden[0].t = {1.0, 1.0};
    net.out.W = Matrix::identity(2);
    net.out.b = {0.0, 0.0};

    Dataset d;
    d.features = Matrix(4, 2, {0.9, 0.1, 0.2, 0.8, 0.6, 0.4, 0.3, 0.7});
    d.labels = {0, 1, 0, 0};  // last label is wrong on purpose
    d.num_classes = 2;
    CHECK(accuracy(net, d) == doctest::Approx(0.75));
}
