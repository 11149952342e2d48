#include "gdnn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "gdnn/errors.hpp"

namespace gd {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void TrainConfig::validate() const {
    if (layer_sizes.size() < 3) {
        throw ConfigError("layer_sizes needs input, at least one hidden, and output width");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw ConfigError("layer_sizes contains a zero width");
    }
    policy.validate();
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (!(lr_initial > 0.0)) throw ConfigError("lr_initial must be positive");
    if (lr_decay_every == 0) throw ConfigError("lr_decay_every must be positive");
    if (!(lr_decay_factor >= 1.0)) throw ConfigError("lr_decay_factor must be >= 1");
    if (!phase_schedule.empty() && !policy.is_guided()) {
        throw ConfigError("phase_schedule only applies to guided policies");
    }
    std::size_t phase_total = 0;
    for (const auto& p : phase_schedule) {
        if (p.rate < 0.0 || p.rate >= 1.0) {
            throw ConfigError("phase rate " + std::to_string(p.rate) + " outside [0,1)");
        }
        if (p.epochs == 0) throw ConfigError("phase with zero epochs");
        phase_total += p.epochs;
    }
    if (policy.is_guided() && strength_warmup_epochs + phase_total > epochs) {
        throw ConfigError("warmup " + std::to_string(strength_warmup_epochs) + " + phases " +
                          std::to_string(phase_total) + " exceed " + std::to_string(epochs) +
                          " epochs");
    }
}

std::vector<PhaseSpec> default_phase_schedule(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::GuidedDR:
            return {{0.2, 60}, {0.15, 50}, {0.1, 50}};
        case PolicyKind::GuidedTopK:
            return {{0.2, 10}, {0.0, 40}, {0.15, 10}, {0.0, 40}, {0.1, 10}, {0.0, 50}};
        default:
            return {};
    }
}

TrainConfig make_default_config(const DropoutPolicy& policy,
                                std::vector<std::size_t> layer_sizes) {
    TrainConfig cfg;
    cfg.layer_sizes = std::move(layer_sizes);
    cfg.policy = policy;
    cfg.phase_schedule = default_phase_schedule(policy.kind);
    return cfg;
}

TrainConfig scale_to_epochs(const TrainConfig& cfg, std::size_t new_epochs) {
    if (new_epochs == 0) throw ConfigError("cannot scale to zero epochs");
    TrainConfig out = cfg;
    out.epochs = new_epochs;
    if (new_epochs == cfg.epochs) return out;

    const double f = static_cast<double>(new_epochs) / static_cast<double>(cfg.epochs);
    auto scaled = [f](std::size_t e) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(
                                            std::floor(static_cast<double>(e) * f)));
    };
    out.lr_decay_every = scaled(cfg.lr_decay_every);
    if (cfg.strength_warmup_epochs > 0) {
        out.strength_warmup_epochs = scaled(cfg.strength_warmup_epochs);
    }

    if (!cfg.phase_schedule.empty()) {
        out.phase_schedule.clear();
        for (const auto& p : cfg.phase_schedule) {
            out.phase_schedule.push_back({p.rate, scaled(p.epochs)});
        }
        // Rebalance so warmup + phases fill the new budget exactly: grow the
        // last phase, or shave phases from the back (down to 1 epoch each).
        std::size_t total = out.strength_warmup_epochs;
        for (const auto& p : out.phase_schedule) total += p.epochs;
        if (total < new_epochs) {
            out.phase_schedule.back().epochs += new_epochs - total;
        } else if (total > new_epochs) {
            std::size_t excess = total - new_epochs;
            for (std::size_t i = out.phase_schedule.size(); i-- > 0 && excess > 0;) {
                const std::size_t cut = std::min(excess, out.phase_schedule[i].epochs - 1);
                out.phase_schedule[i].epochs -= cut;
                excess -= cut;
            }
            if (excess > 0) {
                throw ConfigError("epoch budget " + std::to_string(new_epochs) +
                                  " too small for schedule");
            }
        }
    }
    out.validate();
    return out;
}

double lr_at(std::size_t epoch, const TrainConfig& cfg) {
    if (epoch >= cfg.epochs) throw ParamError("lr_at: epoch out of range");
    double lr = cfg.lr_initial;
    for (std::size_t i = 0; i < epoch / cfg.lr_decay_every; ++i) lr /= cfg.lr_decay_factor;
    return lr;
}

double drop_rate_at(std::size_t epoch, const TrainConfig& cfg) {
    if (epoch >= cfg.epochs) throw ParamError("drop_rate_at: epoch out of range");
    switch (cfg.policy.kind) {
        case PolicyKind::None:
        case PolicyKind::StrengthOnly:
            return 0.0;
        case PolicyKind::Standard:
            return cfg.policy.rate;
        case PolicyKind::GuidedTopK:
        case PolicyKind::GuidedDR:
            break;
    }
    if (epoch < cfg.strength_warmup_epochs) return 0.0;
    if (cfg.phase_schedule.empty()) return cfg.policy.rate;
    std::size_t e = epoch - cfg.strength_warmup_epochs;
    for (const auto& p : cfg.phase_schedule) {
        if (e < p.epochs) return p.rate;
        e -= p.epochs;
    }
    return cfg.phase_schedule.back().rate;
}

void sgd_step(Network& net, const Gradients& grads, double lr) {
    if (grads.hidden.size() != net.hidden.size()) {
        throw ContractError("gradients do not match network layout");
    }
    if (!grads.all_finite()) {
        throw NumericError("non-finite gradient encountered; training aborted");
    }
    auto axpy = [lr](Vector& p, const Vector& g) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
    };
    for (std::size_t l = 0; l < net.hidden.size(); ++l) {
        auto& layer = net.hidden[l];
        const auto& g = grads.hidden[l];
        if (!layer.W.same_shape(g.dW)) throw ContractError("dW shape mismatch");
        axpy(layer.W.data(), g.dW.data());
        axpy(layer.b, g.db);
        axpy(layer.t, g.dt);
    }
    axpy(net.out.W.data(), grads.dW_out.data());
    axpy(net.out.b, grads.db_out);
}

double train_one_epoch(Network& net, const TrainConfig& cfg, const Dataset& train_set,
                       std::size_t epoch, RngStream& shuffle_rng, RngStream& mask_rng) {
    const std::size_t n = train_set.size();
    const double lr = lr_at(epoch, cfg);
    const double rate = drop_rate_at(epoch, cfg);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    shuffle_inplace(order, shuffle_rng);

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
        const std::size_t rows = std::min(cfg.batch_size, n - start);
        Matrix xb(rows, train_set.dim());
        std::vector<int> yb(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const std::size_t src = order[start + i];
            std::copy(train_set.features.row(src), train_set.features.row(src) + train_set.dim(),
                      xb.row(i));
            yb[i] = train_set.labels[src];
        }
        const auto masks = masks_for_network(net, cfg.policy, rate, mask_rng);
        const ForwardCache cache = forward(net, xb, masks);
        loss_sum += loss_softmax_ce(cache.logits, yb);
        const Gradients grads = backward(net, cache, yb);
        sgd_step(net, grads, lr);
        ++batches;
    }
    return batches ? loss_sum / static_cast<double>(batches) : 0.0;
}

std::pair<double, double> evaluate(const Network& net, const Dataset& data) {
    if (data.size() == 0) return {0.0, 0.0};
    const auto masks = inference_masks(net);
    constexpr std::size_t kChunk = 256;
    double loss_sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t start = 0; start < data.size(); start += kChunk) {
        const std::size_t rows = std::min(kChunk, data.size() - start);
        Matrix batch(rows, data.dim());
        std::copy(data.features.row(start), data.features.row(start) + rows * data.dim(),
                  batch.row(0));
        std::vector<int> labels(data.labels.begin() + static_cast<std::ptrdiff_t>(start),
                                data.labels.begin() + static_cast<std::ptrdiff_t>(start + rows));
        const ForwardCache cache = forward(net, batch, masks);
        loss_sum += loss_softmax_ce(cache.logits, labels) * static_cast<double>(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const double* l = cache.logits.row(i);
            std::size_t best = 0;
            for (std::size_t j = 1; j < cache.logits.cols(); ++j) {
                if (l[j] > l[best]) best = j;
            }
            hits += (static_cast<int>(best) == labels[i]);
        }
    }
    return {loss_sum / static_cast<double>(data.size()),
            static_cast<double>(hits) / static_cast<double>(data.size())};
}

std::pair<Network, std::vector<EpochMetrics>> train(const TrainConfig& cfg,
                                                    const Dataset& train_set,
                                                    const Dataset& test_set,
                                                    const EpochCallback& on_epoch) {
    cfg.validate();
    train_set.validate();
    test_set.validate();
    if (train_set.size() == 0 || test_set.size() == 0) {
        throw DataError("train: empty dataset");
    }
    if (train_set.dim() != cfg.layer_sizes.front()) {
        throw ConfigError("feature dim " + std::to_string(train_set.dim()) +
                          " != input width " + std::to_string(cfg.layer_sizes.front()));
    }
    if (static_cast<std::size_t>(train_set.num_classes) != cfg.layer_sizes.back()) {
        throw ConfigError("num_classes " + std::to_string(train_set.num_classes) +
                          " != output width " + std::to_string(cfg.layer_sizes.back()));
    }
    if (train_set.dim() != test_set.dim()) throw DataError("train/test dim mismatch");

    Network net = init_network(cfg.layer_sizes, cfg.seed);
    RngStream shuffle_rng(cfg.seed, 10001);
    RngStream mask_rng(cfg.seed, 10002);

    std::vector<EpochMetrics> metrics;
    metrics.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        train_one_epoch(net, cfg, train_set, epoch, shuffle_rng, mask_rng);
        const auto t1 = std::chrono::steady_clock::now();

        EpochMetrics m;
        m.epoch = epoch;
        m.lr = lr_at(epoch, cfg);
        m.drop_rate = drop_rate_at(epoch, cfg);
        m.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
        std::tie(m.train_loss, m.train_acc) = evaluate(net, train_set);
        std::tie(m.test_loss, m.test_acc) = evaluate(net, test_set);
        for (const auto& layer : net.hidden) {
            m.active_counts.push_back(detect_regions(layer.t).active_indices.size());
        }
        if (on_epoch) on_epoch(m);
        metrics.push_back(std::move(m));
    }
    return {std::move(net), std::move(metrics)};
}

void write_metrics_csv(const std::string& path, const std::vector<EpochMetrics>& metrics) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << kMetricsCsvHeader << "\n";
    for (const auto& m : metrics) {
        out << m.epoch << ',' << fmt_double(m.train_loss) << ',' << fmt_double(m.test_loss) << ','
            << fmt_double(m.train_acc) << ',' << fmt_double(m.test_acc) << ','
            << fmt_double(m.lr) << ',' << fmt_double(m.drop_rate) << ','
            << fmt_double(m.wall_seconds) << ',';
        for (std::size_t i = 0; i < m.active_counts.size(); ++i) {
            if (i) out << ';';
            out << m.active_counts[i];
        }
        out << "\n";
    }
    if (!out) throw DataError("write failed on " + path);
}

}  // namespace gd
