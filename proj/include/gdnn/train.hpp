#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gdnn/dataset.hpp"
#include "gdnn/dropout.hpp"
#include "gdnn/network.hpp"
#include "gdnn/rng.hpp"

namespace gd {

struct PhaseSpec {
    double rate = 0.0;
    std::size_t epochs = 0;
};

struct TrainConfig {
    std::vector<std::size_t> layer_sizes;
    DropoutPolicy policy;
    std::size_t epochs = 200;
    std::size_t batch_size = 64;
    double lr_initial = 1e-2;
    std::size_t lr_decay_every = 50;
    double lr_decay_factor = 10.0;
    std::size_t strength_warmup_epochs = 40;
    std::vector<PhaseSpec> phase_schedule;  // guided policies only; empty = constant policy rate
    std::uint64_t seed = 1;

    void validate() const;  // throws ConfigError
};

struct EpochMetrics {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double test_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    double lr = 0.0;
    double drop_rate = 0.0;
    double wall_seconds = 0.0;  // training portion of the epoch, excludes evaluation
    std::vector<std::size_t> active_counts;  // per hidden layer, from detect_regions
};

// Stock schedules: DR runs 0.2/0.15/0.1 for 60/50/50 epochs, top-k pulses
// 0.2/0.15/0.1 for 10 epochs each with recovery gaps. Empty for the rest.
std::vector<PhaseSpec> default_phase_schedule(PolicyKind kind);

TrainConfig make_default_config(const DropoutPolicy& policy,
                                std::vector<std::size_t> layer_sizes);

// Proportionally rescale warmup, phase lengths, and the lr step to a new
// epoch budget (floor, minimum 1 epoch per phase); the last phase absorbs
// rounding so warmup + phases still cover the budget exactly.
TrainConfig scale_to_epochs(const TrainConfig& cfg, std::size_t new_epochs);

double lr_at(std::size_t epoch, const TrainConfig& cfg);

// 0 during warmup for guided policies, then the scheduled phase rate (the
// last phase persists past the schedule end). Standard keeps its constant
// rate from epoch 0; None and StrengthOnly are always 0.
double drop_rate_at(std::size_t epoch, const TrainConfig& cfg);

void sgd_step(Network& net, const Gradients& grads, double lr);

// One pass over train_set: shuffle, then per batch sample masks, forward,
// backward, step. Returns the mean per-batch loss seen during the pass.
double train_one_epoch(Network& net, const TrainConfig& cfg, const Dataset& train_set,
                       std::size_t epoch, RngStream& shuffle_rng, RngStream& mask_rng);

std::pair<double, double> evaluate(const Network& net, const Dataset& data);  // (loss, acc)

using EpochCallback = std::function<void(const EpochMetrics&)>;

std::pair<Network, std::vector<EpochMetrics>> train(const TrainConfig& cfg,
                                                    const Dataset& train_set,
                                                    const Dataset& test_set,
                                                    const EpochCallback& on_epoch = {});

inline constexpr const char* kMetricsCsvHeader =
    "epoch,train_loss,test_loss,train_acc,test_acc,lr,drop_rate,wall_seconds,active_counts";

void write_metrics_csv(const std::string& path, const std::vector<EpochMetrics>& metrics);

}  // namespace gd
