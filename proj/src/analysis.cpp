#include "gdnn/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "gdnn/dropout.hpp"
#include "gdnn/errors.hpp"
#include "gdnn/histogram.hpp"

namespace gd {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double masked_accuracy(const Network& net, const Dataset& data, std::size_t layer,
                       const BinaryVector& keep) {
    auto masks = inference_masks(net);
    masks[layer].r = keep;
    masks[layer].scale = 1.0;  // ablation removes nodes, it does not rescale

    constexpr std::size_t kChunk = 512;
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

}  // namespace

AblationOrder parse_order(const std::string& name) {
    if (name == "asc" || name == "ascending") return AblationOrder::Ascending;
    if (name == "desc" || name == "descending") return AblationOrder::Descending;
    throw ConfigError("unknown ablation order '" + name + "' (want asc|desc)");
}

AblationCurve ablation_sweep(const Network& net, const Dataset& data, std::size_t layer,
                             AblationOrder order, std::size_t step) {
    if (layer >= net.hidden.size()) {
        throw ParamError("ablation layer " + std::to_string(layer) + " out of range (have " +
                         std::to_string(net.hidden.size()) + " hidden layers)");
    }
    if (step == 0) throw ParamError("ablation step must be >= 1");
    if (data.size() == 0) throw DataError("ablation needs a nonempty dataset");

    const Vector& t = net.hidden[layer].t;
    const std::size_t n = t.size();
    std::vector<std::size_t> victim(n);
    std::iota(victim.begin(), victim.end(), 0);
    std::stable_sort(victim.begin(), victim.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(t[a]) < std::fabs(t[b]);
    });
    if (order == AblationOrder::Descending) std::reverse(victim.begin(), victim.end());

    AblationCurve curve;
    BinaryVector keep(n, 1);
    std::size_t removed = 0;
    curve.points.emplace_back(0, masked_accuracy(net, data, layer, keep));
    while (removed < n - 1) {
        const std::size_t target = std::min(n - 1, removed + step);
        while (removed < target) keep[victim[removed++]] = 0;
        curve.points.emplace_back(removed, masked_accuracy(net, data, layer, keep));
    }
    return curve;
}

std::pair<std::vector<double>, std::vector<std::size_t>> strength_histogram(
    const Network& net, std::size_t layer, std::size_t bins) {
    if (layer >= net.hidden.size()) {
        throw ParamError("histogram layer " + std::to_string(layer) + " out of range");
    }
    const Vector& t = net.hidden[layer].t;
    std::vector<double> mag(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) mag[i] = std::fabs(t[i]);
    Histogram h = make_histogram(mag, bins);
    return {std::move(h.edges), std::move(h.counts)};
}

std::vector<std::pair<std::string, double>> time_per_epoch(
    const std::vector<TrainConfig>& cfgs, const Dataset& data, std::size_t epochs) {
    if (cfgs.empty()) throw ParamError("time_per_epoch: no configs");
    if (epochs == 0) throw ParamError("time_per_epoch: epochs must be >= 1");
    for (const auto& cfg : cfgs) {
        if (cfg.layer_sizes != cfgs.front().layer_sizes) {
            throw ConfigError("time_per_epoch: configs must share one architecture");
        }
    }

    std::vector<std::pair<std::string, double>> rows;
    for (const auto& cfg : cfgs) {
        Network net = init_network(cfg.layer_sizes, cfg.seed);
        RngStream shuffle_rng(cfg.seed, 10001);
        RngStream mask_rng(cfg.seed, 10002);

        // Pick an epoch index where the policy's masks are live, so the
        // timing covers mask generation and not just warmup passes.
        TrainConfig timed = cfg;
        timed.strength_warmup_epochs = 0;
        if (timed.policy.is_guided() && timed.phase_schedule.empty()) {
            timed.phase_schedule = {{timed.policy.rate, timed.epochs}};
        }
        timed.validate();

        train_one_epoch(net, timed, data, 0, shuffle_rng, mask_rng);  // warm cache, untimed
        std::vector<double> samples;
        for (std::size_t e = 0; e < epochs; ++e) {
            const auto t0 = std::chrono::steady_clock::now();
            train_one_epoch(net, timed, data, std::min(e + 1, timed.epochs - 1), shuffle_rng,
                            mask_rng);
            const auto t1 = std::chrono::steady_clock::now();
            samples.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
        std::sort(samples.begin(), samples.end());
        rows.emplace_back(policy_name(cfg.policy.kind), samples[samples.size() / 2]);
    }
    return rows;
}

void write_ablation_csv(const std::string& path, const AblationCurve& curve) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "removed,accuracy\n";
    for (const auto& [removed, acc] : curve.points) {
        out << removed << ',' << fmt_double(acc) << "\n";
    }
    if (!out) throw DataError("write failed on " + path);
}

void write_histogram_csv(const std::string& path, const std::vector<double>& edges,
                         const std::vector<std::size_t>& counts) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out << fmt_double(edges[i]) << ',' << fmt_double(edges[i + 1]) << ',' << counts[i] << "\n";
    }
    if (!out) throw DataError("write failed on " + path);
}

void write_timing_csv(const std::string& path,
                      const std::vector<std::pair<std::string, double>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "policy,seconds\n";
    for (const auto& [name, secs] : rows) out << name << ',' << fmt_double(secs) << "\n";
    if (!out) throw DataError("write failed on " + path);
}

}  // namespace gd
