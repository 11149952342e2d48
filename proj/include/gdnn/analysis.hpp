#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gdnn/dataset.hpp"
#include "gdnn/network.hpp"
#include "gdnn/train.hpp"

namespace gd {

enum class AblationOrder { Ascending, Descending };

// Accuracy as nodes of one layer are masked in strength order. Points run
// from 0 removals up to N-1 (never the full layer).
struct AblationCurve {
    std::vector<std::pair<std::size_t, double>> points;  // (num_removed, accuracy)
};

AblationOrder parse_order(const std::string& name);

// Masks nodes at inference (no rescale), recording accuracy every `step`
// removals plus the endpoints. The network itself is never touched.
AblationCurve ablation_sweep(const Network& net, const Dataset& data, std::size_t layer,
                             AblationOrder order, std::size_t step);

// 100-bin |t| histogram of one hidden layer.
std::pair<std::vector<double>, std::vector<std::size_t>> strength_histogram(
    const Network& net, std::size_t layer, std::size_t bins = 100);

// Per-epoch training wall time for each config, same seed and data, after
// one untimed warmup epoch. Returns (policy name, median seconds).
std::vector<std::pair<std::string, double>> time_per_epoch(
    const std::vector<TrainConfig>& cfgs, const Dataset& data, std::size_t epochs = 1);

void write_ablation_csv(const std::string& path, const AblationCurve& curve);
void write_histogram_csv(const std::string& path, const std::vector<double>& edges,
                         const std::vector<std::size_t>& counts);
void write_timing_csv(const std::string& path,
                      const std::vector<std::pair<std::string, double>>& rows);

}  // namespace gd
