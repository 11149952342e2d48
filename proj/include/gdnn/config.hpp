#pragma once

#include <string>
#include <vector>

#include "gdnn/train.hpp"

namespace gd {

// Flat key-value config: one "key = value" per line, '#' comments, unknown
// or duplicate keys rejected with their line number.
//
// Recognized keys: layer_sizes, policy, drop_rate, epochs, batch_size,
// lr_initial, lr_decay_every, lr_decay_factor, strength_warmup_epochs,
// phase_schedule, seed. layer_sizes and policy are required.
//
// Resolution starts from the stock 200-epoch defaults for the chosen policy.
// Setting epochs rescales warmup, phase lengths, and the lr step
// proportionally; explicit keys then override the scaled values.

struct KvEntry {
    int line = 0;
    std::string key;
    std::string value;
};

std::vector<KvEntry> parse_kv_file(const std::string& path);
std::vector<KvEntry> parse_kv_text(const std::string& text, const std::string& origin);

TrainConfig config_from_entries(const std::vector<KvEntry>& entries);
TrainConfig load_train_config(const std::string& path);

// Same architecture and budget, different policy; schedule rebuilt from that
// policy's defaults at the config's epoch count.
TrainConfig with_policy(const TrainConfig& cfg, const DropoutPolicy& policy);

std::vector<std::size_t> parse_layer_sizes(const std::string& text);
std::vector<PhaseSpec> parse_phase_schedule(const std::string& text);

// Canonical flat rendering of a resolved config (for manifests).
std::vector<std::pair<std::string, std::string>> config_to_kv(const TrainConfig& cfg);

}  // namespace gd
