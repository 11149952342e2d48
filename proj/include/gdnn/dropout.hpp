#pragma once

#include <string>
#include <vector>

#include "gdnn/mask.hpp"
#include "gdnn/matrix.hpp"
#include "gdnn/network.hpp"
#include "gdnn/rng.hpp"

namespace gd {

enum class PolicyKind { None, Standard, StrengthOnly, GuidedTopK, GuidedDR };

struct DropoutPolicy {
    PolicyKind kind = PolicyKind::None;
    double rate = 0.0;  // drop_rate (Standard, GuidedDR) or drop_ratio (GuidedTopK)

    bool needs_rate() const {
        return kind == PolicyKind::Standard || kind == PolicyKind::GuidedTopK ||
               kind == PolicyKind::GuidedDR;
    }
    bool is_guided() const {
        return kind == PolicyKind::GuidedTopK || kind == PolicyKind::GuidedDR;
    }
    void validate() const;
};

DropoutPolicy parse_policy(const std::string& name, double rate);
std::string policy_name(PolicyKind kind);

// Active/inactive partition of a strength vector from its 100-bin |t|
// histogram. f_m is the modal bin count; a node is active when its |t| lies
// strictly above the modal bin's upper edge. degenerate is set when all
// strengths are equal (everything inactive, empty active set).
struct RegionSplit {
    std::size_t f_m = 0;
    std::vector<std::size_t> inactive_indices;
    std::vector<std::size_t> active_indices;
    std::vector<double> bin_edges;  // 101 entries
    bool degenerate = false;
};

// Bernoulli keep with probability 1 - drop_rate, scale 1/(1 - drop_rate).
MaskWithScale standard_mask(std::size_t n, double drop_rate, RngStream& rng);

// Drops exactly k = floor(N * drop_ratio) nodes with the largest |t|; ties
// at the cutoff drop the lower index first. scale = N / (N - k).
MaskWithScale topk_mask(const Vector& t, double drop_ratio);

RegionSplit detect_regions(const Vector& t);

// Drop randomly from the active region: active nodes dropped independently
// with probability drop_rate, inactive always kept.
// scale = 1 / (1 - (|active|/N) * drop_rate).
MaskWithScale dr_mask(const Vector& t, double drop_rate, RngStream& rng);

// Same sampling with a caller-supplied split; lets tests pin the region.
MaskWithScale dr_mask(const RegionSplit& regions, std::size_t n, double drop_rate,
                      RngStream& rng);

// One mask per hidden layer. None and StrengthOnly get all-ones masks, as
// does any policy when phase_rate is 0 (warmup).
std::vector<MaskWithScale> masks_for_network(const Network& net, const DropoutPolicy& policy,
                                             double phase_rate, RngStream& rng);

}  // namespace gd
