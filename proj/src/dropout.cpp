#include "gdnn/dropout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gdnn/errors.hpp"
#include "gdnn/histogram.hpp"

namespace gd {

void DropoutPolicy::validate() const {
    if (!needs_rate()) {
        if (rate != 0.0) throw ConfigError(policy_name(kind) + " takes no rate");
        return;
    }
    if (rate < 0.0 || rate >= 1.0) {
        throw ConfigError(policy_name(kind) + " rate must be in [0,1), got " +
                          std::to_string(rate));
    }
}

DropoutPolicy parse_policy(const std::string& name, double rate) {
    DropoutPolicy p;
    if (name == "none") p.kind = PolicyKind::None;
    else if (name == "standard") p.kind = PolicyKind::Standard;
    else if (name == "strength_only") p.kind = PolicyKind::StrengthOnly;
    else if (name == "guided_topk") p.kind = PolicyKind::GuidedTopK;
    else if (name == "guided_dr") p.kind = PolicyKind::GuidedDR;
    else throw ConfigError("unknown policy '" + name + "'");
    p.rate = p.needs_rate() ? rate : 0.0;
    p.validate();
    return p;
}

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::None: return "none";
        case PolicyKind::Standard: return "standard";
        case PolicyKind::StrengthOnly: return "strength_only";
        case PolicyKind::GuidedTopK: return "guided_topk";
        case PolicyKind::GuidedDR: return "guided_dr";
    }
    return "?";
}

MaskWithScale standard_mask(std::size_t n, double drop_rate, RngStream& rng) {
    if (drop_rate < 0.0 || drop_rate >= 1.0) {
        throw ParamError("standard_mask: drop_rate must be in [0,1)");
    }
    if (drop_rate == 0.0) return MaskWithScale::all_ones(n);
    const double keep = 1.0 - drop_rate;
    MaskWithScale m;
    m.r = sample_bernoulli(rng, n, keep);
    m.scale = 1.0 / keep;
    return m;
}

MaskWithScale topk_mask(const Vector& t, double drop_ratio) {
    if (t.empty()) throw ParamError("topk_mask: empty strength vector");
    if (drop_ratio < 0.0 || drop_ratio >= 1.0) {
        throw ParamError("topk_mask: drop_ratio must be in [0,1)");
    }
    const std::size_t n = t.size();
    // Nudge before flooring: n * ratio can land a few ulps under an exact
    // integer (50 * 0.58 = 28.999...96) and floor(N*ratio) means the exact one.
    const auto k = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * drop_ratio + 1e-9));
    if (k == n) throw ParamError("topk_mask: would drop every node");
    if (k == 0) return MaskWithScale::all_ones(n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Descending |t|; equal strengths keep index order, so the lower index
    // falls inside the dropped prefix first.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(t[a]) > std::fabs(t[b]);
    });

    MaskWithScale m = MaskWithScale::all_ones(n);
    for (std::size_t i = 0; i < k; ++i) m.r[order[i]] = 0;
    m.scale = static_cast<double>(n) / static_cast<double>(n - k);
    return m;
}

RegionSplit detect_regions(const Vector& t) {
    if (t.size() < 2) throw ParamError("detect_regions: need at least 2 nodes");

    std::vector<double> mag(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) mag[i] = std::fabs(t[i]);

    constexpr std::size_t kBins = 100;
    const Histogram h = make_histogram(mag, kBins);

    RegionSplit split;
    split.bin_edges = h.edges;
    split.degenerate = h.degenerate;

    if (h.degenerate) {
        split.f_m = t.size();
        split.inactive_indices.resize(t.size());
        std::iota(split.inactive_indices.begin(), split.inactive_indices.end(), 0);
        return split;
    }

    std::size_t modal = 0;
    for (std::size_t b = 1; b < kBins; ++b) {
        if (h.counts[b] > h.counts[modal]) modal = b;  // ties keep the lower bin
    }
    split.f_m = h.counts[modal];
    const double cutoff = h.edges[modal + 1];

    for (std::size_t i = 0; i < mag.size(); ++i) {
        if (mag[i] > cutoff) split.active_indices.push_back(i);
        else split.inactive_indices.push_back(i);
    }
    return split;
}

MaskWithScale dr_mask(const RegionSplit& regions, std::size_t n, double drop_rate,
                      RngStream& rng) {
    if (drop_rate < 0.0 || drop_rate >= 1.0) {
        throw ParamError("dr_mask: drop_rate must be in [0,1)");
    }
    if (drop_rate == 0.0 || regions.active_indices.empty()) {
        return MaskWithScale::all_ones(n);
    }
    MaskWithScale m = MaskWithScale::all_ones(n);
    for (std::size_t idx : regions.active_indices) {
        if (rng.next_double01() < drop_rate) m.r[idx] = 0;
    }
    const double active_frac =
        static_cast<double>(regions.active_indices.size()) / static_cast<double>(n);
    m.scale = 1.0 / (1.0 - active_frac * drop_rate);
    return m;
}

MaskWithScale dr_mask(const Vector& t, double drop_rate, RngStream& rng) {
    return dr_mask(detect_regions(t), t.size(), drop_rate, rng);
}

std::vector<MaskWithScale> masks_for_network(const Network& net, const DropoutPolicy& policy,
                                             double phase_rate, RngStream& rng) {
    std::vector<MaskWithScale> masks;
    masks.reserve(net.hidden.size());
    for (const DenseLayer& layer : net.hidden) {
        const std::size_t n = layer.out_dim();
        if (phase_rate <= 0.0) {
            masks.push_back(MaskWithScale::all_ones(n));
            continue;
        }
        switch (policy.kind) {
            case PolicyKind::None:
            case PolicyKind::StrengthOnly:
                masks.push_back(MaskWithScale::all_ones(n));
                break;
            case PolicyKind::Standard:
                masks.push_back(standard_mask(n, phase_rate, rng));
                break;
            case PolicyKind::GuidedTopK:
                masks.push_back(topk_mask(layer.t, phase_rate));
                break;
            case PolicyKind::GuidedDR:
                masks.push_back(dr_mask(layer.t, phase_rate, rng));
                break;
        }
    }
    return masks;
}

}  // namespace gd
