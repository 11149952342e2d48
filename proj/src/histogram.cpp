#include "gdnn/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "gdnn/errors.hpp"

namespace gd {

std::size_t bin_index(double v, double lo, double hi, std::size_t bins) {
    if (hi <= lo) return 0;
    const double f = (v - lo) / (hi - lo);
    auto idx = static_cast<std::ptrdiff_t>(f * static_cast<double>(bins));
    if (idx < 0) idx = 0;
    if (idx >= static_cast<std::ptrdiff_t>(bins)) idx = static_cast<std::ptrdiff_t>(bins) - 1;
    return static_cast<std::size_t>(idx);
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
    if (bins == 0) throw ParamError("make_histogram: bins must be positive");
    if (values.empty()) throw ParamError("make_histogram: empty input");

    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn_it;
    const double hi = *mx_it;

    Histogram h;
    h.degenerate = !(hi > lo);
    h.edges.resize(bins + 1);
    const double width = h.degenerate ? 0.0 : (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) {
        h.edges[i] = lo + width * static_cast<double>(i);
    }
    h.edges[bins] = hi;  // avoid rounding drift at the top edge

    h.counts.assign(bins, 0);
    for (double v : values) ++h.counts[bin_index(v, lo, hi, bins)];
    return h;
}

}  // namespace gd
