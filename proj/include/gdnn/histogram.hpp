#pragma once

#include <cstddef>
#include <vector>

namespace gd {

// Equal-width histogram over [min(values), max(values)]. edges has bins+1
// entries; the top edge is inclusive so max lands in the last bin. A
// degenerate range (all values equal) puts everything in bin 0.
struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    bool degenerate = false;
};

Histogram make_histogram(const std::vector<double>& values, std::size_t bins);

// Bin index for one value given the histogram's range, same clamping rule.
std::size_t bin_index(double v, double lo, double hi, std::size_t bins);

}  // namespace gd
