#pragma once

#include <cstddef>

#include "gdnn/matrix.hpp"

namespace gd {

// Dropout mask plus the inverted-dropout scale factor applied to kept
// activations at train time. scale = 1 whenever r is all ones.
struct MaskWithScale {
    BinaryVector r;
    double scale = 1.0;

    static MaskWithScale all_ones(std::size_t n) {
        MaskWithScale m;
        m.r.assign(n, 1);
        m.scale = 1.0;
        return m;
    }

    bool is_all_ones() const {
        for (auto v : r) {
            if (!v) return false;
        }
        return true;
    }

    std::size_t dropped_count() const {
        std::size_t k = 0;
        for (auto v : r) k += (v == 0);
        return k;
    }
};

}  // namespace gd
