#include "gdnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "gdnn/errors.hpp"
#include "gdnn/rng.hpp"

namespace gd {

namespace {

std::vector<std::uint8_t> read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    in.seekg(0, std::ios::end);
    const auto len = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> buf(len);
    if (len > 0) in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(len));
    if (!in) throw DataError("short read on " + path);
    return buf;
}

std::uint32_t be32(const std::vector<std::uint8_t>& buf, std::size_t off, const std::string& path) {
    if (off + 4 > buf.size()) {
        throw DataError(path + ": truncated at offset " + std::to_string(off) +
                        " (need 4 more bytes)");
    }
    return (std::uint32_t(buf[off]) << 24) | (std::uint32_t(buf[off + 1]) << 16) |
           (std::uint32_t(buf[off + 2]) << 8) | std::uint32_t(buf[off + 3]);
}

}  // namespace

void Dataset::validate() const {
    if (features.rows() != labels.size()) {
        throw DataError("dataset: " + std::to_string(features.rows()) + " rows vs " +
                        std::to_string(labels.size()) + " labels");
    }
    if (num_classes <= 0) throw DataError("dataset: num_classes must be positive");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= num_classes) {
            throw DataError("dataset: label " + std::to_string(labels[i]) + " at row " +
                            std::to_string(i) + " outside [0," +
                            std::to_string(num_classes) + ")");
        }
    }
    if (!features.all_finite()) throw DataError("dataset: non-finite feature value");
}

Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path) {
    const auto img = read_all(images_path);
    const auto lab = read_all(labels_path);

    const std::uint32_t img_magic = be32(img, 0, images_path);
    if (img_magic != 0x00000803) {
        throw DataError(images_path + ": bad magic at offset 0 (got " +
                        std::to_string(img_magic) + ", want 2051)");
    }
    const std::uint32_t lab_magic = be32(lab, 0, labels_path);
    if (lab_magic != 0x00000801) {
        throw DataError(labels_path + ": bad magic at offset 0 (got " +
                        std::to_string(lab_magic) + ", want 2049)");
    }

    const std::uint32_t n_img = be32(img, 4, images_path);
    const std::uint32_t rows = be32(img, 8, images_path);
    const std::uint32_t cols = be32(img, 12, images_path);
    const std::uint32_t n_lab = be32(lab, 4, labels_path);

    if (n_img != n_lab) {
        throw DataError("image count " + std::to_string(n_img) + " (offset 4 of " + images_path +
                        ") != label count " + std::to_string(n_lab));
    }
    const std::size_t pix = std::size_t(rows) * cols;
    const std::size_t want_img = 16 + std::size_t(n_img) * pix;
    if (img.size() != want_img) {
        throw DataError(images_path + ": size " + std::to_string(img.size()) + " != expected " +
                        std::to_string(want_img) + " (truncated near offset " +
                        std::to_string(img.size()) + ")");
    }
    const std::size_t want_lab = 8 + n_lab;
    if (lab.size() != want_lab) {
        throw DataError(labels_path + ": size " + std::to_string(lab.size()) + " != expected " +
                        std::to_string(want_lab));
    }

    Dataset d;
    d.num_classes = 10;
    d.features = Matrix(n_img, pix);
    d.labels.resize(n_img);
    for (std::size_t i = 0; i < n_img; ++i) {
        const std::uint8_t y = lab[8 + i];
        if (y > 9) {
            throw DataError(labels_path + ": label byte " + std::to_string(int(y)) +
                            " at offset " + std::to_string(8 + i));
        }
        d.labels[i] = y;
        double* row = d.features.row(i);
        const std::uint8_t* src = img.data() + 16 + i * pix;
        for (std::size_t j = 0; j < pix; ++j) row[j] = src[j] / 255.0;
    }
    return d;
}

Dataset load_cifar10_bin(const std::vector<std::string>& paths) {
    constexpr std::size_t kRecord = 3073;
    constexpr std::size_t kPix = 3072;

    std::size_t total = 0;
    std::vector<std::vector<std::uint8_t>> bufs;
    bufs.reserve(paths.size());
    for (const auto& p : paths) {
        auto buf = read_all(p);
        if (buf.size() % kRecord != 0) {
            throw DataError(p + ": size " + std::to_string(buf.size()) +
                            " not a multiple of 3073 (stray bytes from offset " +
                            std::to_string((buf.size() / kRecord) * kRecord) + ")");
        }
        if (buf.empty()) std::fprintf(stderr, "warning: %s is empty, zero records\n", p.c_str());
        total += buf.size() / kRecord;
        bufs.push_back(std::move(buf));
    }

    Dataset d;
    d.num_classes = 10;
    d.features = Matrix(total, kPix);
    d.labels.resize(total);
    std::size_t row = 0;
    for (std::size_t f = 0; f < bufs.size(); ++f) {
        const auto& buf = bufs[f];
        for (std::size_t off = 0; off < buf.size(); off += kRecord, ++row) {
            const std::uint8_t y = buf[off];
            if (y > 9) {
                throw DataError(paths[f] + ": label byte " + std::to_string(int(y)) +
                                " at offset " + std::to_string(off));
            }
            d.labels[row] = y;
            double* dst = d.features.row(row);
            const std::uint8_t* src = buf.data() + off + 1;
            for (std::size_t j = 0; j < kPix; ++j) dst[j] = src[j] / 255.0;
        }
    }
    return d;
}

Dataset subsample(const Dataset& d, std::size_t n, std::uint64_t seed) {
    if (n > d.size()) {
        throw ParamError("subsample: n=" + std::to_string(n) + " exceeds dataset size " +
                         std::to_string(d.size()));
    }
    const auto c = static_cast<std::size_t>(d.num_classes);

    std::vector<std::vector<std::size_t>> by_class(c);
    for (std::size_t i = 0; i < d.size(); ++i) {
        by_class[static_cast<std::size_t>(d.labels[i])].push_back(i);
    }

    RngStream rng(seed, 0xDA7A);
    for (auto& idxs : by_class) shuffle_inplace(idxs, rng);

    // Equal shares, remainder to the lowest class indices; classes short of
    // their quota hand the deficit to classes that still have spare rows.
    std::vector<std::size_t> take(c);
    for (std::size_t k = 0; k < c; ++k) {
        take[k] = std::min(by_class[k].size(), n / c + (k < n % c ? 1u : 0u));
    }
    std::size_t got = std::accumulate(take.begin(), take.end(), std::size_t{0});
    while (got < n) {
        bool moved = false;
        for (std::size_t k = 0; k < c && got < n; ++k) {
            if (take[k] < by_class[k].size()) {
                ++take[k];
                ++got;
                moved = true;
            }
        }
        if (!moved) throw ParamError("subsample: dataset exhausted");  // unreachable given n <= size
    }

    std::vector<std::size_t> chosen;
    chosen.reserve(n);
    for (std::size_t k = 0; k < c; ++k) {
        chosen.insert(chosen.end(), by_class[k].begin(), by_class[k].begin() + take[k]);
    }
    shuffle_inplace(chosen, rng);

    Dataset out;
    out.num_classes = d.num_classes;
    out.features = Matrix(n, d.dim());
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = chosen[i];
        std::copy(d.features.row(src), d.features.row(src) + d.dim(), out.features.row(i));
        out.labels[i] = d.labels[src];
    }
    return out;
}

SyntheticRegression synthetic_regression(std::size_t d1, std::size_t d2, std::size_t n,
                                         std::uint64_t seed) {
    if (d1 == 0 || d2 == 0) throw ParamError("synthetic_regression: dims must be positive");
    RngStream wrng(seed, 1);
    RngStream xrng(seed, 2);
    SyntheticRegression s;
    s.W_true = sample_normal(wrng, d1, d2, 0.0, 1.0);
    s.xs = sample_normal(xrng, n, d2, 0.0, 1.0);
    s.ys = matmul_nt(s.xs, s.W_true);
    return s;
}

}  // namespace gd
