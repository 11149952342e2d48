#include "gdnn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <vector>

#include "gdnn/errors.hpp"

namespace gd {

namespace {

constexpr char kMagic[4] = {'G', 'D', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

struct Writer {
    std::vector<std::uint8_t> buf;

    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void doubles(const double* p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) f64(p[i]);
    }
};

struct Reader {
    const std::vector<std::uint8_t>& buf;
    std::size_t pos = 0;
    const std::string& path;

    void need(std::size_t n) {
        if (pos + n > buf.size()) {
            throw CheckpointError(path + ": truncated at offset " + std::to_string(pos));
        }
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(buf[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    void doubles(double* p, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) p[i] = f64();
    }
};

}  // namespace

void save_checkpoint(const Network& net, const std::string& path) {
    Writer w;
    w.buf.insert(w.buf.end(), kMagic, kMagic + 4);
    w.u32(kVersion);
    w.u64(net.seed);
    w.u32(static_cast<std::uint32_t>(net.sizes.size()));
    for (std::size_t s : net.sizes) w.u64(s);
    for (const auto& layer : net.hidden) {
        w.doubles(layer.W.data().data(), layer.W.data().size());
        w.doubles(layer.b.data(), layer.b.size());
        w.doubles(layer.t.data(), layer.t.size());
    }
    w.doubles(net.out.W.data().data(), net.out.W.data().size());
    w.doubles(net.out.b.data(), net.out.b.size());

    // Write to a sibling temp file first so a crash never leaves a torn
    // checkpoint at the final path.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CheckpointError("cannot open " + tmp + " for writing");
        out.write(reinterpret_cast<const char*>(w.buf.data()),
                  static_cast<std::streamsize>(w.buf.size()));
        if (!out) throw CheckpointError("write failed on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw CheckpointError("cannot move " + tmp + " to " + path);
    }
}

Network load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

    Reader r{buf, 0, path};
    r.need(4);
    if (!std::equal(kMagic, kMagic + 4, buf.begin())) {
        throw CheckpointError(path + ": bad magic");
    }
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw CheckpointError(path + ": unsupported version " + std::to_string(version));
    }

    Network net;
    net.seed = r.u64();
    const std::uint32_t n_sizes = r.u32();
    if (n_sizes < 3 || n_sizes > 64) {
        throw CheckpointError(path + ": implausible layer count " + std::to_string(n_sizes));
    }
    net.sizes.resize(n_sizes);
    for (auto& s : net.sizes) {
        s = r.u64();
        if (s == 0 || s > (1u << 24)) {
            throw CheckpointError(path + ": implausible layer width " + std::to_string(s));
        }
    }

    for (std::size_t l = 0; l + 2 < net.sizes.size(); ++l) {
        DenseLayer layer;
        layer.W = Matrix(net.sizes[l + 1], net.sizes[l]);
        layer.b.resize(net.sizes[l + 1]);
        layer.t.resize(net.sizes[l + 1]);
        r.doubles(layer.W.data().data(), layer.W.data().size());
        r.doubles(layer.b.data(), layer.b.size());
        r.doubles(layer.t.data(), layer.t.size());
        net.hidden.push_back(std::move(layer));
    }
    net.out.W = Matrix(net.sizes.back(), net.sizes[net.sizes.size() - 2]);
    net.out.b.resize(net.sizes.back());
    r.doubles(net.out.W.data().data(), net.out.W.data().size());
    r.doubles(net.out.b.data(), net.out.b.size());

    if (r.pos != buf.size()) {
        throw CheckpointError(path + ": " + std::to_string(buf.size() - r.pos) +
                              " trailing bytes at offset " + std::to_string(r.pos));
    }
    return net;
}

}  // namespace gd
