#include "hrl/nn/checkpoint.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hrl::nn {

namespace {

constexpr const char* kMagic = "highwayrl-checkpoint";
constexpr int kVersion = 1;

struct BlockDef {
    const char* name;
    std::size_t offset, count;
};

constexpr std::array<BlockDef, 6> kBlocks{{
    {"W1", kLayout.w1, 100 * 26},
    {"b1", kLayout.b1, 100},
    {"W2", kLayout.w2, 100 * 100},
    {"b2", kLayout.b2, 100},
    {"W3", kLayout.w3, 5 * 100},
    {"b3", kLayout.b3, 5},
}};

[[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("checkpoint: " + what);
}

}  // namespace

void save_checkpoint(const Checkpoint& ck, std::ostream& out) {
    out << kMagic << " v" << kVersion << '\n';
    out << "layers";
    for (int d : kLayerDims) out << ' ' << d;
    out << '\n';
    out << "activation elu\n";
    out << "adam_steps " << ck.adam_steps << '\n';
    out << std::hexfloat;
    const auto p = ck.net.params();
    for (const auto& b : kBlocks) {
        out << "block " << b.name << ' ' << b.count << '\n';
        for (std::size_t i = 0; i < b.count; ++i) {
            out << p[b.offset + i];
            out << (((i + 1) % 8 == 0 || i + 1 == b.count) ? '\n' : ' ');
        }
    }
}

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("cannot open for writing: " + path);
    save_checkpoint(ck, out);
    if (!out) fail("write failed: " + path);
}

Checkpoint load_checkpoint(std::istream& in) {
    std::string magic, version;
    if (!(in >> magic >> version) || magic != kMagic || version != "v1")
        fail("bad header");
    std::string key;
    if (!(in >> key) || key != "layers") fail("missing layer dims");
    for (int expect : kLayerDims) {
        int d = 0;
        if (!(in >> d) || d != expect) fail("layer dims mismatch");
    }
    std::string act;
    if (!(in >> key >> act) || key != "activation" || act != "elu")
        fail("unsupported activation");
    Checkpoint ck;
    if (!(in >> key >> ck.adam_steps) || key != "adam_steps")
        fail("missing step counter");

    auto p = ck.net.params();
    for (const auto& b : kBlocks) {
        std::string name;
        std::size_t count = 0;
        if (!(in >> key >> name >> count) || key != "block" || name != b.name ||
            count != b.count)
            fail(std::string("bad block header for ") + b.name);
        for (std::size_t i = 0; i < b.count; ++i) {
            std::string tok;
            if (!(in >> tok)) fail(std::string("truncated block ") + b.name);
            p[b.offset + i] = std::strtod(tok.c_str(), nullptr);
        }
    }
    return ck;
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open: " + path);
    return load_checkpoint(in);
}

}  // namespace hrl::nn
