#include "hrl/nn/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "hrl/kern/kernels.hpp"

namespace hrl::nn {

QNetwork::QNetwork() : params_(kParamCount, 0.0) {}

QNetwork QNetwork::glorot_uniform(std::uint64_t seed) {
    QNetwork net;
    std::mt19937_64 rng(seed);
    struct Block {
        std::size_t offset, count;
        int fan_in, fan_out;
    };
    const Block blocks[] = {
        {kLayout.w1, 100 * 26, 26, 100},
        {kLayout.w2, 100 * 100, 100, 100},
        {kLayout.w3, 5 * 100, 100, 5},
    };
    for (const auto& b : blocks) {
        const double limit = std::sqrt(6.0 / (b.fan_in + b.fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (std::size_t i = 0; i < b.count; ++i)
            net.params_[b.offset + i] = dist(rng);
    }
    return net;
}

QNetwork::Trace QNetwork::forward_trace(
    std::span<const double, kInputDim> x) const {
    for (double v : x) {
        if (!std::isfinite(v))
            throw std::invalid_argument("QNetwork::forward: non-finite input");
    }
    const auto& k = kern::active();
    const double* p = params_.data();

    Trace t;
    std::copy(x.begin(), x.end(), t.x.begin());
    k.affine(p + kLayout.w1, p + kLayout.b1, t.x.data(), t.z1.data(), 100, 26);
    for (int i = 0; i < 100; ++i) t.h1[i] = elu(t.z1[i]);
    k.affine(p + kLayout.w2, p + kLayout.b2, t.h1.data(), t.z2.data(), 100, 100);
    for (int i = 0; i < 100; ++i) t.h2[i] = elu(t.z2[i]);
    k.affine(p + kLayout.w3, p + kLayout.b3, t.h2.data(), t.q.data(), 5, 100);
    return t;
}

std::array<double, kOutputDim> QNetwork::forward(
    std::span<const double, kInputDim> x) const {
    return forward_trace(x).q;
}

void QNetwork::backward(const Trace& t,
                        std::span<const double, kOutputDim> dLdq,
                        std::span<double> grad) const {
    if (grad.size() != kParamCount)
        throw std::invalid_argument("QNetwork::backward: bad gradient size");
    const auto& k = kern::active();
    const double* p = params_.data();
    double* g = grad.data();

    // Output layer.
    k.outer_acc(g + kLayout.w3, dLdq.data(), t.h2.data(), 5, 100);
    for (int i = 0; i < 5; ++i) g[kLayout.b3 + i] += dLdq[i];

    std::array<double, 100> d2;
    k.matvec_t(p + kLayout.w3, dLdq.data(), d2.data(), 5, 100);
    for (int i = 0; i < 100; ++i) d2[i] *= elu_grad(t.z2[i]);

    k.outer_acc(g + kLayout.w2, d2.data(), t.h1.data(), 100, 100);
    for (int i = 0; i < 100; ++i) g[kLayout.b2 + i] += d2[i];

    std::array<double, 100> d1;
    k.matvec_t(p + kLayout.w2, d2.data(), d1.data(), 100, 100);
    for (int i = 0; i < 100; ++i) d1[i] *= elu_grad(t.z1[i]);

    k.outer_acc(g + kLayout.w1, d1.data(), t.x.data(), 100, 26);
    for (int i = 0; i < 100; ++i) g[kLayout.b1 + i] += d1[i];
}

bool QNetwork::finite() const {
    for (double v : params_)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace hrl::nn
