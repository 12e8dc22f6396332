#include "hrl/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace hrl::nn {

double grad_check(const QNetwork& net, std::span<const double, kInputDim> x,
                  std::span<const double, kOutputDim> dLdq,
                  std::size_t n_coords, double h, std::uint64_t seed) {
    std::vector<double> analytic(QNetwork::param_count(), 0.0);
    const auto trace = net.forward_trace(x);
    net.backward(trace, dLdq, analytic);

    std::vector<std::size_t> coords(QNetwork::param_count());
    std::iota(coords.begin(), coords.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(std::min(n_coords, coords.size()));

    QNetwork probe = net;
    auto loss = [&](void) {
        const auto q = probe.forward(x);
        double L = 0.0;
        for (int j = 0; j < kOutputDim; ++j) L += dLdq[j] * q[j];
        return L;
    };

    double worst = 0.0;
    for (std::size_t idx : coords) {
        const double saved = probe.params()[idx];
        probe.params()[idx] = saved + h;
        const double up = loss();
        probe.params()[idx] = saved - h;
        const double down = loss();
        probe.params()[idx] = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max(std::abs(analytic[idx]), std::abs(numeric));
        if (denom == 0.0) continue;
        worst = std::max(worst, std::abs(analytic[idx] - numeric) / denom);
    }
    return worst;
}

}  // namespace hrl::nn
