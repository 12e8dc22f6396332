#include "hrl/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

#include "hrl/kern/kernels.hpp"

namespace hrl::nn {

AdamState::AdamState(std::size_t n, AdamConfig cfg)
    : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

bool AdamState::step(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m_.size() || grad.size() != m_.size())
        throw std::invalid_argument("AdamState::step: shape mismatch");
    for (double g : grad)
        if (!std::isfinite(g)) return false;

    ++t_;
    kern::AdamParams ap;
    ap.alpha = cfg_.alpha;
    ap.beta1 = cfg_.beta1;
    ap.beta2 = cfg_.beta2;
    ap.eps = cfg_.eps;
    ap.bias1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    ap.bias2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    kern::active().adam(params.data(), grad.data(), m_.data(), v_.data(),
                        m_.size(), ap);
    return true;
}

}  // namespace hrl::nn
