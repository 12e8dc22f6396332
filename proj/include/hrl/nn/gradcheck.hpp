#pragma once

#include <cstdint>
#include <span>

#include "hrl/nn/network.hpp"

namespace hrl::nn {

// Compares backward() against central finite differences of the scalar loss
// L = sum_j c_j * q_j(theta) over a random subsample of at least
// min(n_coords, param_count) coordinates. Returns the maximum relative error,
// with 0/0 defined as 0.
double grad_check(const QNetwork& net, std::span<const double, kInputDim> x,
                  std::span<const double, kOutputDim> dLdq,
                  std::size_t n_coords = 200, double h = 1e-5,
                  std::uint64_t seed = 0);

}  // namespace hrl::nn
