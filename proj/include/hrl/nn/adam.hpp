#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hrl::nn {

struct AdamConfig {
    double alpha = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class AdamState {
  public:
    AdamState(std::size_t n, AdamConfig cfg = {});

    // One update. Returns false and leaves everything untouched when the
    // gradient contains a non-finite value.
    bool step(std::span<double> params, std::span<const double> grad);

    std::int64_t steps() const { return t_; }
    void set_steps(std::int64_t t) { t_ = t; }
    const AdamConfig& config() const { return cfg_; }

  private:
    AdamConfig cfg_;
    std::vector<double> m_, v_;
    std::int64_t t_ = 0;
};

}  // namespace hrl::nn
