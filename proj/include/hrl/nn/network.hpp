#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace hrl::nn {

inline constexpr std::array<int, 4> kLayerDims{26, 100, 100, 5};
inline constexpr int kInputDim = kLayerDims.front();
inline constexpr int kOutputDim = kLayerDims.back();

// 26·100+100 + 100·100+100 + 100·5+5
inline constexpr std::size_t kParamCount = 13305;

inline double elu(double z) { return z >= 0.0 ? z : std::expm1(z); }
inline double elu_grad(double z) { return z >= 0.0 ? 1.0 : std::exp(z); }

// Dense 26-100-100-5 action-value network, ELU hidden activations, identity
// output. Parameters live in one flat vector laid out as
// [W1 | b1 | W2 | b2 | W3 | b3], each W row-major [out x in].
class QNetwork {
  public:
    QNetwork();  // all parameters zero
    static QNetwork glorot_uniform(std::uint64_t seed);

    std::array<double, kOutputDim> forward(
        std::span<const double, kInputDim> x) const;

    // Intermediates needed for one backward pass.
    struct Trace {
        std::array<double, kInputDim> x;
        std::array<double, 100> z1, h1, z2, h2;
        std::array<double, kOutputDim> q;
    };
    Trace forward_trace(std::span<const double, kInputDim> x) const;

    // Accumulates dL/dtheta into grad (same layout as params; caller zeroes).
    void backward(const Trace& trace,
                  std::span<const double, kOutputDim> dLdq,
                  std::span<double> grad) const;

    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }
    static constexpr std::size_t param_count() { return kParamCount; }

    bool finite() const;

  private:
    std::vector<double> params_;
};

// Offsets of the flat layout, shared with the checkpoint reader.
struct ParamLayout {
    std::size_t w1 = 0;
    std::size_t b1 = w1 + 100 * 26;
    std::size_t w2 = b1 + 100;
    std::size_t b2 = w2 + 100 * 100;
    std::size_t w3 = b2 + 100;
    std::size_t b3 = w3 + 5 * 100;
    std::size_t end = b3 + 5;
};
inline constexpr ParamLayout kLayout{};
static_assert(ParamLayout{}.end == kParamCount);

}  // namespace hrl::nn
