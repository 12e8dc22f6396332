#pragma once

#include <cstddef>
#include <string_view>

namespace hrl::kern {

// Adam hyperparameters plus the bias corrections (1 - beta^t) for the
// current step, precomputed by the caller.
struct AdamParams {
    double alpha;
    double beta1;
    double beta2;
    double eps;
    double bias1;
    double bias2;
};

// y = W x + b, W row-major [rows x cols]. b may be null.
using AffineFn = void (*)(const double* W, const double* b, const double* x,
                          double* y, std::size_t rows, std::size_t cols);

// out = W^T d, W row-major [rows x cols], d length rows, out length cols.
using MatvecTFn = void (*)(const double* W, const double* d, double* out,
                           std::size_t rows, std::size_t cols);

// G += d x^T (rank-1 accumulate), G row-major [rows x cols].
using OuterAccFn = void (*)(double* G, const double* d, const double* x,
                            std::size_t rows, std::size_t cols);

// In-place Adam update of p[0..n) with gradient g and moment buffers m, v.
using AdamFn = void (*)(double* p, const double* g, double* m, double* v,
                        std::size_t n, const AdamParams& ap);

struct Kernels {
    AffineFn affine;
    MatvecTFn matvec_t;
    OuterAccFn outer_acc;
    AdamFn adam;
    const char* name;
};

const Kernels& scalar_kernels();

bool avx2_supported();
// Only valid to call through when avx2_supported() is true.
const Kernels& avx2_kernels();

// Runtime-selected backend. Defaults to the widest supported instruction
// set; the HRL_KERNELS environment variable ("scalar" or "avx2") or an
// explicit select_backend() call overrides it.
const Kernels& active();
void select_backend(std::string_view name);

}  // namespace hrl::kern
