#include "hrl/kern/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hrl::kern {

namespace {

void affine_scalar(const double* W, const double* b, const double* x,
                   double* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* wr = W + r * cols;
        double acc = b ? b[r] : 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
        y[r] = acc;
    }
}

void matvec_t_scalar(const double* W, const double* d, double* out,
                     std::size_t rows, std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* wr = W + r * cols;
        const double dr = d[r];
        for (std::size_t c = 0; c < cols; ++c) out[c] += dr * wr[c];
    }
}

void outer_acc_scalar(double* G, const double* d, const double* x,
                      std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double* gr = G + r * cols;
        const double dr = d[r];
        for (std::size_t c = 0; c < cols; ++c) gr[c] += dr * x[c];
    }
}

void adam_scalar(double* p, const double* g, double* m, double* v,
                 std::size_t n, const AdamParams& ap) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = ap.beta1 * m[i] + (1.0 - ap.beta1) * g[i];
        v[i] = ap.beta2 * v[i] + (1.0 - ap.beta2) * g[i] * g[i];
        const double mhat = m[i] / ap.bias1;
        const double vhat = v[i] / ap.bias2;
        p[i] -= ap.alpha * mhat / (std::sqrt(vhat) + ap.eps);
    }
}

const Kernels kScalar{affine_scalar, matvec_t_scalar, outer_acc_scalar,
                      adam_scalar, "scalar"};

const Kernels* g_active = nullptr;

const Kernels* pick_default() {
    if (const char* env = std::getenv("HRL_KERNELS")) {
        const std::string_view want(env);
        if (want == "scalar") return &kScalar;
        if (want == "avx2" && avx2_supported()) return &avx2_kernels();
    }
    if (avx2_supported()) return &avx2_kernels();
    return &kScalar;
}

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

const Kernels& active() {
    if (!g_active) g_active = pick_default();
    return *g_active;
}

void select_backend(std::string_view name) {
    if (name == "scalar") {
        g_active = &kScalar;
    } else if (name == "avx2") {
        if (!avx2_supported())
            throw std::runtime_error("avx2 kernels not supported on this cpu");
        g_active = &avx2_kernels();
    } else {
        throw std::invalid_argument("unknown kernel backend: " + std::string(name));
    }
}

#if !defined(HRL_HAVE_X86_KERNELS)
bool avx2_supported() { return false; }
const Kernels& avx2_kernels() {
    throw std::runtime_error("avx2 kernels not built on this platform");
}
#endif

}  // namespace hrl::kern
