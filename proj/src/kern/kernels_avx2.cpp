// AVX2+FMA variants of the dense kernels. Compiled with -mavx2 -mfma and
// reached only through the runtime dispatch in kernels.cpp.

#include "hrl/kern/kernels.hpp"

#if defined(HRL_HAVE_X86_KERNELS)

#include <immintrin.h>

namespace hrl::kern {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

void affine_avx2(const double* W, const double* b, const double* x,
                 double* y, std::size_t rows, std::size_t cols) {
    const std::size_t tail = cols & ~std::size_t(3);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* wr = W + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c < tail; c += 4) {
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(wr + c),
                                  _mm256_loadu_pd(x + c), acc);
        }
        double s = hsum(acc);
        for (; c < cols; ++c) s += wr[c] * x[c];
        y[r] = s + (b ? b[r] : 0.0);
    }
}

void matvec_t_avx2(const double* W, const double* d, double* out,
                   std::size_t rows, std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
    const std::size_t tail = cols & ~std::size_t(3);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* wr = W + r * cols;
        const __m256d dr = _mm256_set1_pd(d[r]);
        std::size_t c = 0;
        for (; c < tail; c += 4) {
            __m256d o = _mm256_loadu_pd(out + c);
            o = _mm256_fmadd_pd(dr, _mm256_loadu_pd(wr + c), o);
            _mm256_storeu_pd(out + c, o);
        }
        const double ds = d[r];
        for (; c < cols; ++c) out[c] += ds * wr[c];
    }
}

void outer_acc_avx2(double* G, const double* d, const double* x,
                    std::size_t rows, std::size_t cols) {
    const std::size_t tail = cols & ~std::size_t(3);
    for (std::size_t r = 0; r < rows; ++r) {
        double* gr = G + r * cols;
        const __m256d dr = _mm256_set1_pd(d[r]);
        std::size_t c = 0;
        for (; c < tail; c += 4) {
            __m256d g = _mm256_loadu_pd(gr + c);
            g = _mm256_fmadd_pd(dr, _mm256_loadu_pd(x + c), g);
            _mm256_storeu_pd(gr + c, g);
        }
        const double ds = d[r];
        for (; c < cols; ++c) gr[c] += ds * x[c];
    }
}

void adam_avx2(double* p, const double* g, double* m, double* v,
               std::size_t n, const AdamParams& ap) {
    const __m256d b1 = _mm256_set1_pd(ap.beta1);
    const __m256d b2 = _mm256_set1_pd(ap.beta2);
    const __m256d ob1 = _mm256_set1_pd(1.0 - ap.beta1);
    const __m256d ob2 = _mm256_set1_pd(1.0 - ap.beta2);
    const __m256d inv_bias1 = _mm256_set1_pd(1.0 / ap.bias1);
    const __m256d inv_bias2 = _mm256_set1_pd(1.0 / ap.bias2);
    const __m256d alpha = _mm256_set1_pd(ap.alpha);
    const __m256d eps = _mm256_set1_pd(ap.eps);

    const std::size_t tail = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < tail; i += 4) {
        const __m256d gi = _mm256_loadu_pd(g + i);
        __m256d mi = _mm256_loadu_pd(m + i);
        __m256d vi = _mm256_loadu_pd(v + i);
        mi = _mm256_fmadd_pd(ob1, gi, _mm256_mul_pd(b1, mi));
        vi = _mm256_fmadd_pd(ob2, _mm256_mul_pd(gi, gi), _mm256_mul_pd(b2, vi));
        _mm256_storeu_pd(m + i, mi);
        _mm256_storeu_pd(v + i, vi);
        const __m256d mhat = _mm256_mul_pd(mi, inv_bias1);
        const __m256d vhat = _mm256_mul_pd(vi, inv_bias2);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), eps);
        const __m256d upd = _mm256_div_pd(_mm256_mul_pd(alpha, mhat), denom);
        _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), upd));
    }
    for (; i < n; ++i) {
        m[i] = ap.beta1 * m[i] + (1.0 - ap.beta1) * g[i];
        v[i] = ap.beta2 * v[i] + (1.0 - ap.beta2) * g[i] * g[i];
        const double mhat = m[i] / ap.bias1;
        const double vhat = v[i] / ap.bias2;
        p[i] -= ap.alpha * mhat / (__builtin_sqrt(vhat) + ap.eps);
    }
}

const Kernels kAvx2{affine_avx2, matvec_t_avx2, outer_acc_avx2, adam_avx2,
                    "avx2"};

}  // namespace

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Kernels& avx2_kernels() { return kAvx2; }

}  // namespace hrl::kern

#endif  // HRL_HAVE_X86_KERNELS
