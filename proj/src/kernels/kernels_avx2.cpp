// AVX2+FMA kernel variants. This TU is compiled with -mavx2 -mfma on x86-64;
// dispatch.cpp only hands the backend out after __builtin_cpu_supports checks.

#include "relab/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define RELAB_KERNELS_X86 1
#else
#define RELAB_KERNELS_X86 0
#endif

#if RELAB_KERNELS_X86
#include <immintrin.h>

namespace relab::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void gemm_nn_avx2(std::size_t m, std::size_t n, std::size_t k,
                  const double* A, const double* B, double* C) {
    for (std::size_t i = 0; i < m; ++i) {
        double* c = C + i * n;
        const double* a = A + i * k;
        std::size_t p = 0;
        // two B rows per pass keeps the FMA ports busier
        for (; p + 2 <= k; p += 2) {
            const __m256d a0 = _mm256_set1_pd(a[p]);
            const __m256d a1 = _mm256_set1_pd(a[p + 1]);
            const double* b0 = B + p * n;
            const double* b1 = b0 + n;
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                __m256d vc = _mm256_loadu_pd(c + j);
                vc = _mm256_fmadd_pd(a0, _mm256_loadu_pd(b0 + j), vc);
                vc = _mm256_fmadd_pd(a1, _mm256_loadu_pd(b1 + j), vc);
                _mm256_storeu_pd(c + j, vc);
            }
            for (; j < n; ++j) c[j] += a[p] * b0[j] + a[p + 1] * b1[j];
        }
        for (; p < k; ++p) {
            const __m256d ap = _mm256_set1_pd(a[p]);
            const double* b = B + p * n;
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                __m256d vc = _mm256_loadu_pd(c + j);
                vc = _mm256_fmadd_pd(ap, _mm256_loadu_pd(b + j), vc);
                _mm256_storeu_pd(c + j, vc);
            }
            for (; j < n; ++j) c[j] += a[p] * b[j];
        }
    }
}

void gemm_tn_avx2(std::size_t m, std::size_t n, std::size_t k,
                  const double* A, const double* B, double* C) {
    for (std::size_t p = 0; p < k; ++p) {
        const double* a = A + p * m;
        const double* b = B + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            if (a[i] == 0.0) continue;
            axpy_avx2(a[i], b, C + i * n, n);
        }
    }
}

void gemm_nt_avx2(std::size_t m, std::size_t n, std::size_t k,
                  const double* A, const double* B, double* C) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* a = A + i * k;
        double* c = C + i * n;
        for (std::size_t j = 0; j < n; ++j) c[j] += dot_avx2(a, B + j * k, k);
    }
}

void relu_avx2(double* x, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i)
        if (x[i] < 0.0) x[i] = 0.0;
}

void relu_backward_avx2(const double* z, double* g, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(z + i), zero, _CMP_GT_OQ);
        _mm256_storeu_pd(g + i, _mm256_and_pd(mask, _mm256_loadu_pd(g + i)));
    }
    for (; i < n; ++i)
        if (!(z[i] > 0.0)) g[i] = 0.0;
}

}  // namespace

const Backend* avx2_backend() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
    static const Backend b{
        "avx2",        dot_avx2,     axpy_avx2, scal_avx2,
        gemm_nn_avx2,  gemm_tn_avx2, gemm_nt_avx2,
        relu_avx2,     relu_backward_avx2,
    };
    return &b;
}

}  // namespace relab::kernels

#else

namespace relab::kernels {
const Backend* avx2_backend() { return nullptr; }
}  // namespace relab::kernels

#endif
