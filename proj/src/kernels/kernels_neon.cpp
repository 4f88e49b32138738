// NEON kernel variants for aarch64. float64x2_t is baseline on aarch64, so
// availability is a compile-time fact there.

#include "relab/kernels/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace relab::kernels {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_neon(double a, double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void gemm_nn_neon(std::size_t m, std::size_t n, std::size_t k,
                  const double* A, const double* B, double* C) {
    for (std::size_t i = 0; i < m; ++i) {
        double* c = C + i * n;
        const double* a = A + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            if (a[p] == 0.0) continue;
            axpy_neon(a[p], B + p * n, c, n);
        }
    }
}

void gemm_tn_neon(std::size_t m, std::size_t n, std::size_t k,
                  const double* A, const double* B, double* C) {
    for (std::size_t p = 0; p < k; ++p) {
        const double* a = A + p * m;
        const double* b = B + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            if (a[i] == 0.0) continue;
            axpy_neon(a[i], b, C + i * n, n);
        }
    }
}

void gemm_nt_neon(std::size_t m, std::size_t n, std::size_t k,
                  const double* A, const double* B, double* C) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* a = A + i * k;
        double* c = C + i * n;
        for (std::size_t j = 0; j < n; ++j) c[j] += dot_neon(a, B + j * k, k);
    }
}

void relu_neon(double* x, std::size_t n) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(x + i, vmaxq_f64(zero, vld1q_f64(x + i)));
    for (; i < n; ++i)
        if (x[i] < 0.0) x[i] = 0.0;
}

void relu_backward_neon(const double* z, double* g, std::size_t n) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t mask = vcgtq_f64(vld1q_f64(z + i), zero);
        const float64x2_t vg = vld1q_f64(g + i);
        vst1q_f64(g + i, vreinterpretq_f64_u64(
                             vandq_u64(mask, vreinterpretq_u64_f64(vg))));
    }
    for (; i < n; ++i)
        if (!(z[i] > 0.0)) g[i] = 0.0;
}

}  // namespace

const Backend* neon_backend() {
    static const Backend b{
        "neon",        dot_neon,     axpy_neon, scal_neon,
        gemm_nn_neon,  gemm_tn_neon, gemm_nt_neon,
        relu_neon,     relu_backward_neon,
    };
    return &b;
}

}  // namespace relab::kernels

#else

namespace relab::kernels {
const Backend* neon_backend() { return nullptr; }
}  // namespace relab::kernels

#endif
