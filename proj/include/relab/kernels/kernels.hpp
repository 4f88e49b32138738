#pragma once

#include <cstddef>
#include <string>

// Dense numeric kernels with runtime backend selection.
//
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2+FMA on x86-64, NEON on aarch64) compiled into separate translation
// units. The active backend is chosen once per process from CPU features;
// the RELAB_KERNELS environment variable (scalar|avx2|neon) overrides the
// choice, which the equivalence tests use to pin a backend.
//
// Matrix arguments are dense row-major. All gemm variants accumulate into C;
// callers zero C when they want a plain product.

namespace relab::kernels {

struct Backend {
    const char* name;

    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x[i] *= a
    void (*scal)(double a, double* x, std::size_t n);
    // C(m,n) += A(m,k) * B(k,n)
    void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k,
                    const double* A, const double* B, double* C);
    // C(m,n) += A^T * B with A stored (k,m)
    void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k,
                    const double* A, const double* B, double* C);
    // C(m,n) += A * B^T with B stored (n,k)
    void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k,
                    const double* A, const double* B, double* C);
    // x[i] = max(x[i], 0)
    void (*relu)(double* x, std::size_t n);
    // g[i] = z[i] > 0 ? g[i] : 0
    void (*relu_backward)(const double* z, double* g, std::size_t n);
};

const Backend& scalar_backend();
const Backend* avx2_backend();  // nullptr when unsupported by this CPU/build
const Backend* neon_backend();

// The process-wide backend. First call latches the selection.
const Backend& active();

// Test hook: force a backend by name for the rest of the process.
// Returns false (and keeps the current backend) for an unknown/unavailable name.
bool force_backend(const std::string& name);

// y = 1/(1+exp(-x)), elementwise. Not dispatched; libm exp dominates.
void sigmoid(const double* x, double* y, std::size_t n);

}  // namespace relab::kernels
