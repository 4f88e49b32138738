#include "relab/kernels/kernels.hpp"

#include <cmath>

namespace relab::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void gemm_nn_scalar(std::size_t m, std::size_t n, std::size_t k,
                    const double* A, const double* B, double* C) {
    for (std::size_t i = 0; i < m; ++i) {
        double* c = C + i * n;
        const double* a = A + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double ap = a[p];
            if (ap == 0.0) continue;
            const double* b = B + p * n;
            for (std::size_t j = 0; j < n; ++j) c[j] += ap * b[j];
        }
    }
}

void gemm_tn_scalar(std::size_t m, std::size_t n, std::size_t k,
                    const double* A, const double* B, double* C) {
    // A stored (k,m): C[i,j] += sum_p A[p,i]*B[p,j]
    for (std::size_t p = 0; p < k; ++p) {
        const double* a = A + p * m;
        const double* b = B + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double ai = a[i];
            if (ai == 0.0) continue;
            double* c = C + i * n;
            for (std::size_t j = 0; j < n; ++j) c[j] += ai * b[j];
        }
    }
}

void gemm_nt_scalar(std::size_t m, std::size_t n, std::size_t k,
                    const double* A, const double* B, double* C) {
    // B stored (n,k): C[i,j] += dot(A row i, B row j)
    for (std::size_t i = 0; i < m; ++i) {
        const double* a = A + i * k;
        double* c = C + i * n;
        for (std::size_t j = 0; j < n; ++j) c[j] += dot_scalar(a, B + j * k, k);
    }
}

void relu_scalar(double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] < 0.0) x[i] = 0.0;
}

void relu_backward_scalar(const double* z, double* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!(z[i] > 0.0)) g[i] = 0.0;
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend b{
        "scalar",        dot_scalar,     axpy_scalar, scal_scalar,
        gemm_nn_scalar,  gemm_tn_scalar, gemm_nt_scalar,
        relu_scalar,     relu_backward_scalar,
    };
    return b;
}

void sigmoid(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
}

}  // namespace relab::kernels
