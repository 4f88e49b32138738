#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "relab/core/matrix.hpp"

namespace relab {

// Cholesky factorization A = L*L^T of a symmetric positive-definite matrix.
// Used for every ridge / design-matrix solve; no explicit inverse is formed.
class Cholesky {
public:
    explicit Cholesky(const Matrix& A) : n_(A.rows()), L_(A.rows(), A.cols()) {
        if (A.rows() != A.cols()) throw std::invalid_argument("cholesky: matrix not square");
        const auto& k = kernels::active();
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                const double s = A(i, j) - k.dot(L_.row(i), L_.row(j), j);
                if (i == j) {
                    if (!(s > 0.0)) throw std::runtime_error("cholesky: matrix not positive definite");
                    L_(i, i) = std::sqrt(s);
                } else {
                    L_(i, j) = s / L_(j, j);
                }
            }
        }
    }

    std::size_t dim() const { return n_; }

    // x = A^-1 b
    std::vector<double> solve(std::span<const double> b) const {
        if (b.size() != n_) throw std::invalid_argument("cholesky: rhs dimension mismatch");
        std::vector<double> x(b.begin(), b.end());
        forward(x.data());
        backward(x.data());
        return x;
    }

    // x^T A^-1 x = ||L^-1 x||^2
    double inverse_quadratic_form(std::span<const double> x) const {
        if (x.size() != n_) throw std::invalid_argument("cholesky: vector dimension mismatch");
        std::vector<double> y(x.begin(), x.end());
        forward(y.data());
        return kernels::active().dot(y.data(), y.data(), n_);
    }

private:
    void forward(double* x) const {
        const auto& k = kernels::active();
        for (std::size_t i = 0; i < n_; ++i)
            x[i] = (x[i] - k.dot(L_.row(i), x, i)) / L_(i, i);
    }

    void backward(double* x) const {
        for (std::size_t i = n_; i-- > 0;) {
            double s = x[i];
            for (std::size_t j = i + 1; j < n_; ++j) s -= L_(j, i) * x[j];
            x[i] = s / L_(i, i);
        }
    }

    std::size_t n_;
    Matrix L_;
};

}  // namespace relab
