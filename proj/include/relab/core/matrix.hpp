#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "relab/kernels/kernels.hpp"

namespace relab {

// Dense row-major matrix of doubles. Plain value type; all arithmetic goes
// through the kernel backend.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    void zero() { data_.assign(data_.size(), 0.0); }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// C += A*B
inline void matmul_acc(const Matrix& A, const Matrix& B, Matrix& C) {
    if (A.cols() != B.rows() || C.rows() != A.rows() || C.cols() != B.cols())
        throw std::invalid_argument("matmul_acc: shape mismatch");
    kernels::active().gemm_nn(A.rows(), B.cols(), A.cols(), A.data(), B.data(), C.data());
}

// C += A^T*B
inline void matmul_tn_acc(const Matrix& A, const Matrix& B, Matrix& C) {
    if (A.rows() != B.rows() || C.rows() != A.cols() || C.cols() != B.cols())
        throw std::invalid_argument("matmul_tn_acc: shape mismatch");
    kernels::active().gemm_tn(A.cols(), B.cols(), A.rows(), A.data(), B.data(), C.data());
}

// C += A*B^T
inline void matmul_nt_acc(const Matrix& A, const Matrix& B, Matrix& C) {
    if (A.cols() != B.cols() || C.rows() != A.rows() || C.cols() != B.rows())
        throw std::invalid_argument("matmul_nt_acc: shape mismatch");
    kernels::active().gemm_nt(A.rows(), B.rows(), A.cols(), A.data(), B.data(), C.data());
}

}  // namespace relab
