#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace steerjm {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const cplx& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    bool all_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);
ComplexMatrix operator*(double s, const ComplexMatrix& a);
ComplexMatrix& operator+=(ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix& operator-=(ComplexMatrix& a, const ComplexMatrix& b);

/// Conjugate transpose.
ComplexMatrix dagger(const ComplexMatrix& a);

cplx trace(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);

/// Hermiticity residual ||M - M^dag||_max.
double hermiticity_defect(const ComplexMatrix& a);

/// (M + M^dag)/2.
ComplexMatrix hermitian_part(const ComplexMatrix& a);

/// Real Hilbert-Schmidt inner product Re tr(A^dag B).
double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Complex square matrix with an enforced Hermiticity contract.  The stored
/// matrix is the Hermitian part of the input; construction throws if the
/// defect exceeds the tolerance.
class HermitianOperator {
public:
    HermitianOperator() = default;
    explicit HermitianOperator(const ComplexMatrix& m, double rel_tol = 1e-12);

    int dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }

    cplx operator()(int r, int c) const { return mat_(r, c); }

private:
    ComplexMatrix mat_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double s, const HermitianOperator& a);

}  // namespace steerjm
