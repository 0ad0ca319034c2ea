#include "steerjm/matrix.hpp"

#include <cmath>

namespace steerjm {

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

bool ComplexMatrix::all_finite() const {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

static void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix shape mismatch: " + std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                    "x" + std::to_string(b.cols()));
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b);
    ComplexMatrix r = a;
    for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] += b.data()[i];
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b);
    ComplexMatrix r = a;
    for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] -= b.data()[i];
    return r;
}

ComplexMatrix& operator+=(ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b);
    for (size_t i = 0; i < a.data().size(); ++i) a.data()[i] += b.data()[i];
    return a;
}

ComplexMatrix& operator-=(ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b);
    for (size_t i = 0; i < a.data().size(); ++i) a.data()[i] -= b.data()[i];
    return a;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    ComplexMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
    ComplexMatrix r = a;
    for (cplx& z : r.data()) z *= s;
    return r;
}

ComplexMatrix operator*(double s, const ComplexMatrix& a) { return cplx(s, 0.0) * a; }

ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

cplx trace(const ComplexMatrix& a) {
    cplx t = 0.0;
    for (int i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const cplx& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const cplx& z : a.data()) m = std::max(m, std::abs(z));
    return m;
}

double hermiticity_defect(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermiticity_defect: matrix not square");
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_part: matrix not square");
    ComplexMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return r;
}

double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b);
    double s = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i)
        s += a.data()[i].real() * b.data()[i].real() + a.data()[i].imag() * b.data()[i].imag();
    return s;
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double rel_tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("HermitianOperator: matrix not square");
    if (!m.all_finite()) throw std::invalid_argument("HermitianOperator: non-finite entries");
    const double defect = hermiticity_defect(m);
    const double scale = 1.0 + max_abs(m);
    if (defect > rel_tol * scale)
        throw std::invalid_argument("HermitianOperator: hermiticity defect " +
                                    std::to_string(defect) + " exceeds tolerance");
    mat_ = hermitian_part(m);
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(a.mat() + b.mat());
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(a.mat() - b.mat());
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
    return HermitianOperator(s * a.mat());
}

}  // namespace steerjm
