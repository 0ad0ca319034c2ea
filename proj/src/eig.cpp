#include "steerjm/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace steerjm {

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (int p = 0; p < a.rows(); ++p)
        for (int q = p + 1; q < a.cols(); ++q) s += std::norm(a(p, q));
    return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition eig_hermitian(const HermitianOperator& m, int max_sweeps) {
    const int n = m.dim();
    ComplexMatrix a = m.mat();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(1.0, frobenius_norm(a));
    const double stop = 1e-15 * scale;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (offdiag_norm(a) <= stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Right-multiply columns p,q by G = [[c, s*phase], [-s*conj(phase), c]].
                for (int k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(phase) * akq;
                    a(k, q) = s * phase * akp + c * akq;
                }
                // Left-multiply rows p,q by G^dag.
                for (int k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - s * phase * aqk;
                    a(q, k) = s * std::conj(phase) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);

                for (int k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(phase) * vkq;
                    v(k, q) = s * phase * vkp + c * vkq;
                }
            }
        }
    }
    const double residual = offdiag_norm(a);
    if (sweep == max_sweeps && residual > 1e-11 * scale)
        throw EigError("Jacobi eigensolver did not converge, off-diagonal residual " +
                           std::to_string(residual),
                       residual);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

bool psd_check(const HermitianOperator& m, double tol) {
    const EigenDecomposition e = eig_hermitian(m);
    return e.eigenvalues.empty() || e.eigenvalues.back() >= -tol;
}

RestrictedInvSqrt restricted_inv_sqrt(const HermitianOperator& m, double rank_tol) {
    const EigenDecomposition e = eig_hermitian(m);
    const int n = m.dim();
    const double lmax = e.eigenvalues.empty() ? 0.0 : std::max(e.eigenvalues.front(), 0.0);
    const double cut = rank_tol * std::max(lmax, 1e-300);
    if (!e.eigenvalues.empty() && e.eigenvalues.back() < -cut)
        throw std::invalid_argument("restricted_inv_sqrt: matrix not positive semidefinite "
                                    "(min eigenvalue " +
                                    std::to_string(e.eigenvalues.back()) + ")");
    int rank = 0;
    while (rank < n && e.eigenvalues[rank] > cut) ++rank;

    RestrictedInvSqrt out;
    out.rank = rank;
    out.proj = ComplexMatrix(rank, n);
    for (int r = 0; r < rank; ++r)
        for (int c = 0; c < n; ++c) out.proj(r, c) = std::conj(e.eigenvectors(c, r));

    ComplexMatrix inv(rank, rank), sq(rank, rank);
    for (int r = 0; r < rank; ++r) {
        inv(r, r) = 1.0 / std::sqrt(e.eigenvalues[r]);
        sq(r, r) = std::sqrt(e.eigenvalues[r]);
    }
    out.inv_sqrt = HermitianOperator(inv);
    out.sqrt = HermitianOperator(sq);
    return out;
}

HermitianOperator spectral_map(const HermitianOperator& m, double (*f)(double)) {
    const EigenDecomposition e = eig_hermitian(m);
    const int n = m.dim();
    ComplexMatrix d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = f(e.eigenvalues[i]);
    ComplexMatrix r = e.eigenvectors * d * dagger(e.eigenvectors);
    return HermitianOperator(hermitian_part(r), 1e-9);
}

}  // namespace steerjm
