#pragma once

#include <vector>

#include "steerjm/matrix.hpp"

namespace steerjm {

/// Spectral decomposition M = V diag(eigenvalues) V^dag with eigenvalues in
/// descending order and orthonormal eigenvector columns.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

struct EigError : std::runtime_error {
    double residual;
    EigError(const std::string& msg, double res) : std::runtime_error(msg), residual(res) {}
};

/// Cyclic Jacobi diagonalization for dense Hermitian matrices.  Dimensions
/// here stay small (<= ~32), where Jacobi is both accurate and simple.
EigenDecomposition eig_hermitian(const HermitianOperator& m, int max_sweeps = 60);

bool psd_check(const HermitianOperator& m, double tol);

/// Range projection and restricted inverse square root of a PSD matrix.
/// proj has shape rank x dim; rows are the eigenvectors of the retained
/// (descending) eigenvalues, so proj M proj^dag is diagonal on the range.
struct RestrictedInvSqrt {
    ComplexMatrix proj;
    HermitianOperator inv_sqrt;   // (proj M proj^dag)^{-1/2}
    HermitianOperator sqrt;       // (proj M proj^dag)^{1/2}
    int rank = 0;
};

/// rank_tol is relative to the largest eigenvalue; eigenvalues below
/// rank_tol * lambda_max are treated as zero.  Throws if M has an eigenvalue
/// below -rank_tol * lambda_max.
RestrictedInvSqrt restricted_inv_sqrt(const HermitianOperator& m, double rank_tol = 1e-9);

/// Apply f to the spectrum: V diag(f(lambda)) V^dag.
HermitianOperator spectral_map(const HermitianOperator& m, double (*f)(double));

}  // namespace steerjm
