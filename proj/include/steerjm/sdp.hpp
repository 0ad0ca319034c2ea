#pragma once

#include <vector>

#include "steerjm/matrix.hpp"

namespace steerjm {

/// Standard-form semidefinite program over Hermitian PSD blocks:
///   minimize    sum_j <C_j, X_j>
///   subject to  sum_j <A_ij, X_j> = b_i   (i = 1..m),   X_j >= 0.
/// Coefficient operators are Hermitian; constraints store only the blocks
/// they touch.
struct SdpProblem {
    std::vector<int> block_dims;
    std::vector<ComplexMatrix> objective;  // one Hermitian C_j per block

    struct Constraint {
        std::vector<std::pair<int, ComplexMatrix>> terms;  // (block index, A)
        double rhs = 0.0;
    };
    std::vector<Constraint> constraints;

    void check() const;
    int total_dim() const;
};

enum class SdpStatus { optimal, infeasible, max_iter };

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SdpSolution {
    SdpStatus status = SdpStatus::max_iter;
    double primal_value = 0.0;
    double dual_value = 0.0;
    double duality_gap = 0.0;  // relative
    std::vector<ComplexMatrix> primal_blocks;
    std::vector<ComplexMatrix> dual_blocks;
    std::vector<double> y;  // multipliers, one per constraint
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    /// For status == infeasible: a dual improving ray (b.ray > 0, A*(ray) <= 0).
    std::vector<double> improving_ray;
    double ray_violation = 0.0;
};

struct SdpOptions {
    double gap_tol = 1e-9;    // relative duality gap
    double feas_tol = 1e-9;
    int max_iter = 200;
};

/// Primal-dual path-following interior-point solver with Nesterov-Todd
/// scaling, assembled over the real vector space of Hermitian matrices.
/// Intended for small dense problems (total dimension up to a few hundred).
SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {});

}  // namespace steerjm
