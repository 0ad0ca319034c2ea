#pragma once

#include <vector>

#include "steerjm/assemblage.hpp"
#include "steerjm/eig.hpp"

namespace steerjm {

/// Bob's steering-equivalent observables: the assemblage restricted to the
/// range of the reduced state and conjugated by its inverse square root.
/// The basis of the restricted space is the eigenbasis of the reduced state,
/// ordered by descending eigenvalue, which makes results deterministic.
struct SteeringEquivalentResult {
    MeasurementAssemblage observables;  // POVMs on the restricted space
    ComplexMatrix proj;                 // rank x dim_b range projection
    HermitianOperator inv_sqrt;         // restricted (rho_B)^{-1/2}
    HermitianOperator sqrt;             // restricted (rho_B)^{1/2}
    int rank = 0;
};

/// LHS model: subnormalized states plus a response function p(a|x,lambda).
/// response[x][a][lambda]; each response column sums to 1 over a.
struct LhsModel {
    std::vector<HermitianOperator> states;
    std::vector<std::vector<std::vector<double>>> response;
};

/// Parent observable decomposition: effects plus a response function.
struct JointObservable {
    std::vector<HermitianOperator> effects;
    std::vector<std::vector<std::vector<double>>> response;  // [x][a][lambda]
};

SteeringEquivalentResult se_observables(const StateAssemblage& a, double rank_tol = 1e-9);

/// Map an LHS model for the assemblage behind `se` to a joint observable for
/// se.observables (same response function).  Throws "inconsistent model" if
/// the mapped effects fail to reconstruct the SE observables.
JointObservable lhs_to_joint(const LhsModel& lhs, const SteeringEquivalentResult& se);

/// Inverse map; output states live on the full space (embedded from the range).
LhsModel joint_to_lhs(const JointObservable& joint, const SteeringEquivalentResult& se);

double reconstruction_residual(const MeasurementAssemblage& m, const JointObservable& joint);
double reconstruction_residual(const StateAssemblage& a, const LhsModel& lhs);

}  // namespace steerjm
