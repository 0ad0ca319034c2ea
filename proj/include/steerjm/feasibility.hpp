#pragma once

#include <optional>
#include <vector>

#include "steerjm/assemblage.hpp"
#include "steerjm/sdp.hpp"
#include "steerjm/semap.hpp"

namespace steerjm {

/// Deterministic post-processing strategies: lambda assigns one outcome per
/// setting, p(a|x,lambda) = delta_{a,lambda_x}.  These suffice for joint
/// measurability, so the SDPs enumerate exactly these.
struct DeterministicStrategySet {
    std::vector<int> outcomes_per_setting;
    std::vector<std::vector<int>> strategies;  // [lambda][setting] -> outcome

    static DeterministicStrategySet enumerate(const std::vector<int>& outcomes_per_setting);

    int count() const { return static_cast<int>(strategies.size()); }
    double response(int a, int x, int lambda) const {
        return strategies[lambda][x] == a ? 1.0 : 0.0;
    }
};

/// Certificate that an assemblage is incompatible / steerable: PSD witness
/// operators indexed like the assemblage, with sum_ax <Y_ax, M_ax> = 1 + violation.
struct DualCertificate {
    std::vector<std::vector<HermitianOperator>> witness;
    double violation = 0.0;
};

struct JmResult {
    bool jm = false;
    double robustness = 0.0;  // t >= 0; jm iff t <= threshold
    std::optional<JointObservable> model;
    std::optional<DualCertificate> certificate;
    SdpSolution sdp;
};

struct LhsResult {
    bool unsteerable = false;
    double robustness = 0.0;
    std::optional<LhsModel> model;
    std::optional<DualCertificate> certificate;
    SdpSolution sdp;
};

inline constexpr double kFeasibilityThreshold = 1e-7;

/// Incompatibility-robustness SDP for a measurement assemblage:
///   minimize (1/d) sum_lambda tr[G_lambda]
///   s.t.     sum_lambda p(a|x,lambda) G_lambda >= M_{a|x},  G_lambda >= 0,
///            sum_lambda G_lambda = (1/d)(sum_lambda tr[G_lambda]) * 1.
/// Optional extra (randomized) response columns may be appended to the
/// deterministic set.  The optimal value is 1 + t.
SdpProblem build_jm_robustness_problem(
    const MeasurementAssemblage& m, const DeterministicStrategySet& strategies,
    const std::vector<std::vector<std::vector<double>>>& extra_responses = {});

/// Steering-robustness SDP for a state assemblage, posed on range(rho_B),
/// mirroring the JM program with the normalization
/// sum_lambda sigma_lambda = (tr sum_lambda sigma_lambda) * rho_B.
/// Internally the variables are preconditioned as
/// sigma' = rho_B^{-1/4} sigma rho_B^{-1/4} so nearly singular reduced
/// states stay numerically tractable; the optimal value is unchanged.
SdpProblem build_lhs_robustness_problem(const StateAssemblage& a,
                                        const SteeringEquivalentResult& se,
                                        const DeterministicStrategySet& strategies);

JmResult jm_feasible(const MeasurementAssemblage& m);
LhsResult lhs_feasible(const StateAssemblage& a);

/// Orthonormal Hermitian basis of the d x d Hermitian matrices; with
/// traceless_only, the identity direction is dropped.
std::vector<ComplexMatrix> hermitian_basis(int dim, bool traceless_only = false);

}  // namespace steerjm
