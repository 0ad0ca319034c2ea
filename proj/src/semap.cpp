#include "steerjm/semap.hpp"

#include <cmath>

namespace steerjm {

namespace {

double max_reconstruction(const std::vector<std::vector<HermitianOperator>>& target,
                          const std::vector<HermitianOperator>& parts,
                          const std::vector<std::vector<std::vector<double>>>& response) {
    double worst = 0.0;
    for (size_t x = 0; x < target.size(); ++x)
        for (size_t a = 0; a < target[x].size(); ++a) {
            ComplexMatrix sum =
                ComplexMatrix::zero(target[x][a].dim(), target[x][a].dim());
            for (size_t l = 0; l < parts.size(); ++l)
                sum += response[x][a][l] * parts[l].mat();
            worst = std::max(worst, frobenius_norm(target[x][a].mat() - sum));
        }
    return worst;
}

}  // namespace

SteeringEquivalentResult se_observables(const StateAssemblage& a, double rank_tol) {
    if (a.settings() == 0) throw std::invalid_argument("se_observables: empty assemblage");
    const HermitianOperator rho_b = a.reduced_state(0);
    const double tr_res = std::abs(trace(rho_b.mat()).real() - 1.0);
    if (tr_res > 1e-9)
        throw std::invalid_argument("se_observables: reduced state trace differs from 1 by " +
                                    std::to_string(tr_res));
    for (int x = 1; x < a.settings(); ++x) {
        const double res = frobenius_norm(a.reduced_state(x).mat() - rho_b.mat());
        if (res > 1e-9)
            throw std::invalid_argument("se_observables: no-signaling violation, residual " +
                                        std::to_string(res));
    }

    const RestrictedInvSqrt ris = restricted_inv_sqrt(rho_b, rank_tol);
    SteeringEquivalentResult out;
    out.proj = ris.proj;
    out.inv_sqrt = ris.inv_sqrt;
    out.sqrt = ris.sqrt;
    out.rank = ris.rank;
    out.observables.dim = ris.rank;
    out.observables.elements.resize(a.settings());

    const ComplexMatrix proj_dag = dagger(ris.proj);
    for (int x = 0; x < a.settings(); ++x)
        for (int aa = 0; aa < a.outcomes(x); ++aa) {
            const ComplexMatrix& rho = a.elements[x][aa].mat();
            // Range inclusion is analytic but can fail numerically near rank
            // boundaries; assert it rather than assume.
            const ComplexMatrix restricted = ris.proj * rho * proj_dag;
            const double loss = frobenius_norm(proj_dag * restricted * ris.proj - rho);
            if (loss > 1e-8 * (1.0 + frobenius_norm(rho)))
                throw std::runtime_error(
                    "se_observables: assemblage element (x=" + std::to_string(x) +
                    ", a=" + std::to_string(aa) +
                    ") not supported on range(rho_B), residual " + std::to_string(loss));
            const ComplexMatrix b =
                ris.inv_sqrt.mat() * restricted * ris.inv_sqrt.mat();
            out.observables.elements[x].push_back(HermitianOperator(hermitian_part(b), 1e-9));
        }
    return out;
}

JointObservable lhs_to_joint(const LhsModel& lhs, const SteeringEquivalentResult& se) {
    JointObservable out;
    out.response = lhs.response;
    const ComplexMatrix proj_dag = dagger(se.proj);
    for (const HermitianOperator& sigma : lhs.states) {
        const ComplexMatrix g =
            se.inv_sqrt.mat() * (se.proj * sigma.mat() * proj_dag) * se.inv_sqrt.mat();
        out.effects.push_back(HermitianOperator(hermitian_part(g), 1e-9));
    }
    const double res = max_reconstruction(se.observables.elements, out.effects, out.response);
    if (res > 1e-7)
        throw std::invalid_argument("lhs_to_joint: inconsistent model, reconstruction residual " +
                                    std::to_string(res));
    return out;
}

LhsModel joint_to_lhs(const JointObservable& joint, const SteeringEquivalentResult& se) {
    LhsModel out;
    out.response = joint.response;
    const ComplexMatrix proj_dag = dagger(se.proj);
    for (const HermitianOperator& g : joint.effects) {
        const ComplexMatrix sigma_tilde = se.sqrt.mat() * g.mat() * se.sqrt.mat();
        out.states.push_back(
            HermitianOperator(hermitian_part(proj_dag * sigma_tilde * se.proj), 1e-9));
    }
    return out;
}

double reconstruction_residual(const MeasurementAssemblage& m, const JointObservable& joint) {
    return max_reconstruction(m.elements, joint.effects, joint.response);
}

double reconstruction_residual(const StateAssemblage& a, const LhsModel& lhs) {
    return max_reconstruction(a.elements, lhs.states, lhs.response);
}

}  // namespace steerjm
