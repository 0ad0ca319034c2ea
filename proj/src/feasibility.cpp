#include "steerjm/feasibility.hpp"

#include <cmath>

#include "steerjm/eig.hpp"

namespace steerjm {

DeterministicStrategySet DeterministicStrategySet::enumerate(
    const std::vector<int>& outcomes_per_setting) {
    DeterministicStrategySet s;
    s.outcomes_per_setting = outcomes_per_setting;
    long total = 1;
    for (int o : outcomes_per_setting) {
        if (o < 1) throw std::invalid_argument("strategy enumeration: outcome count < 1");
        total *= o;
        if (total > 100000) throw std::invalid_argument("strategy enumeration: too many strategies");
    }
    std::vector<int> cur(outcomes_per_setting.size(), 0);
    for (long i = 0; i < total; ++i) {
        s.strategies.push_back(cur);
        for (int x = static_cast<int>(cur.size()) - 1; x >= 0; --x) {
            if (++cur[x] < outcomes_per_setting[x]) break;
            cur[x] = 0;
        }
    }
    return s;
}

std::vector<ComplexMatrix> hermitian_basis(int dim, bool traceless_only) {
    std::vector<ComplexMatrix> basis;
    if (!traceless_only) {
        for (int k = 0; k < dim; ++k) {
            ComplexMatrix e(dim, dim);
            e(k, k) = 1.0;
            basis.push_back(e);
        }
    } else {
        // Gell-Mann style orthonormal diagonal traceless elements.
        for (int k = 1; k < dim; ++k) {
            ComplexMatrix e(dim, dim);
            const double w = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
            for (int i = 0; i < k; ++i) e(i, i) = w;
            e(k, k) = -static_cast<double>(k) * w;
            basis.push_back(e);
        }
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            ComplexMatrix sym(dim, dim), asym(dim, dim);
            sym(i, j) = inv_sqrt2;
            sym(j, i) = inv_sqrt2;
            asym(i, j) = cplx(0.0, -inv_sqrt2);
            asym(j, i) = cplx(0.0, inv_sqrt2);
            basis.push_back(sym);
            basis.push_back(asym);
        }
    return basis;
}

namespace {

struct ResponseTable {
    const DeterministicStrategySet* det;
    const std::vector<std::vector<std::vector<double>>>* extra;

    int count() const {
        return det->count() + static_cast<int>(extra ? extra->size() : 0);
    }
    double operator()(int a, int x, int l) const {
        if (l < det->count()) return det->response(a, x, l);
        return (*extra)[l - det->count()][x][a];
    }
};

/// Shared structure of the two robustness programs:
///   minimize sum_l <C, G_l>
///   s.t. sum_l p(a|x,l) G_l - S_ax = T_ax,  G_l, S_ax >= 0,
///        sum_l <N_h, G_l> = 0 for the normalization directions N_h.
SdpProblem build_robustness_problem(const std::vector<std::vector<HermitianOperator>>& targets,
                                    int dim, const ResponseTable& resp,
                                    const std::vector<ComplexMatrix>& normalization_ops,
                                    const ComplexMatrix& objective_op) {
    SdpProblem p;
    const int nl = resp.count();
    for (int l = 0; l < nl; ++l) {
        p.block_dims.push_back(dim);
        p.objective.push_back(objective_op);
    }
    const std::vector<ComplexMatrix> basis = hermitian_basis(dim);
    int slack = nl;
    for (size_t x = 0; x < targets.size(); ++x)
        for (size_t a = 0; a < targets[x].size(); ++a) {
            p.block_dims.push_back(dim);
            p.objective.push_back(ComplexMatrix::zero(dim, dim));
            for (const ComplexMatrix& h : basis) {
                SdpProblem::Constraint c;
                for (int l = 0; l < nl; ++l) {
                    const double w = resp(static_cast<int>(a), static_cast<int>(x), l);
                    if (w != 0.0) c.terms.push_back({l, w * h});
                }
                c.terms.push_back({slack, -1.0 * h});
                c.rhs = hs_inner(h, targets[x][a].mat());
                p.constraints.push_back(std::move(c));
            }
            ++slack;
        }
    for (const ComplexMatrix& nop : normalization_ops) {
        SdpProblem::Constraint c;
        for (int l = 0; l < nl; ++l) c.terms.push_back({l, nop});
        c.rhs = 0.0;
        p.constraints.push_back(std::move(c));
    }
    return p;
}

std::vector<std::vector<std::vector<double>>> dense_response(
    const std::vector<int>& outcomes_per_setting, const ResponseTable& resp) {
    std::vector<std::vector<std::vector<double>>> r(outcomes_per_setting.size());
    for (size_t x = 0; x < outcomes_per_setting.size(); ++x) {
        r[x].resize(outcomes_per_setting[x]);
        for (int a = 0; a < outcomes_per_setting[x]; ++a) {
            r[x][a].resize(resp.count());
            for (int l = 0; l < resp.count(); ++l)
                r[x][a][l] = resp(a, static_cast<int>(x), l);
        }
    }
    return r;
}

DualCertificate extract_certificate(const SdpSolution& sol,
                                    const std::vector<std::vector<HermitianOperator>>& targets,
                                    int dim) {
    // The first outcomes*dim^2 multipliers belong to the slack-defining rows,
    // basis-major within each (x, a).
    const std::vector<ComplexMatrix> basis = hermitian_basis(dim);
    DualCertificate cert;
    size_t row = 0;
    double value = 0.0;
    for (const auto& setting : targets) {
        std::vector<HermitianOperator> ws;
        for (const HermitianOperator& t : setting) {
            ComplexMatrix y = ComplexMatrix::zero(dim, dim);
            for (const ComplexMatrix& h : basis) y += sol.y[row++] * h;
            value += hs_inner(y, t.mat());
            ws.push_back(HermitianOperator(hermitian_part(y), 1e-8));
        }
        cert.witness.push_back(std::move(ws));
    }
    cert.violation = value - 1.0;
    return cert;
}

void require_optimal(const SdpSolution& sol, const char* what) {
    if (sol.status == SdpStatus::optimal) return;
    throw SolverError(std::string(what) + ": SDP solver failed (status " +
                      (sol.status == SdpStatus::infeasible ? "infeasible" : "max_iter") +
                      ", gap " + std::to_string(sol.duality_gap) + ")");
}

}  // namespace

SdpProblem build_jm_robustness_problem(
    const MeasurementAssemblage& m, const DeterministicStrategySet& strategies,
    const std::vector<std::vector<std::vector<double>>>& extra_responses) {
    const ResponseTable resp{&strategies, &extra_responses};
    return build_robustness_problem(m.elements, m.dim, resp,
                                    hermitian_basis(m.dim, /*traceless_only=*/true),
                                    (1.0 / m.dim) * ComplexMatrix::identity(m.dim));
}

SdpProblem build_lhs_robustness_problem(const StateAssemblage& a,
                                        const SteeringEquivalentResult& se,
                                        const DeterministicStrategySet& strategies) {
    const int k = se.rank;
    const ComplexMatrix proj_dag = dagger(se.proj);
    const HermitianOperator rho_b(  // restricted reduced state
        hermitian_part(se.sqrt.mat() * se.sqrt.mat()), 1e-9);

    // The program is posed in preconditioned coordinates
    //   sigma' = rho_B^{-1/4} sigma rho_B^{-1/4}
    // so that a nearly singular reduced state does not make the central path
    // ill-conditioned (the raw sigma variables inherit the full eigenvalue
    // spread of rho_B, which stalls the interior-point iteration).  The
    // optimal value is unchanged; the objective tr[sigma] becomes
    // <rho_B^{1/2}, sigma'> and every operator is conjugated accordingly.
    const ComplexMatrix pre =
        spectral_map(rho_b, [](double v) { return std::pow(v, -0.25); }).mat();
    const ComplexMatrix pre_inv =
        spectral_map(rho_b, [](double v) { return std::pow(v, 0.25); }).mat();

    std::vector<std::vector<HermitianOperator>> targets(a.settings());
    for (int x = 0; x < a.settings(); ++x)
        for (int aa = 0; aa < a.outcomes(x); ++aa)
            targets[x].push_back(HermitianOperator(
                hermitian_part(pre * (se.proj * a.elements[x][aa].mat() * proj_dag) * pre),
                1e-8));

    std::vector<ComplexMatrix> normalization;
    for (const ComplexMatrix& h : hermitian_basis(k, /*traceless_only=*/true)) {
        const ComplexMatrix n = h - hs_inner(h, rho_b.mat()) * ComplexMatrix::identity(k);
        normalization.push_back(hermitian_part(pre_inv * n * pre_inv));
    }

    const ResponseTable resp{&strategies, nullptr};
    return build_robustness_problem(targets, k, resp, normalization,
                                    spectral_map(rho_b, [](double v) {
                                        return std::sqrt(v);
                                    }).mat());
}

JmResult jm_feasible(const MeasurementAssemblage& m) {
    std::vector<int> outcomes;
    for (int x = 0; x < m.settings(); ++x) outcomes.push_back(m.outcomes(x));
    const DeterministicStrategySet strategies = DeterministicStrategySet::enumerate(outcomes);
    const SdpProblem prob = build_jm_robustness_problem(m, strategies);
    JmResult res;
    res.sdp = solve(prob);
    require_optimal(res.sdp, "jm_feasible");
    res.robustness = std::max(res.sdp.primal_value - 1.0, 0.0);
    res.jm = res.robustness <= kFeasibilityThreshold;
    if (res.jm) {
        JointObservable jo;
        const double scale = res.sdp.primal_value;
        for (int l = 0; l < strategies.count(); ++l)
            jo.effects.push_back(
                HermitianOperator((1.0 / scale) * res.sdp.primal_blocks[l], 1e-8));
        jo.response = dense_response(outcomes, ResponseTable{&strategies, nullptr});
        res.model = std::move(jo);
    } else {
        res.certificate = extract_certificate(res.sdp, m.elements, m.dim);
    }
    return res;
}

LhsResult lhs_feasible(const StateAssemblage& a) {
    const SteeringEquivalentResult se = se_observables(a);
    std::vector<int> outcomes;
    for (int x = 0; x < a.settings(); ++x) outcomes.push_back(a.outcomes(x));
    const DeterministicStrategySet strategies = DeterministicStrategySet::enumerate(outcomes);
    const SdpProblem prob = build_lhs_robustness_problem(a, se, strategies);
    LhsResult res;
    res.sdp = solve(prob);
    require_optimal(res.sdp, "lhs_feasible");
    res.robustness = std::max(res.sdp.primal_value - 1.0, 0.0);
    res.unsteerable = res.robustness <= kFeasibilityThreshold;
    const ComplexMatrix proj_dag = dagger(se.proj);
    const HermitianOperator rho_b(hermitian_part(se.sqrt.mat() * se.sqrt.mat()), 1e-9);
    const ComplexMatrix pre =
        spectral_map(rho_b, [](double v) { return std::pow(v, -0.25); }).mat();
    const ComplexMatrix pre_inv =
        spectral_map(rho_b, [](double v) { return std::pow(v, 0.25); }).mat();
    if (res.unsteerable) {
        // Undo the preconditioning (sigma = rho_B^{1/4} sigma' rho_B^{1/4})
        // and embed the subnormalized states back into the full space.
        LhsModel lhs;
        const double scale = res.sdp.primal_value;
        for (int l = 0; l < strategies.count(); ++l)
            lhs.states.push_back(HermitianOperator(
                hermitian_part((1.0 / scale) * (proj_dag * pre_inv *
                                                res.sdp.primal_blocks[l] * pre_inv * se.proj)),
                1e-7));
        lhs.response = dense_response(outcomes, ResponseTable{&strategies, nullptr});
        res.model = std::move(lhs);
    } else {
        std::vector<std::vector<HermitianOperator>> targets(a.settings());
        for (int x = 0; x < a.settings(); ++x)
            for (int aa = 0; aa < a.outcomes(x); ++aa)
                targets[x].push_back(HermitianOperator(
                    hermitian_part(pre * (se.proj * a.elements[x][aa].mat() * proj_dag) * pre),
                    1e-8));
        DualCertificate cert = extract_certificate(res.sdp, targets, se.rank);
        for (auto& setting : cert.witness)
            for (HermitianOperator& w : setting)
                w = HermitianOperator(
                    hermitian_part(proj_dag * pre * w.mat() * pre * se.proj), 1e-7);
        res.certificate = std::move(cert);
    }
    return res;
}

}  // namespace steerjm
