#include "steerjm/robustness.hpp"

#include <cmath>

#include "steerjm/eig.hpp"
#include "steerjm/qubit.hpp"

namespace steerjm {

namespace {

std::vector<int> outcome_counts(const MeasurementAssemblage& m) {
    std::vector<int> out;
    for (int x = 0; x < m.settings(); ++x) out.push_back(m.outcomes(x));
    return out;
}

std::vector<std::vector<std::vector<double>>> dense_deterministic_response(
    const DeterministicStrategySet& strategies) {
    std::vector<std::vector<std::vector<double>>> r(strategies.outcomes_per_setting.size());
    for (size_t x = 0; x < r.size(); ++x) {
        r[x].resize(strategies.outcomes_per_setting[x]);
        for (int a = 0; a < strategies.outcomes_per_setting[x]; ++a) {
            r[x][a].resize(strategies.count());
            for (int l = 0; l < strategies.count(); ++l)
                r[x][a][l] = strategies.response(a, static_cast<int>(x), l);
        }
    }
    return r;
}

ComplexMatrix mixed_parent_effect(const DeterministicStrategySet& strategies,
                                  const std::vector<ComplexMatrix>& g, int a, int x) {
    ComplexMatrix sum = ComplexMatrix::zero(g[0].rows(), g[0].cols());
    for (int l = 0; l < strategies.count(); ++l)
        if (strategies.response(a, x, l) > 0.0) sum += g[l];
    return sum;
}

void require_optimal(const SdpSolution& sol, const char* what) {
    if (sol.status == SdpStatus::optimal) return;
    throw SolverError(std::string(what) + ": SDP solver failed");
}

}  // namespace

RobustnessReport incompatibility_robustness(const MeasurementAssemblage& m) {
    const DeterministicStrategySet strategies =
        DeterministicStrategySet::enumerate(outcome_counts(m));
    const SdpProblem prob = build_jm_robustness_problem(m, strategies);
    const SdpSolution sol = solve(prob);
    require_optimal(sol, "incompatibility_robustness");

    RobustnessReport rep;
    rep.kind = RobustnessKind::general;
    const double t = std::max(sol.primal_value - 1.0, 0.0);
    rep.value = t;

    // Parent of the critically mixed assemblage: G / (1+t).
    JointObservable parent;
    for (int l = 0; l < strategies.count(); ++l)
        parent.effects.push_back(
            HermitianOperator((1.0 / (1.0 + t)) * sol.primal_blocks[l], 1e-7));
    parent.response = dense_deterministic_response(strategies);
    rep.model = std::move(parent);

    if (t > kFeasibilityThreshold) {
        // N_{a|x} = ((1+t) O~_{a|x} - M_{a|x}) / t with O~ the mixed parent
        // effects of G/(1+t); equivalently (sum_l p G_l - M)/t.
        MeasurementAssemblage noise;
        noise.dim = m.dim;
        double residual = 0.0;
        for (int x = 0; x < m.settings(); ++x) {
            std::vector<HermitianOperator> row;
            ComplexMatrix comp = ComplexMatrix::zero(m.dim, m.dim);
            for (int a = 0; a < m.outcomes(x); ++a) {
                ComplexMatrix n =
                    (1.0 / t) * (mixed_parent_effect(strategies, sol.primal_blocks, a, x) -
                                 m.elements[x][a].mat());
                HermitianOperator ho(hermitian_part(n), 1e-6);
                if (!psd_check(ho, 1e-6))
                    throw SolverError("incompatibility_robustness: optimal noise not PSD");
                comp += ho.mat();
                row.push_back(std::move(ho));
            }
            residual = std::max(
                residual, max_abs(comp - ComplexMatrix::identity(m.dim)));
            noise.elements.push_back(std::move(row));
        }
        if (residual > 1e-6)
            throw SolverError("incompatibility_robustness: noise assemblage incomplete");
        rep.margin = residual;
        rep.noise = std::move(noise);
    }
    return rep;
}

RobustnessReport white_noise_robustness(const MeasurementAssemblage& m, double bias) {
    if (std::abs(bias) > 1.0)
        throw std::invalid_argument("white_noise_robustness: |bias| must be <= 1");
    if (bias != 0.0)
        for (int x = 0; x < m.settings(); ++x)
            if (m.outcomes(x) != 2)
                throw std::invalid_argument(
                    "white_noise_robustness: biased noise requires binary outcomes");

    auto mixed = [&](double lambda) {
        MeasurementAssemblage out;
        out.dim = m.dim;
        for (int x = 0; x < m.settings(); ++x) {
            std::vector<HermitianOperator> row;
            const int o = m.outcomes(x);
            for (int a = 0; a < o; ++a) {
                const double sign = (a == 0) ? 1.0 : -1.0;  // outcome labels +/-1
                ComplexMatrix e = (1.0 - lambda) * m.elements[x][a].mat();
                e += (lambda * (1.0 + sign * bias) / o) * ComplexMatrix::identity(m.dim);
                row.push_back(HermitianOperator(e, 1e-9));
            }
            out.elements.push_back(std::move(row));
        }
        return out;
    };

    RobustnessReport rep;
    rep.kind = bias == 0.0 ? RobustnessKind::white : RobustnessKind::biased_white;
    rep.bias = bias;
    if (jm_feasible(m).jm) {
        rep.value = 0.0;
        return rep;
    }
    double lo = 0.0, hi = 1.0;  // mixture at 1 is trivial, hence JM
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (jm_feasible(mixed(mid)).jm ? hi : lo) = mid;
    }
    rep.value = hi;
    rep.margin = hi - lo;
    return rep;
}

RobustnessReport incompatibility_weight(const MeasurementAssemblage& m) {
    const DeterministicStrategySet strategies =
        DeterministicStrategySet::enumerate(outcome_counts(m));
    const int d = m.dim;
    const int nl = strategies.count();

    // maximize (1/d) sum_l tr[G_l]  s.t.  M_{a|x} - sum_l p(a|x,l) G_l >= 0,
    // G_l >= 0, traceless part of sum_l G_l = 0.  IW = 1 - optimum.
    SdpProblem p;
    for (int l = 0; l < nl; ++l) {
        p.block_dims.push_back(d);
        p.objective.push_back((-1.0 / d) * ComplexMatrix::identity(d));
    }
    const std::vector<ComplexMatrix> basis = hermitian_basis(d);
    int slack = nl;
    for (int x = 0; x < m.settings(); ++x)
        for (int a = 0; a < m.outcomes(x); ++a) {
            p.block_dims.push_back(d);
            p.objective.push_back(ComplexMatrix::zero(d, d));
            for (const ComplexMatrix& h : basis) {
                SdpProblem::Constraint c;
                for (int l = 0; l < nl; ++l)
                    if (strategies.response(a, x, l) > 0.0) c.terms.push_back({l, h});
                c.terms.push_back({slack, h});
                c.rhs = hs_inner(h, m.elements[x][a].mat());
                p.constraints.push_back(std::move(c));
            }
            ++slack;
        }
    for (const ComplexMatrix& h : hermitian_basis(d, /*traceless_only=*/true)) {
        SdpProblem::Constraint c;
        for (int l = 0; l < nl; ++l) c.terms.push_back({l, h});
        c.rhs = 0.0;
        p.constraints.push_back(std::move(c));
    }

    const SdpSolution sol = solve(p);
    require_optimal(sol, "incompatibility_weight");
    const double mu = std::min(std::max(-sol.primal_value, 0.0), 1.0);  // JM weight

    RobustnessReport rep;
    rep.kind = RobustnessKind::weight;
    rep.value = 1.0 - mu;

    // Decomposition M = mu O + (1 - mu) N; reconstruct and self-check.
    double residual = 0.0;
    if (mu > 1e-9) {
        JointObservable parent;
        for (int l = 0; l < nl; ++l)
            parent.effects.push_back(
                HermitianOperator((1.0 / mu) * sol.primal_blocks[l], 1e-7));
        parent.response = dense_deterministic_response(strategies);
        rep.model = std::move(parent);
    }
    if (rep.value > 1e-9) {
        MeasurementAssemblage rest;
        rest.dim = d;
        for (int x = 0; x < m.settings(); ++x) {
            std::vector<HermitianOperator> row;
            for (int a = 0; a < m.outcomes(x); ++a) {
                ComplexMatrix n = (1.0 / rep.value) *
                                  (m.elements[x][a].mat() -
                                   mixed_parent_effect(strategies, sol.primal_blocks, a, x));
                row.push_back(HermitianOperator(hermitian_part(n), 1e-6));
            }
            rest.elements.push_back(std::move(row));
        }
        rep.noise = std::move(rest);
    }
    for (int x = 0; x < m.settings(); ++x)
        for (int a = 0; a < m.outcomes(x); ++a) {
            ComplexMatrix rec = mixed_parent_effect(strategies, sol.primal_blocks, a, x);
            if (rep.noise) rec += rep.value * rep.noise->elements[x][a].mat();
            residual = std::max(residual, max_abs(rec - m.elements[x][a].mat()));
        }
    if (residual > 1e-7)
        throw SolverError("incompatibility_weight: decomposition does not reconstruct input");
    rep.margin = residual;
    return rep;
}

MeasurementAssemblage apply_heisenberg_channel(const MeasurementAssemblage& m,
                                               const std::vector<ComplexMatrix>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("apply_heisenberg_channel: empty channel");
    const int d = m.dim;
    ComplexMatrix unital = ComplexMatrix::zero(d, d);
    for (const ComplexMatrix& k : kraus) {
        if (k.rows() != d || k.cols() != d)
            throw std::invalid_argument("apply_heisenberg_channel: Kraus dimension mismatch");
        unital += dagger(k) * k;
    }
    if (max_abs(unital - ComplexMatrix::identity(d)) > 1e-9)
        throw std::invalid_argument(
            "apply_heisenberg_channel: channel is not unital (sum K^dag K != 1)");

    MeasurementAssemblage out;
    out.dim = d;
    for (int x = 0; x < m.settings(); ++x) {
        std::vector<HermitianOperator> row;
        for (int a = 0; a < m.outcomes(x); ++a) {
            ComplexMatrix e = ComplexMatrix::zero(d, d);
            for (const ComplexMatrix& k : kraus)
                e += dagger(k) * m.elements[x][a].mat() * k;
            row.push_back(HermitianOperator(hermitian_part(e), 1e-9));
        }
        out.elements.push_back(std::move(row));
    }
    return out;
}

std::pair<double, double> channel_monotonicity_check(const MeasurementAssemblage& m,
                                                     const std::vector<ComplexMatrix>& kraus) {
    const double before = incompatibility_robustness(m).value;
    const double after = incompatibility_robustness(apply_heisenberg_channel(m, kraus)).value;
    return {before, after};
}

std::pair<double, double> half_bound_check(const MeasurementAssemblage& m) {
    if (m.dim != 2) throw std::invalid_argument("half_bound_check: qubit assemblages only");
    for (int x = 0; x < m.settings(); ++x) {
        if (m.outcomes(x) != 2)
            throw std::invalid_argument("half_bound_check: binary outcomes required");
        for (int a = 0; a < 2; ++a)
            if (std::abs(trace(m.elements[x][a].mat()).real() - 1.0) > 1e-9)
                throw std::invalid_argument("half_bound_check: effects must be unbiased");
    }
    const double t = incompatibility_robustness(m).value;
    const double lambda_g = t / (1.0 + t);
    const double lambda_w = white_noise_robustness(m).value;
    return {lambda_g, lambda_w};
}

std::vector<ComplexMatrix> random_kraus_channel(int dim, int n_kraus, std::mt19937_64& rng) {
    if (dim < 1 || n_kraus < 1)
        throw std::invalid_argument("random_kraus_channel: bad dimensions");
    // Columns of a Haar unitary on dim * n_kraus form an isometry; split its
    // first dim columns into n_kraus stacked blocks.
    const ComplexMatrix u = random_unitary(dim * n_kraus, rng);
    std::vector<ComplexMatrix> kraus;
    for (int b = 0; b < n_kraus; ++b) {
        ComplexMatrix k(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) k(r, c) = u(b * dim + r, c);
        kraus.push_back(std::move(k));
    }
    return kraus;
}

std::vector<ComplexMatrix> depolarizing_kraus(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing_kraus: p outside [0,1]");
    std::vector<ComplexMatrix> kraus;
    kraus.push_back(std::sqrt(1.0 - 0.75 * p) * ComplexMatrix::identity(2));
    const ComplexMatrix paulis[3] = {kPauliX, kPauliY, kPauliZ};
    for (const ComplexMatrix& s : paulis) kraus.push_back(std::sqrt(0.25 * p) * s);
    return kraus;
}

}  // namespace steerjm
