#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "steerjm/eig.hpp"
#include "steerjm/feasibility.hpp"
#include "steerjm/qubit.hpp"
#include "steerjm/sdp.hpp"

using namespace steerjm;

namespace {

MeasurementAssemblage noisy_orthogonal_pair(double eta) {
    BlochObservable o1, o2;
    o1.r = {eta, 0.0, 0.0};
    o2.r = {0.0, 0.0, eta};
    return assemblage_from_bloch({o1, o2});
}

}  // namespace

TEST_CASE("scalar linear program") {
    SdpProblem p;
    p.block_dims = {1};
    p.objective = {ComplexMatrix::identity(1)};
    SdpProblem::Constraint c;
    c.terms.push_back({0, ComplexMatrix::identity(1)});
    c.rhs = 1.0;
    p.constraints.push_back(std::move(c));

    const SdpSolution sol = solve(p);
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(sol.duality_gap) <= 1e-6);
}

TEST_CASE("minimize trace with one pinned entry") {
    // min tr X s.t. X_11 = 1, X >= 0; optimum X = e_11 e_11^T, value 1.
    SdpProblem p;
    p.block_dims = {2};
    p.objective = {ComplexMatrix::identity(2)};
    ComplexMatrix a(2, 2);
    a(0, 0) = 1.0;
    SdpProblem::Constraint c;
    c.terms.push_back({0, a});
    c.rhs = 1.0;
    p.constraints.push_back(std::move(c));

    const SdpSolution sol = solve(p);
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::abs(sol.primal_blocks[0](0, 0).real() - 1.0) <= 1e-6);
    CHECK(std::abs(sol.primal_blocks[0](1, 1)) <= 1e-6);
}

TEST_CASE("infeasible trace constraint yields an improving ray") {
    SdpProblem p;
    p.block_dims = {2};
    p.objective = {ComplexMatrix::identity(2)};
    SdpProblem::Constraint c;
    c.terms.push_back({0, ComplexMatrix::identity(2)});
    c.rhs = -1.0;  // tr X = -1 impossible for X >= 0
    p.constraints.push_back(std::move(c));

    const SdpSolution sol = solve(p);
    CHECK(sol.status == SdpStatus::infeasible);
    CHECK_FALSE(sol.improving_ray.empty());
    CHECK(sol.ray_violation > 0.0);
}

TEST_CASE("a single measurement is always compatible with itself") {
    std::mt19937_64 rng(301);
    MeasurementAssemblage m;
    m.dim = 3;
    m.elements.push_back(random_povm(3, 3, rng));
    const JmResult res = jm_feasible(m);
    CHECK(res.jm);
    CHECK(res.robustness <= kFeasibilityThreshold);
    REQUIRE(res.model.has_value());
}

TEST_CASE("noisy orthogonal pair across the known threshold") {
    const JmResult below = jm_feasible(noisy_orthogonal_pair(0.70));
    CHECK(below.jm);
    const JmResult above = jm_feasible(noisy_orthogonal_pair(0.72));
    CHECK_FALSE(above.jm);
    CHECK(above.robustness > 1e-4);
}

TEST_CASE("sharp orthogonal pair has a known robustness") {
    const JmResult res = jm_feasible(noisy_orthogonal_pair(1.0));
    CHECK_FALSE(res.jm);
    CHECK(res.robustness == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-6));
    CHECK(std::abs(res.sdp.duality_gap) <= 1e-6);
}

TEST_CASE("robustness is invariant under outcome relabeling") {
    MeasurementAssemblage m = noisy_orthogonal_pair(0.9);
    const double base = jm_feasible(m).robustness;
    std::swap(m.elements[1][0], m.elements[1][1]);
    CHECK(jm_feasible(m).robustness == doctest::Approx(base).epsilon(1e-6));
}

TEST_CASE("redundant randomized responses do not change the optimum") {
    const MeasurementAssemblage m = noisy_orthogonal_pair(0.9);
    std::vector<int> outcomes = {2, 2};
    const DeterministicStrategySet det = DeterministicStrategySet::enumerate(outcomes);
    const SdpSolution plain = solve(build_jm_robustness_problem(m, det));

    // Uniformly random response column: a convex mixture of the deterministic
    // ones, so it cannot improve the optimum.
    std::vector<std::vector<std::vector<double>>> extra = {
        {{0.5, 0.5}, {0.5, 0.5}}};
    const SdpSolution ext = solve(build_jm_robustness_problem(m, det, extra));
    REQUIRE(plain.status == SdpStatus::optimal);
    REQUIRE(ext.status == SdpStatus::optimal);
    CHECK(ext.primal_value == doctest::Approx(plain.primal_value).epsilon(1e-6));
}

TEST_CASE("the robustness program admits a strictly feasible point") {
    // With G_lambda = 1 for every strategy, the slack for each (x, a) is
    // (#strategies / outcomes) 1 - M_{a|x}, which is positive definite for
    // two settings with two outcomes since each effect is bounded by 1.
    std::mt19937_64 rng(307);
    const MeasurementAssemblage m = random_measurement_assemblage(2, 2, 2, rng);
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            const HermitianOperator slack(
                hermitian_part(2.0 * ComplexMatrix::identity(2) - m.elements[x][a].mat()));
            const EigenDecomposition e = eig_hermitian(slack);
            CHECK(e.eigenvalues.back() > 0.5);
        }
}

TEST_CASE("incompatibility certificates are valid witnesses") {
    const MeasurementAssemblage m = noisy_orthogonal_pair(0.85);
    const JmResult res = jm_feasible(m);
    REQUIRE_FALSE(res.jm);
    REQUIRE(res.certificate.has_value());
    const DualCertificate& cert = *res.certificate;
    CHECK(cert.violation > 1e-6);
    double value = 0.0;
    for (int x = 0; x < m.settings(); ++x)
        for (int a = 0; a < m.outcomes(x); ++a) {
            CHECK(psd_check(cert.witness[x][a], 1e-6));
            value += hs_inner(cert.witness[x][a].mat(), m.elements[x][a].mat());
        }
    CHECK(value == doctest::Approx(1.0 + cert.violation).epsilon(1e-6));
}

TEST_CASE("compatibility models reconstruct the assemblage") {
    const MeasurementAssemblage m = noisy_orthogonal_pair(0.65);
    const JmResult res = jm_feasible(m);
    REQUIRE(res.jm);
    REQUIRE(res.model.has_value());
    CHECK(reconstruction_residual(m, *res.model) <= 1e-6);
    ComplexMatrix sum = ComplexMatrix::zero(2, 2);
    for (const HermitianOperator& g : res.model->effects) {
        CHECK(psd_check(g, 1e-7));
        sum += g.mat();
    }
    CHECK(frobenius_norm(sum - ComplexMatrix::identity(2)) <= 1e-7);
}

TEST_CASE("steering detection matches the compatibility of the mapped observables") {
    for (double eta : {0.70, 0.72}) {
        // rho_{a|x} = M_{a|x}/2 realizes the noisy pair as steering data on
        // the maximally mixed reduced state.
        const MeasurementAssemblage m = noisy_orthogonal_pair(eta);
        StateAssemblage a;
        a.dim_b = 2;
        a.elements.resize(2);
        for (int x = 0; x < 2; ++x)
            for (int aa = 0; aa < 2; ++aa)
                a.elements[x].push_back(
                    HermitianOperator(0.5 * m.elements[x][aa].mat()));
        const LhsResult lr = lhs_feasible(a);
        const JmResult jr = jm_feasible(m);
        CHECK(lr.unsteerable == jr.jm);
        CHECK(lr.robustness == doctest::Approx(jr.robustness).epsilon(1e-6));
        if (!lr.unsteerable) {
            REQUIRE(lr.certificate.has_value());
            CHECK(lr.certificate->violation > 0.0);
        } else {
            REQUIRE(lr.model.has_value());
            CHECK(reconstruction_residual(a, *lr.model) <= 1e-6);
        }
    }
}

TEST_CASE("product-like steering data is unsteerable") {
    std::mt19937_64 rng(311);
    BipartitePureState st;
    st.dim_a = 2;
    st.dim_b = 2;
    st.schmidt_coefficients = {1.0};
    st.basis_a = random_unitary(2, rng);
    st.basis_b = random_unitary(2, rng);
    const StateAssemblage a =
        assemblage_from_state(st, random_measurement_assemblage(2, 2, 2, rng));
    const LhsResult res = lhs_feasible(a);
    CHECK(res.unsteerable);
    REQUIRE(res.model.has_value());
    CHECK(reconstruction_residual(a, *res.model) <= 1e-6);
}

TEST_CASE("duality gaps stay small across random instances") {
    std::mt19937_64 rng(313);
    for (int rep = 0; rep < 8; ++rep) {
        const MeasurementAssemblage m =
            random_measurement_assemblage(2 + rep % 2, 2, 2, rng);
        const JmResult res = jm_feasible(m);
        CHECK(std::abs(res.sdp.duality_gap) <= 1e-6);
        CHECK(res.sdp.primal_residual <= 1e-6);
        CHECK(res.sdp.dual_residual <= 1e-6);
    }
}
