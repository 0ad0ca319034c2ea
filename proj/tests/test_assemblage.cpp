#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "steerjm/assemblage.hpp"
#include "steerjm/eig.hpp"
#include "steerjm/json_io.hpp"
#include "steerjm/qubit.hpp"

using namespace steerjm;

namespace {

MeasurementAssemblage sigma_z_projectors() {
    MeasurementAssemblage m;
    m.dim = 2;
    m.elements.push_back({HermitianOperator(0.5 * (ComplexMatrix::identity(2) + kPauliZ)),
                          HermitianOperator(0.5 * (ComplexMatrix::identity(2) - kPauliZ))});
    return m;
}

BipartitePureState maximally_entangled_qubits() {
    BipartitePureState st;
    st.dim_a = 2;
    st.dim_b = 2;
    st.schmidt_coefficients = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    st.basis_a = ComplexMatrix::identity(2);
    st.basis_b = ComplexMatrix::identity(2);
    return st;
}

}  // namespace

TEST_CASE("assemblage from maximally entangled state and sigma_z projectors") {
    const StateAssemblage a = assemblage_from_state(maximally_entangled_qubits(),
                                                    sigma_z_projectors());
    REQUIRE(a.settings() == 1);
    REQUIRE(a.outcomes(0) == 2);
    CHECK(std::abs(a.elements[0][0](0, 0) - cplx(0.5, 0.0)) <= 1e-12);
    CHECK(std::abs(a.elements[0][0](1, 1)) <= 1e-12);
    CHECK(std::abs(a.elements[0][1](0, 0)) <= 1e-12);
    CHECK(std::abs(a.elements[0][1](1, 1) - cplx(0.5, 0.0)) <= 1e-12);
    CHECK(validate(a).empty());
}

TEST_CASE("assemblage from a product state has one-dimensional range") {
    std::mt19937_64 rng(3);
    BipartitePureState st;
    st.dim_a = 2;
    st.dim_b = 2;
    st.schmidt_coefficients = {1.0};
    st.basis_a = random_unitary(2, rng);
    st.basis_b = random_unitary(2, rng);
    const MeasurementAssemblage alice = random_measurement_assemblage(2, 2, 2, rng);
    const StateAssemblage a = assemblage_from_state(st, alice);
    CHECK(validate(a).empty());
    // Each element is P(a|x) |psi_B><psi_B|: rank one, common eigenvector.
    for (int x = 0; x < a.settings(); ++x)
        for (int aa = 0; aa < a.outcomes(x); ++aa) {
            const EigenDecomposition e = eig_hermitian(a.elements[x][aa]);
            CHECK(std::abs(e.eigenvalues[1]) <= 1e-10);
        }
    const EigenDecomposition e = eig_hermitian(a.reduced_state());
    CHECK(std::abs(e.eigenvalues[1]) <= 1e-10);
}

TEST_CASE("assemblage with unequal Schmidt weights matches direct arithmetic") {
    BipartitePureState st;
    st.dim_a = 2;
    st.dim_b = 2;
    st.schmidt_coefficients = {std::sqrt(0.9), std::sqrt(0.1)};
    st.basis_a = ComplexMatrix::identity(2);
    st.basis_b = ComplexMatrix::identity(2);
    MeasurementAssemblage alice;
    alice.dim = 2;
    alice.elements.push_back({HermitianOperator(0.5 * (ComplexMatrix::identity(2) + kPauliX)),
                              HermitianOperator(0.5 * (ComplexMatrix::identity(2) - kPauliX))});
    const StateAssemblage a = assemblage_from_state(st, alice);

    // rho_A^{1/2} (1 +/- sigma_x)^t rho_A^{1/2} / 2 with rho_A = diag(0.9, 0.1).
    CHECK(std::abs(a.elements[0][0](0, 0) - cplx(0.45, 0.0)) <= 1e-12);
    CHECK(std::abs(a.elements[0][0](1, 1) - cplx(0.05, 0.0)) <= 1e-12);
    CHECK(std::abs(a.elements[0][0](0, 1) - cplx(0.15, 0.0)) <= 1e-12);
    const ComplexMatrix rb = a.reduced_state().mat();
    CHECK(std::abs(rb(0, 0) - cplx(0.9, 0.0)) <= 1e-12);
    CHECK(std::abs(rb(1, 1) - cplx(0.1, 0.0)) <= 1e-12);
    CHECK(std::abs(rb(0, 1)) <= 1e-12);
}

TEST_CASE("dimension mismatch is rejected") {
    std::mt19937_64 rng(5);
    const MeasurementAssemblage alice = random_measurement_assemblage(3, 1, 2, rng);
    CHECK_THROWS_AS(assemblage_from_state(maximally_entangled_qubits(), alice),
                    std::invalid_argument);
}

TEST_CASE("validate reports a constructed no-signaling defect") {
    std::mt19937_64 rng(9);
    StateAssemblage a = random_state_assemblage(2, 2, 2, rng);
    REQUIRE(validate(a).empty());
    a.elements[0][0] = 1.1 * a.elements[0][0];
    const std::vector<Violation> v = validate(a);
    CHECK_FALSE(v.empty());
    bool found = false;
    for (const Violation& viol : v)
        if (viol.what.find("no-signaling") != std::string::npos ||
            viol.what.find("trace") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("validate reports forced POVM negativity") {
    MeasurementAssemblage m;
    m.dim = 2;
    m.elements.push_back({HermitianOperator(1.5 * ComplexMatrix::identity(2)),
                          HermitianOperator(-0.5 * ComplexMatrix::identity(2))});
    const std::vector<Violation> v = validate(m);
    bool psd_on_second = false;
    for (const Violation& viol : v)
        if (viol.what.find("PSD") != std::string::npos && viol.setting == 0 && viol.outcome == 1)
            psd_on_second = true;
    CHECK(psd_on_second);
}

TEST_CASE("random generators produce valid objects") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 15; ++rep) {
        const int d = 2 + rep % 3;
        const ComplexMatrix u = random_unitary(d, rng);
        CHECK(frobenius_norm(dagger(u) * u - ComplexMatrix::identity(d)) <= 1e-12);

        const std::vector<HermitianOperator> povm = random_povm(d, 2 + rep % 2, rng);
        ComplexMatrix sum = ComplexMatrix::zero(d, d);
        for (const HermitianOperator& e : povm) {
            CHECK(psd_check(e, 1e-10));
            sum += e.mat();
        }
        CHECK(frobenius_norm(sum - ComplexMatrix::identity(d)) <= 1e-9);

        const StateAssemblage a = random_state_assemblage(d, 2, 2, rng);
        CHECK(validate(a).empty());
        for (int x = 0; x < a.settings(); ++x) {
            double total = 0.0;
            for (int aa = 0; aa < a.outcomes(x); ++aa) {
                const double p = trace(a.elements[x][aa].mat()).real();
                CHECK(p >= -1e-12);
                CHECK(p <= 1.0 + 1e-12);
                total += p;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("JSON round trip is value-identical") {
    std::mt19937_64 rng(77);
    const StateAssemblage a = random_state_assemblage(3, 2, 2, rng);
    const StateAssemblage b = parse_state_assemblage(serialize(a));
    REQUIRE(b.dim_b == a.dim_b);
    REQUIRE(b.settings() == a.settings());
    for (int x = 0; x < a.settings(); ++x)
        for (int aa = 0; aa < a.outcomes(x); ++aa)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(b.elements[x][aa](i, j) == a.elements[x][aa](i, j));

    const MeasurementAssemblage m = random_measurement_assemblage(2, 2, 2, rng);
    const MeasurementAssemblage m2 = parse_measurement_assemblage(serialize(m));
    for (int x = 0; x < m.settings(); ++x)
        for (int aa = 0; aa < m.outcomes(x); ++aa)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(m2.elements[x][aa](i, j) == m.elements[x][aa](i, j));

    CHECK(json_assemblage_kind(serialize(a)) == "state");
    CHECK(json_assemblage_kind(serialize(m)) == "measurement");
}

TEST_CASE("malformed JSON raises ParseError") {
    CHECK_THROWS_AS(parse_state_assemblage("{not json"), ParseError);
    CHECK_THROWS_AS(parse_measurement_assemblage(R"({"dim": 2})"), ParseError);
}
