#include "steerjm/assemblage.hpp"

#include <cmath>

#include "steerjm/eig.hpp"

namespace steerjm {

HermitianOperator StateAssemblage::reduced_state(int x) const {
    ComplexMatrix s = ComplexMatrix::zero(dim_b, dim_b);
    for (const HermitianOperator& e : elements.at(x)) s += e.mat();
    return HermitianOperator(s, 1e-9);
}

StateAssemblage assemblage_from_state(const BipartitePureState& state,
                                      const MeasurementAssemblage& alice) {
    if (alice.dim != state.dim_a)
        throw std::invalid_argument("assemblage_from_state: Alice dimension mismatch (" +
                                    std::to_string(alice.dim) + " vs " +
                                    std::to_string(state.dim_a) + ")");
    const int da = state.dim_a;
    const int db = state.dim_b;
    const int n = static_cast<int>(state.schmidt_coefficients.size());

    // Psi[p][j] = sum_i lambda_i U_A[p,i] U_B[j,i]  (A-major |psi> reshaped).
    ComplexMatrix psi(da, db);
    for (int p = 0; p < da; ++p)
        for (int j = 0; j < db; ++j) {
            cplx v = 0.0;
            for (int i = 0; i < n; ++i)
                v += state.schmidt_coefficients[i] * state.basis_a(p, i) * state.basis_b(j, i);
            psi(p, j) = v;
        }

    StateAssemblage out;
    out.dim_b = db;
    out.elements.resize(alice.settings());
    for (int x = 0; x < alice.settings(); ++x) {
        for (int a = 0; a < alice.outcomes(x); ++a) {
            const ComplexMatrix apsi = alice.elements[x][a].mat() * psi;
            ComplexMatrix rho(db, db);
            for (int j = 0; j < db; ++j)
                for (int jp = 0; jp < db; ++jp) {
                    cplx v = 0.0;
                    for (int p = 0; p < da; ++p) v += apsi(p, j) * std::conj(psi(p, jp));
                    rho(j, jp) = v;
                }
            out.elements[x].push_back(HermitianOperator(hermitian_part(rho), 1e-9));
        }
    }
    return out;
}

std::vector<Violation> validate(const StateAssemblage& a) {
    std::vector<Violation> out;
    if (a.settings() == 0) {
        out.push_back({"assemblage has no settings", -1, -1, 0.0});
        return out;
    }
    for (int x = 0; x < a.settings(); ++x)
        for (int aa = 0; aa < a.outcomes(x); ++aa) {
            const EigenDecomposition e = eig_hermitian(a.elements[x][aa]);
            const double lmin = e.eigenvalues.back();
            if (lmin < -1e-10)
                out.push_back({"state assemblage element not PSD", x, aa, -lmin});
        }
    const ComplexMatrix rho_b = a.reduced_state(0).mat();
    for (int x = 1; x < a.settings(); ++x) {
        const double res = frobenius_norm(a.reduced_state(x).mat() - rho_b);
        if (res > 1e-9) out.push_back({"no-signaling violation vs setting 0", x, -1, res});
    }
    const double tr_res = std::abs(trace(rho_b).real() - 1.0);
    if (tr_res > 1e-9) out.push_back({"reduced state trace differs from 1", -1, -1, tr_res});
    return out;
}

std::vector<Violation> validate(const MeasurementAssemblage& m) {
    std::vector<Violation> out;
    const ComplexMatrix id = ComplexMatrix::identity(m.dim);
    for (int x = 0; x < m.settings(); ++x) {
        ComplexMatrix sum = ComplexMatrix::zero(m.dim, m.dim);
        for (int a = 0; a < m.outcomes(x); ++a) {
            const EigenDecomposition e = eig_hermitian(m.elements[x][a]);
            const double lmin = e.eigenvalues.back();
            if (lmin < -1e-10) out.push_back({"POVM effect not PSD", x, a, -lmin});
            sum += m.elements[x][a].mat();
        }
        const double res = frobenius_norm(sum - id);
        if (res > 1e-9) out.push_back({"POVM does not sum to identity", x, -1, res});
    }
    return out;
}

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (cplx& z : m.data()) z = cplx(g(rng), g(rng));
    // Modified Gram-Schmidt on columns, with one re-orthogonalization pass.
    for (int j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < j; ++k) {
                cplx dot = 0.0;
                for (int i = 0; i < n; ++i) dot += std::conj(m(i, k)) * m(i, j);
                for (int i = 0; i < n; ++i) m(i, j) -= dot * m(i, k);
            }
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += std::norm(m(i, j));
        nrm = std::sqrt(nrm);
        for (int i = 0; i < n; ++i) m(i, j) = m(i, j) * (1.0 / nrm);
    }
    return m;
}

HermitianOperator random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (cplx& z : m.data()) z = cplx(g(rng), g(rng));
    return HermitianOperator(hermitian_part(m));
}

std::vector<HermitianOperator> random_povm(int dim, int outcomes, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<ComplexMatrix> w;
    ComplexMatrix sum = ComplexMatrix::zero(dim, dim);
    for (int a = 0; a < outcomes; ++a) {
        ComplexMatrix b(dim, dim);
        for (cplx& z : b.data()) z = cplx(g(rng), g(rng));
        ComplexMatrix p = b * dagger(b);
        w.push_back(p);
        sum += p;
    }
    const RestrictedInvSqrt s = restricted_inv_sqrt(HermitianOperator(sum), 1e-12);
    if (s.rank != dim) throw std::runtime_error("random_povm: degenerate sample");
    // Full rank, so proj is unitary: conjugate by sum^{-1/2}.
    const ComplexMatrix inv_sqrt = dagger(s.proj) * s.inv_sqrt.mat() * s.proj;
    std::vector<HermitianOperator> out;
    for (int a = 0; a < outcomes; ++a)
        out.push_back(HermitianOperator(hermitian_part(inv_sqrt * w[a] * inv_sqrt), 1e-9));
    return out;
}

MeasurementAssemblage random_measurement_assemblage(int dim, int settings, int outcomes,
                                                    std::mt19937_64& rng) {
    MeasurementAssemblage m;
    m.dim = dim;
    for (int x = 0; x < settings; ++x) m.elements.push_back(random_povm(dim, outcomes, rng));
    return m;
}

BipartitePureState random_pure_state(int dim_a, int dim_b, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const int n = std::min(dim_a, dim_b);
    BipartitePureState st;
    st.dim_a = dim_a;
    st.dim_b = dim_b;
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) {
        const double c = std::abs(g(rng)) + 1e-3;
        st.schmidt_coefficients.push_back(c);
        nrm += c * c;
    }
    nrm = std::sqrt(nrm);
    for (double& c : st.schmidt_coefficients) c /= nrm;
    st.basis_a = random_unitary(dim_a, rng);
    st.basis_b = random_unitary(dim_b, rng);
    return st;
}

StateAssemblage random_state_assemblage(int dim_b, int settings, int outcomes,
                                        std::mt19937_64& rng) {
    const BipartitePureState st = random_pure_state(dim_b, dim_b, rng);
    const MeasurementAssemblage alice = random_measurement_assemblage(dim_b, settings, outcomes, rng);
    StateAssemblage a = assemblage_from_state(st, alice);
    // Mix towards the reduced state; preserves no-signaling and PSD.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double w = u(rng);
    const ComplexMatrix rho_b = a.reduced_state(0).mat();
    for (int x = 0; x < a.settings(); ++x)
        for (int aa = 0; aa < a.outcomes(x); ++aa) {
            const double p = trace(a.elements[x][aa].mat()).real();
            a.elements[x][aa] = HermitianOperator(
                (1.0 - w) * a.elements[x][aa].mat() + (w * p) * rho_b, 1e-9);
        }
    return a;
}

}  // namespace steerjm
