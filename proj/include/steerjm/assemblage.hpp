#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "steerjm/matrix.hpp"

namespace steerjm {

/// Indexed family of subnormalized states rho_{a|x}.  Settings may have
/// different outcome counts.  elements[x][a] lives on a dim_b-dimensional
/// space; the no-signaling invariant ties the per-setting sums together.
struct StateAssemblage {
    int dim_b = 0;
    std::vector<std::vector<HermitianOperator>> elements;  // [setting][outcome]

    int settings() const { return static_cast<int>(elements.size()); }
    int outcomes(int x) const { return static_cast<int>(elements[x].size()); }

    /// Sum over outcomes of setting x (the reduced state, up to numerics).
    HermitianOperator reduced_state(int x = 0) const;
};

/// Indexed family of POVMs M_{a|x} on one space.
struct MeasurementAssemblage {
    int dim = 0;
    std::vector<std::vector<HermitianOperator>> elements;  // [setting][outcome]

    int settings() const { return static_cast<int>(elements.size()); }
    int outcomes(int x) const { return static_cast<int>(elements[x].size()); }
};

/// Pure bipartite state in Schmidt form: |psi> = sum_i lambda_i U_A|i> (x) U_B|i>.
/// Composite index ordering is A-major: idx = i_A * dim_b + i_B.
struct BipartitePureState {
    std::vector<double> schmidt_coefficients;
    int dim_a = 0;
    int dim_b = 0;
    ComplexMatrix basis_a;  // unitary, columns are Alice's Schmidt basis
    ComplexMatrix basis_b;  // unitary, columns are Bob's Schmidt basis
};

struct Violation {
    std::string what;
    int setting = -1;
    int outcome = -1;
    double residual = 0.0;
};

/// rho_{a|x} = tr_A[(A_{a|x} (x) 1) |psi><psi|].
StateAssemblage assemblage_from_state(const BipartitePureState& state,
                                      const MeasurementAssemblage& alice);

std::vector<Violation> validate(const StateAssemblage& a);
std::vector<Violation> validate(const MeasurementAssemblage& m);

// --- seeded random generators (test and scan support) ---

ComplexMatrix random_unitary(int n, std::mt19937_64& rng);
HermitianOperator random_hermitian(int n, std::mt19937_64& rng);

/// Random POVM with o outcomes: normalized Wishart-like positive operators.
std::vector<HermitianOperator> random_povm(int dim, int outcomes, std::mt19937_64& rng);

MeasurementAssemblage random_measurement_assemblage(int dim, int settings, int outcomes,
                                                    std::mt19937_64& rng);

BipartitePureState random_pure_state(int dim_a, int dim_b, std::mt19937_64& rng);

/// Random valid assemblage: Haar-ish pure state + random POVMs for Alice,
/// then depolarized towards the reduced state by a random weight so the
/// sample covers both steerable and unsteerable instances.
StateAssemblage random_state_assemblage(int dim_b, int settings, int outcomes,
                                        std::mt19937_64& rng);

}  // namespace steerjm
