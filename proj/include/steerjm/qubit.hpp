#pragma once

#include <array>
#include <vector>

#include "steerjm/assemblage.hpp"

namespace steerjm {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& a);

extern const ComplexMatrix kPauliX;
extern const ComplexMatrix kPauliY;
extern const ComplexMatrix kPauliZ;

/// Binary qubit observable in bias/Bloch form: B_+ = ((1+alpha) 1 + r.sigma)/2,
/// B_- = 1 - B_+.  Valid as an effect pair iff ||r|| <= 1 - |alpha|.
struct BlochObservable {
    double alpha = 0.0;
    Vec3 r{0.0, 0.0, 0.0};

    bool valid(double tol = 1e-10) const;
    HermitianOperator effect_plus() const;
    HermitianOperator effect_minus() const;
};

/// Qubit operator in t*1 + s.sigma form.
struct BlochEnsembleElement {
    double t = 0.0;
    Vec3 s{0.0, 0.0, 0.0};
};

BlochEnsembleElement bloch_of(const HermitianOperator& op);
HermitianOperator operator_of(const BlochEnsembleElement& e);

/// Closed-form steering-equivalent observables for a full-rank qubit
/// assemblage with binary outcomes; one BlochObservable (the + effect) per
/// setting.  Throws for rank-deficient reduced states ("use general path").
std::vector<BlochObservable> se_observables_closed_form(const StateAssemblage& a);

/// ||r1 + r2|| + ||r1 - r2||; a value > 2 certifies incompatibility.
double busch_criterion(const BlochObservable& o1, const BlochObservable& o2);

struct PairVerdict {
    bool jm = false;
    double margin = 0.0;  // RHS - LHS of the exact pair criterion
};

/// Exact joint-measurability test for two binary qubit observables.
PairVerdict yu_oh_criterion(const BlochObservable& o1, const BlochObservable& o2);

struct FtResult {
    Vec3 point{0.0, 0.0, 0.0};
    double total = 0.0;  // minimized sum of distances
    int iterations = 0;
};

/// Weiszfeld fixed-point iteration for the Fermat-Torricelli point.
FtResult weiszfeld_ft_point(const std::vector<Vec3>& points, double tol = 1e-12,
                            int max_iter = 100000);

/// Sum of distances from the four derived vectors to their FT point;
/// a value > 4 certifies incompatibility of the triple.
double triple_criterion(const BlochObservable& o1, const BlochObservable& o2,
                        const BlochObservable& o3);

/// Qubit measurement assemblage from + effects of binary observables.
MeasurementAssemblage assemblage_from_bloch(const std::vector<BlochObservable>& obs);

}  // namespace steerjm
