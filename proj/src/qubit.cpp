#include "steerjm/qubit.hpp"

#include <cmath>

namespace steerjm {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

namespace {
ComplexMatrix make_pauli(int k) {
    ComplexMatrix m(2, 2);
    if (k == 0) {
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
    } else if (k == 1) {
        m(0, 1) = cplx(0.0, -1.0);
        m(1, 0) = cplx(0.0, 1.0);
    } else {
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
    }
    return m;
}
}  // namespace

const ComplexMatrix kPauliX = make_pauli(0);
const ComplexMatrix kPauliY = make_pauli(1);
const ComplexMatrix kPauliZ = make_pauli(2);

bool BlochObservable::valid(double tol) const { return norm(r) <= 1.0 - std::abs(alpha) + tol; }

HermitianOperator BlochObservable::effect_plus() const {
    ComplexMatrix m = 0.5 * (1.0 + alpha) * ComplexMatrix::identity(2);
    m += 0.5 * r[0] * kPauliX;
    m += 0.5 * r[1] * kPauliY;
    m += 0.5 * r[2] * kPauliZ;
    return HermitianOperator(m);
}

HermitianOperator BlochObservable::effect_minus() const {
    return HermitianOperator(ComplexMatrix::identity(2) - effect_plus().mat());
}

BlochEnsembleElement bloch_of(const HermitianOperator& op) {
    if (op.dim() != 2) throw std::invalid_argument("bloch_of: operator is not 2x2");
    BlochEnsembleElement e;
    e.t = 0.5 * trace(op.mat()).real();
    e.s[0] = 0.5 * trace(op.mat() * kPauliX).real();
    e.s[1] = 0.5 * trace(op.mat() * kPauliY).real();
    e.s[2] = 0.5 * trace(op.mat() * kPauliZ).real();
    return e;
}

HermitianOperator operator_of(const BlochEnsembleElement& e) {
    ComplexMatrix m = e.t * ComplexMatrix::identity(2);
    m += e.s[0] * kPauliX;
    m += e.s[1] * kPauliY;
    m += e.s[2] * kPauliZ;
    return HermitianOperator(m);
}

std::vector<BlochObservable> se_observables_closed_form(const StateAssemblage& a) {
    if (a.dim_b != 2) throw std::invalid_argument("closed form requires a qubit assemblage");
    for (int x = 0; x < a.settings(); ++x)
        if (a.outcomes(x) != 2)
            throw std::invalid_argument("closed form requires binary outcomes");

    // Bloch vector of the reduced state in the t*1 + s.sigma convention,
    // consistent across settings by no-signaling.
    Vec3 s_b{0.0, 0.0, 0.0};
    for (int x = 0; x < a.settings(); ++x) {
        const Vec3 sx =
            bloch_of(a.elements[x][0]).s + bloch_of(a.elements[x][1]).s;
        if (x == 0)
            s_b = sx;
        else if (norm(sx - s_b) > 1e-9)
            throw std::invalid_argument("closed form: reduced-state Bloch vector differs "
                                        "across settings (no-signaling violation)");
    }
    const double s = norm(s_b);
    const double p_hi = 0.5 + s;
    const double p_lo = 0.5 - s;
    if (p_lo <= 1e-9) throw std::invalid_argument("rank-deficient reduced state: use general path");

    // rho_B^{1/2} = c0*1 + c.sigma with c along s_b; invert via the 2x2
    // determinant identity (c0*1 + c.sigma)(c0*1 - c.sigma) = (c0^2 - |c|^2)*1.
    const double c0 = 0.5 * (std::sqrt(p_hi) + std::sqrt(p_lo));
    const double cmag = 0.5 * (std::sqrt(p_hi) - std::sqrt(p_lo));
    const double gamma = c0 * c0 - cmag * cmag;
    const double u = c0 / gamma;
    const Vec3 v = (s > 0.0) ? (-cmag / (s * gamma)) * s_b : Vec3{0.0, 0.0, 0.0};

    std::vector<BlochObservable> out;
    for (int x = 0; x < a.settings(); ++x) {
        const BlochEnsembleElement e = bloch_of(a.elements[x][0]);
        // Conjugation (u*1 + v.sigma)(t*1 + s.sigma)(u*1 + v.sigma) in Bloch form.
        const double tp = (u * u + dot(v, v)) * e.t + 2.0 * u * dot(v, e.s);
        const Vec3 sp = (u * u - dot(v, v)) * e.s + (2.0 * u * e.t) * v + (2.0 * dot(v, e.s)) * v;
        BlochObservable b;
        b.alpha = 2.0 * tp - 1.0;
        b.r = 2.0 * sp;
        out.push_back(b);
    }
    return out;
}

double busch_criterion(const BlochObservable& o1, const BlochObservable& o2) {
    return norm(o1.r + o2.r) + norm(o1.r - o2.r);
}

PairVerdict yu_oh_criterion(const BlochObservable& o1, const BlochObservable& o2) {
    auto sharpness = [](const BlochObservable& o) {
        const double n2 = dot(o.r, o.r);
        const double ra = (1.0 + o.alpha) * (1.0 + o.alpha) - n2;
        const double rb = (1.0 - o.alpha) * (1.0 - o.alpha) - n2;
        if (ra < -1e-12 || rb < -1e-12)
            throw std::invalid_argument("yu_oh_criterion: invalid effect (negative radicand)");
        return 0.5 * (std::sqrt(std::max(ra, 0.0)) + std::sqrt(std::max(rb, 0.0)));
    };
    const double f1 = sharpness(o1);
    const double f2 = sharpness(o2);
    // Sharp effects give F = 0; clamp so the biased term keeps its limit
    // behavior (parallel Bloch vectors required for joint measurability).
    const double f1sq = std::max(f1 * f1, 1e-14);
    const double f2sq = std::max(f2 * f2, 1e-14);
    const double lead = 1.0 - f1 * f1 - f2 * f2;
    const double lhs =
        lead * (1.0 - o1.alpha * o1.alpha / f1sq - o2.alpha * o2.alpha / f2sq);
    const double rhs_root = dot(o1.r, o2.r) - o1.alpha * o2.alpha;
    const double rhs = rhs_root * rhs_root;
    PairVerdict v;
    v.margin = rhs - lhs;
    v.jm = (lhs <= rhs) || (lead <= 0.0);
    return v;
}

FtResult weiszfeld_ft_point(const std::vector<Vec3>& points, double tol, int max_iter) {
    if (points.empty()) throw std::invalid_argument("weiszfeld_ft_point: no points");
    const double eps = 1e-12;
    auto objective = [&](const Vec3& x) {
        double s = 0.0;
        for (const Vec3& p : points) s += norm(p - x);
        return s;
    };

    Vec3 x{0.0, 0.0, 0.0};
    for (const Vec3& p : points) x = x + (1.0 / points.size()) * p;
    double obj = objective(x);

    FtResult res;
    for (int it = 0; it < max_iter; ++it) {
        // Check vertex optimality if the iterate sits on a data point.
        int at = -1;
        for (size_t i = 0; i < points.size(); ++i)
            if (norm(points[i] - x) < eps) at = static_cast<int>(i);
        if (at >= 0) {
            Vec3 grad{0.0, 0.0, 0.0};
            for (size_t i = 0; i < points.size(); ++i) {
                if (static_cast<int>(i) == at) continue;
                const Vec3 d = points[i] - x;
                grad = grad + (1.0 / std::max(norm(d), eps)) * d;
            }
            if (norm(grad) <= 1.0 + tol) break;  // vertex is optimal
            x = x + eps * grad;                   // step off the vertex
        }
        Vec3 num{0.0, 0.0, 0.0};
        double den = 0.0;
        for (const Vec3& p : points) {
            const double w = 1.0 / std::max(norm(p - x), eps);
            num = num + w * p;
            den += w;
        }
        const Vec3 next = (1.0 / den) * num;
        const double next_obj = objective(next);
        const double moved = norm(next - x);
        x = next;
        res.iterations = it + 1;
        if (std::abs(obj - next_obj) <= tol && moved <= 1e4 * tol) {
            obj = next_obj;
            break;
        }
        obj = next_obj;
    }
    res.point = x;
    res.total = objective(x);
    return res;
}

double triple_criterion(const BlochObservable& o1, const BlochObservable& o2,
                        const BlochObservable& o3) {
    const Vec3 r1 = o1.r, r2 = o2.r, r3 = o3.r;
    const Vec3 big = r1 + r2 + r3;
    const std::vector<Vec3> pts{big, 2.0 * r1 - big, 2.0 * r2 - big, 2.0 * r3 - big};
    const FtResult ft = weiszfeld_ft_point(pts);
    return ft.total;
}

MeasurementAssemblage assemblage_from_bloch(const std::vector<BlochObservable>& obs) {
    MeasurementAssemblage m;
    m.dim = 2;
    for (const BlochObservable& o : obs)
        m.elements.push_back({o.effect_plus(), o.effect_minus()});
    return m;
}

}  // namespace steerjm
