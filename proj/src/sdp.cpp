#include "steerjm/sdp.hpp"

#include <algorithm>
#include <cmath>

#include "steerjm/eig.hpp"

namespace steerjm {

void SdpProblem::check() const {
    if (block_dims.size() != objective.size())
        throw std::invalid_argument("SdpProblem: objective/block count mismatch");
    for (size_t j = 0; j < block_dims.size(); ++j) {
        if (objective[j].rows() != block_dims[j] || objective[j].cols() != block_dims[j])
            throw std::invalid_argument("SdpProblem: objective block dimension mismatch");
        if (hermiticity_defect(objective[j]) > 1e-10 * (1.0 + max_abs(objective[j])))
            throw std::invalid_argument("SdpProblem: objective block not Hermitian");
    }
    for (const auto& c : constraints)
        for (const auto& [j, a] : c.terms) {
            if (j < 0 || j >= static_cast<int>(block_dims.size()))
                throw std::invalid_argument("SdpProblem: constraint references unknown block");
            if (a.rows() != block_dims[j] || a.cols() != block_dims[j])
                throw std::invalid_argument("SdpProblem: constraint block dimension mismatch");
            if (hermiticity_defect(a) > 1e-10 * (1.0 + max_abs(a)))
                throw std::invalid_argument("SdpProblem: constraint operator not Hermitian");
        }
}

int SdpProblem::total_dim() const {
    int n = 0;
    for (int d : block_dims) n += d;
    return n;
}

namespace {

struct Factors {
    ComplexMatrix half;      // M^{1/2}
    ComplexMatrix inv_half;  // M^{-1/2}
    ComplexMatrix inv;       // M^{-1}
};

Factors spectral_factors(const ComplexMatrix& m) {
    const EigenDecomposition e = eig_hermitian(HermitianOperator(hermitian_part(m), 1e-6));
    const int n = m.rows();
    Factors f{ComplexMatrix(n, n), ComplexMatrix(n, n), ComplexMatrix(n, n)};
    ComplexMatrix dh(n, n), dih(n, n), di(n, n);
    // Relative floor keeps the factors finite when an eigenvalue underflows
    // after the iterate has effectively converged.
    const double floor_ = std::max(1e-14 * std::abs(e.eigenvalues.front()), 1e-30);
    for (int i = 0; i < n; ++i) {
        const double l = std::max(e.eigenvalues[i], floor_);
        dh(i, i) = std::sqrt(l);
        dih(i, i) = 1.0 / std::sqrt(l);
        di(i, i) = 1.0 / l;
    }
    const ComplexMatrix vd = dagger(e.eigenvectors);
    f.half = e.eigenvectors * dh * vd;
    f.inv_half = e.eigenvectors * dih * vd;
    f.inv = e.eigenvectors * di * vd;
    return f;
}

/// Largest alpha in (0, 1] with M + alpha*D staying positive definite,
/// damped by tau.
double max_step(const Factors& f, const ComplexMatrix& d, double tau) {
    const ComplexMatrix s = f.inv_half * d * f.inv_half;
    const EigenDecomposition e = eig_hermitian(HermitianOperator(hermitian_part(s), 1e-6));
    const double lmin = e.eigenvalues.back();
    if (lmin >= -1e-14) return 1.0;
    return std::min(1.0, -tau / lmin);
}

/// Dense symmetric positive definite solve (Cholesky with jitter fallback).
class SymSolver {
public:
    explicit SymSolver(std::vector<double> m, int n) : n_(n), a_(std::move(m)) {
        double max_diag = 0.0;
        for (int i = 0; i < n_; ++i) max_diag = std::max(max_diag, std::abs(at(i, i)));
        double jitter = 0.0;
        for (int attempt = 0; attempt < 12; ++attempt) {
            l_ = a_;
            if (jitter > 0.0)
                for (int i = 0; i < n_; ++i) lat(i, i) += jitter;
            if (factor()) return;
            jitter = (jitter == 0.0) ? 1e-13 * (1.0 + max_diag) : 10.0 * jitter;
        }
        throw std::runtime_error("SDP Newton system factorization failed");
    }

    std::vector<double> solve(const std::vector<double>& rhs) const {
        std::vector<double> x = raw_solve(rhs);
        // One round of iterative refinement.
        std::vector<double> r(rhs);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r[i] -= at(i, j) * x[j];
        const std::vector<double> dx = raw_solve(r);
        for (int i = 0; i < n_; ++i) x[i] += dx[i];
        return x;
    }

private:
    double& lat(int i, int j) { return l_[static_cast<size_t>(i) * n_ + j]; }
    double lat(int i, int j) const { return l_[static_cast<size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    bool factor() {
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = lat(i, j);
                for (int k = 0; k < j; ++k) s -= lat(i, k) * lat(j, k);
                if (i == j) {
                    if (s <= 0.0) return false;
                    lat(i, i) = std::sqrt(s);
                } else {
                    lat(i, j) = s / lat(j, j);
                }
            }
        }
        return true;
    }

    std::vector<double> raw_solve(const std::vector<double>& rhs) const {
        std::vector<double> x = rhs;
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < i; ++k) x[i] -= lat(i, k) * x[k];
            x[i] /= lat(i, i);
        }
        for (int i = n_ - 1; i >= 0; --i) {
            for (int k = i + 1; k < n_; ++k) x[i] -= lat(k, i) * x[k];
            x[i] /= lat(i, i);
        }
        return x;
    }

    int n_;
    std::vector<double> a_;
    std::vector<double> l_;
};

}  // namespace

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts) {
    p.check();
    // Row equilibration: scale every constraint to unit operator norm.  This
    // keeps the Schur complement well scaled when targets differ by orders of
    // magnitude; multipliers are unscaled before returning.
    {
        bool needs_scaling = false;
        std::vector<double> scale(p.constraints.size(), 1.0);
        for (size_t i = 0; i < p.constraints.size(); ++i) {
            double norm2 = 0.0;
            for (const auto& [j, a] : p.constraints[i].terms) {
                const double f = frobenius_norm(a);
                norm2 += f * f;
            }
            const double norm = std::sqrt(norm2);
            if (norm > 0.0 && std::abs(norm - 1.0) > 1e-12) {
                scale[i] = norm;
                needs_scaling = true;
            }
        }
        if (needs_scaling) {
            SdpProblem q = p;
            for (size_t i = 0; i < q.constraints.size(); ++i) {
                for (auto& [j, a] : q.constraints[i].terms) a = (1.0 / scale[i]) * a;
                q.constraints[i].rhs /= scale[i];
            }
            SdpSolution sol = solve(q, opts);
            for (size_t i = 0; i < sol.y.size(); ++i) sol.y[i] /= scale[i];
            for (size_t i = 0; i < sol.improving_ray.size(); ++i)
                sol.improving_ray[i] /= scale[i];
            return sol;
        }
    }
    const int nb = static_cast<int>(p.block_dims.size());
    const int m = static_cast<int>(p.constraints.size());
    if (m == 0) throw std::invalid_argument("solve: problem has no constraints");
    int n = 0;
    for (int d : p.block_dims) n += d;

    // block -> constraints touching it
    std::vector<std::vector<std::pair<int, const ComplexMatrix*>>> by_block(nb);
    for (int i = 0; i < m; ++i)
        for (const auto& [j, a] : p.constraints[i].terms)
            by_block[j].push_back({i, &a});

    double bnorm = 0.0;
    for (const auto& c : p.constraints) bnorm = std::max(bnorm, std::abs(c.rhs));
    double cnorm = 0.0;
    for (const auto& c : p.objective) cnorm = std::max(cnorm, max_abs(c));

    std::vector<ComplexMatrix> X(nb), Z(nb);
    for (int j = 0; j < nb; ++j) {
        X[j] = std::max(1.0, bnorm) * ComplexMatrix::identity(p.block_dims[j]);
        Z[j] = std::max(1.0, cnorm) * ComplexMatrix::identity(p.block_dims[j]);
    }
    std::vector<double> y(m, 0.0);

    auto apply_A = [&](const std::vector<ComplexMatrix>& blocks) {
        std::vector<double> out(m, 0.0);
        for (int i = 0; i < m; ++i)
            for (const auto& [j, a] : p.constraints[i].terms) out[i] += hs_inner(a, blocks[j]);
        return out;
    };
    auto apply_At = [&](const std::vector<double>& mult) {
        std::vector<ComplexMatrix> out(nb);
        for (int j = 0; j < nb; ++j) out[j] = ComplexMatrix::zero(p.block_dims[j], p.block_dims[j]);
        for (int i = 0; i < m; ++i) {
            if (mult[i] == 0.0) continue;
            for (const auto& [j, a] : p.constraints[i].terms) out[j] += mult[i] * a;
        }
        return out;
    };

    SdpSolution sol;
    int stalls = 0;

    // Best iterate so far by worst-case accuracy; restored when the
    // iteration stops making progress (Schur conditioning floor).
    double best_score = 1e300;
    int best_iter = 0;
    std::vector<ComplexMatrix> bestX = X, bestZ = Z;
    std::vector<double> besty = y;
    SdpSolution best_sol;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        std::vector<double> ax = apply_A(X);
        std::vector<double> rp(m);
        double pres = 0.0;
        for (int i = 0; i < m; ++i) {
            rp[i] = p.constraints[i].rhs - ax[i];
            pres = std::max(pres, std::abs(rp[i]));
        }
        pres /= 1.0 + bnorm;

        std::vector<ComplexMatrix> aty = apply_At(y);
        std::vector<ComplexMatrix> rd(nb);
        double dres = 0.0;
        for (int j = 0; j < nb; ++j) {
            rd[j] = p.objective[j] - aty[j] - Z[j];
            dres = std::max(dres, max_abs(rd[j]));
        }
        dres /= 1.0 + cnorm;

        double pobj = 0.0, gap_inner = 0.0;
        for (int j = 0; j < nb; ++j) {
            pobj += hs_inner(p.objective[j], X[j]);
            gap_inner += hs_inner(X[j], Z[j]);
        }
        double dobj = 0.0;
        for (int i = 0; i < m; ++i) dobj += p.constraints[i].rhs * y[i];
        const double mu = gap_inner / n;
        const double relgap = std::abs(pobj - dobj) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));

        sol.primal_value = pobj;
        sol.dual_value = dobj;
        sol.duality_gap = relgap;
        sol.primal_residual = pres;
        sol.dual_residual = dres;
        sol.iterations = iter;

        const double score = std::max({pres, dres, relgap});
        if (score < 0.9 * best_score) {
            best_score = score;
            best_iter = iter;
            bestX = X;
            bestZ = Z;
            besty = y;
            best_sol = sol;
        }

        if (pres <= opts.feas_tol && dres <= opts.feas_tol && relgap <= opts.gap_tol) {
            sol.status = SdpStatus::optimal;
            break;
        }
        if (iter - best_iter > 15) break;  // stagnating at the accuracy floor

        // Primal infeasibility: diverging multipliers along a dual improving ray.
        double ynorm = 0.0;
        for (double v : y) ynorm += v * v;
        ynorm = std::sqrt(ynorm);
        if (ynorm > 1e7 * (1.0 + cnorm)) {
            std::vector<double> ray(m);
            for (int i = 0; i < m; ++i) ray[i] = y[i] / ynorm;
            const std::vector<ComplexMatrix> atr = apply_At(ray);
            double max_eig = -1e300;
            for (int j = 0; j < nb; ++j) {
                const EigenDecomposition e =
                    eig_hermitian(HermitianOperator(hermitian_part(atr[j]), 1e-6));
                max_eig = std::max(max_eig, e.eigenvalues.front());
            }
            double bray = 0.0;
            for (int i = 0; i < m; ++i) bray += p.constraints[i].rhs * ray[i];
            if (bray > 1e-7 && max_eig <= 1e-7) {
                sol.status = SdpStatus::infeasible;
                sol.improving_ray = ray;
                sol.ray_violation = bray;
                break;
            }
        }

        // Nesterov-Todd scaling point per block: W Z W = X.
        std::vector<Factors> xf(nb), zf(nb);
        std::vector<ComplexMatrix> W(nb);
        for (int j = 0; j < nb; ++j) {
            xf[j] = spectral_factors(X[j]);
            zf[j] = spectral_factors(Z[j]);
            const ComplexMatrix t = zf[j].half * X[j] * zf[j].half;
            const Factors tf = spectral_factors(t);
            W[j] = hermitian_part(zf[j].inv_half * tf.half * zf[j].inv_half);
        }

        // Schur complement M_ik = sum_j <A_ij, W_j A_kj W_j>.
        std::vector<double> schur(static_cast<size_t>(m) * m, 0.0);
        for (int k = 0; k < m; ++k)
            for (const auto& [j, a] : p.constraints[k].terms) {
                const ComplexMatrix waw = W[j] * a * W[j];
                for (const auto& [i, ai] : by_block[j])
                    schur[static_cast<size_t>(i) * m + k] += hs_inner(*ai, waw);
            }
        for (int i = 0; i < m; ++i)  // symmetrize roundoff
            for (int k = i + 1; k < m; ++k) {
                const double v = 0.5 * (schur[static_cast<size_t>(i) * m + k] +
                                        schur[static_cast<size_t>(k) * m + i]);
                schur[static_cast<size_t>(i) * m + k] = v;
                schur[static_cast<size_t>(k) * m + i] = v;
            }
        const SymSolver newton(std::move(schur), m);

        auto direction = [&](const std::vector<ComplexMatrix>& rc) {
            std::vector<double> rhs(m);
            for (int i = 0; i < m; ++i) {
                double v = rp[i];
                for (const auto& [j, a] : p.constraints[i].terms)
                    v += hs_inner(a, W[j] * rd[j] * W[j]) - hs_inner(a, rc[j]);
                rhs[i] = v;
            }
            const std::vector<double> dy = newton.solve(rhs);
            std::vector<ComplexMatrix> dz(nb), dx(nb);
            const std::vector<ComplexMatrix> atdy = apply_At(dy);
            for (int j = 0; j < nb; ++j) {
                dz[j] = hermitian_part(rd[j] - atdy[j]);
                dx[j] = hermitian_part(rc[j] - W[j] * dz[j] * W[j]);
            }
            return std::make_tuple(dy, dx, dz);
        };

        // Predictor (affine scaling).
        std::vector<ComplexMatrix> rc(nb);
        for (int j = 0; j < nb; ++j) rc[j] = -1.0 * X[j];
        auto [dy_a, dx_a, dz_a] = direction(rc);

        double ap_a = 1.0, ad_a = 1.0;
        for (int j = 0; j < nb; ++j) {
            ap_a = std::min(ap_a, max_step(xf[j], dx_a[j], 0.999));
            ad_a = std::min(ad_a, max_step(zf[j], dz_a[j], 0.999));
        }
        double mu_aff = 0.0;
        for (int j = 0; j < nb; ++j)
            mu_aff += hs_inner(X[j] + ap_a * dx_a[j], Z[j] + ad_a * dz_a[j]);
        mu_aff = std::max(mu_aff / n, 0.0);
        const double sigma = std::clamp(std::pow(mu_aff / std::max(mu, 1e-300), 3.0), 1e-8, 1.0);

        // Corrector with the adaptive centering weight.  (A second-order
        // Mehrotra term in Z^{-1} form is unreliable under NT scaling here:
        // it collapses the dual step length on degenerate instances.)
        for (int j = 0; j < nb; ++j)
            rc[j] = hermitian_part((sigma * mu) * zf[j].inv - X[j]);
        auto [dy, dx, dz] = direction(rc);

        double ap = 1.0, ad = 1.0;
        for (int j = 0; j < nb; ++j) {
            ap = std::min(ap, max_step(xf[j], dx[j], 0.98));
            ad = std::min(ad, max_step(zf[j], dz[j], 0.98));
        }
        if (ap < 1e-4 && ad < 1e-4) {
            // Fall back to a pure centering step.
            for (int j = 0; j < nb; ++j) rc[j] = hermitian_part(mu * zf[j].inv - X[j]);
            std::tie(dy, dx, dz) = direction(rc);
            ap = ad = 1.0;
            for (int j = 0; j < nb; ++j) {
                ap = std::min(ap, max_step(xf[j], dx[j], 0.98));
                ad = std::min(ad, max_step(zf[j], dz[j], 0.98));
            }
            if (++stalls > 5) break;
        } else {
            stalls = 0;
        }

        bool finite = true;
        for (int j = 0; j < nb; ++j) finite = finite && dx[j].all_finite() && dz[j].all_finite();
        for (double v : dy) finite = finite && std::isfinite(v);
        if (!finite) break;  // numerical breakdown: keep the last good iterate

        for (int j = 0; j < nb; ++j) {
            X[j] = hermitian_part(X[j] + ap * dx[j]);
            Z[j] = hermitian_part(Z[j] + ad * dz[j]);
        }
        for (int i = 0; i < m; ++i) y[i] += ad * dy[i];
    }

    if (sol.status == SdpStatus::max_iter &&
        std::max({best_sol.primal_residual, best_sol.dual_residual, best_sol.duality_gap}) <
            std::max({sol.primal_residual, sol.dual_residual, sol.duality_gap})) {
        X = bestX;
        Z = bestZ;
        y = besty;
        const SdpStatus st = sol.status;
        sol = best_sol;
        sol.status = st;
    }

    // Accept slightly looser iterates rather than reporting a spurious failure.
    if (sol.status == SdpStatus::max_iter && sol.primal_residual <= 5e-7 &&
        sol.dual_residual <= 5e-7 && sol.duality_gap <= 5e-7)
        sol.status = SdpStatus::optimal;

    sol.primal_blocks = X;
    sol.dual_blocks = Z;
    sol.y = y;
    return sol;
}

}  // namespace steerjm
