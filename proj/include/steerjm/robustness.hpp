#pragma once

#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "steerjm/feasibility.hpp"

namespace steerjm {

enum class RobustnessKind { general, white, biased_white, weight };

/// Result of a robustness computation.  `value` is the quantifier itself:
/// t for general noise (IR), the critical mixing weight for white noise, and
/// the weight of the incompatible part for IW.
struct RobustnessReport {
    RobustnessKind kind = RobustnessKind::general;
    double value = 0.0;
    double bias = 0.0;
    /// general: optimal noise assemblage N; weight: the incompatible part.
    std::optional<MeasurementAssemblage> noise;
    /// general: parent of the critically mixed assemblage; weight: parent of
    /// the jointly measurable part.
    std::optional<JointObservable> model;
    /// general/weight: decomposition self-check residual; white: final
    /// bisection bracket width.
    double margin = 0.0;
};

/// Incompatibility robustness: minimum t such that (M + tN)/(1+t) is jointly
/// measurable for some noise assemblage N, computed by one SDP.
RobustnessReport incompatibility_robustness(const MeasurementAssemblage& m);

/// Critical white-noise weight: min lambda such that mixing each effect with
/// the (possibly biased) trivial measurement,
/// (1-lambda) M_{a|x} + lambda (1+ab) 1/o, yields a jointly measurable
/// assemblage.  Bias b != 0 requires binary outcomes (a = +1 for outcome 0,
/// a = -1 for outcome 1).  Bisection over the mixing weight; joint
/// measurability is monotone along the mixture.
RobustnessReport white_noise_robustness(const MeasurementAssemblage& m, double bias = 0.0);

/// Incompatibility weight: minimum mu such that M = (1-mu) O + mu N with O
/// jointly measurable.
RobustnessReport incompatibility_weight(const MeasurementAssemblage& m);

/// Heisenberg-picture channel action M |-> sum_i K_i^dag M K_i.  Requires
/// sum_i K_i^dag K_i = 1 to 1e-9 so POVMs map to POVMs.
MeasurementAssemblage apply_heisenberg_channel(const MeasurementAssemblage& m,
                                               const std::vector<ComplexMatrix>& kraus);

/// IR before and after the channel; monotonicity means second <= first.
std::pair<double, double> channel_monotonicity_check(const MeasurementAssemblage& m,
                                                     const std::vector<ComplexMatrix>& kraus);

/// For unbiased qubit pair assemblages M_{a|x} = (1 + v.sigma)/2: returns
/// (lambda_g, lambda_w) and lets callers verify lambda_g <= lambda_w / 2.
std::pair<double, double> half_bound_check(const MeasurementAssemblage& m);

/// Random Kraus family with sum K^dag K = 1 (isometry split into blocks).
std::vector<ComplexMatrix> random_kraus_channel(int dim, int n_kraus, std::mt19937_64& rng);

/// Qubit depolarizing channel (self-dual): {sqrt(1-3p/4) 1, sqrt(p/4) sigma_k}.
std::vector<ComplexMatrix> depolarizing_kraus(double p);

}  // namespace steerjm
