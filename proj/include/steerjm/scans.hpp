#pragma once

#include <string>
#include <vector>

#include "steerjm/qubit.hpp"

namespace steerjm {

struct GridAxis {
    double min = 0.0;
    double max = 1.0;
    int steps = 50;

    void check(const char* name) const;
    double value(int i) const { return min + (max - min) * i / (steps - 1); }
};

/// Steering-region scan for the two-setting qubit family
///   rho_{+/-|1} = (1 +/- lambda sigma_z)/4,
///   rho_{+|2} = t2p * 1 + r (sin theta, 0, cos theta).sigma,  rho_{-|2} = rho_B - rho_{+|2},
/// with rho_B = 1/2.  Rows where setting 2 is unphysical (r > min(t2p, 1/2 - t2p))
/// are kept but flagged invalid.
struct Fig1Spec {
    GridAxis lambda{0.0, 1.0, 50};
    GridAxis r{0.0, 0.05, 50};
    GridAxis theta{0.0, 3.14159265358979323846, 50};
    double t2p = 0.45;
};

struct Fig1Row {
    double lambda = 0.0, r = 0.0, theta = 0.0;
    double busch_value = 0.0;   // NaN when invalid
    double yu_oh_margin = 0.0;  // NaN when invalid
    bool steerable_inner = false;
    bool steerable_outer = false;
    bool valid = true;
};

std::vector<Fig1Row> scan_fig1(const Fig1Spec& spec);

/// The steering-equivalent pair for one fig-1 grid point (closed form).
std::pair<BlochObservable, BlochObservable> fig1_observables(double lambda, double r,
                                                             double theta, double t2p);

/// Noise-threshold scan for two sharp qubit measurements at angle theta:
/// general-noise threshold lambda_g and white-noise thresholds for each bias.
struct Fig2Spec {
    GridAxis theta{3.14159265358979323846 / 200.0, 3.14159265358979323846 / 2.0, 100};
    std::vector<double> biases{0.0, 0.5, 0.8, 1.0};
    int threads = 1;
};

struct Fig2Row {
    double theta = 0.0;
    double lambda_g = 0.0;
    std::vector<double> lambda_w;  // one per bias
    bool ok = true;                // false if a solver failure was recorded
};

std::vector<Fig2Row> scan_fig2(const Fig2Spec& spec);

/// Sharp pair along z and (sin theta, 0, cos theta).
MeasurementAssemblage sharp_pair(double theta);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

std::string fig1_csv(const Fig1Spec& spec, const std::vector<Fig1Row>& rows);
std::string fig2_csv(const Fig2Spec& spec, const std::vector<Fig2Row>& rows);

}  // namespace steerjm
