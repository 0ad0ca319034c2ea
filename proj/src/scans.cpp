#include "steerjm/scans.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <limits>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "steerjm/robustness.hpp"
#include "steerjm/version.hpp"

namespace steerjm {

void GridAxis::check(const char* name) const {
    if (steps < 2) throw std::invalid_argument(std::string("axis ") + name + ": steps must be >= 2");
    if (!(min < max)) throw std::invalid_argument(std::string("axis ") + name + ": min must be < max");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::pair<BlochObservable, BlochObservable> fig1_observables(double lambda, double r,
                                                             double theta, double t2p) {
    // SE observables for rho_B = 1/2 are just 2 * rho_{a|x}; in (alpha, r)
    // form that doubles the Bloch data of the ensemble elements.
    BlochObservable b1;
    b1.alpha = 0.0;
    b1.r = {0.0, 0.0, lambda};
    BlochObservable b2;
    b2.alpha = 4.0 * t2p - 1.0;
    b2.r = {4.0 * r * std::sin(theta), 0.0, 4.0 * r * std::cos(theta)};
    return {b1, b2};
}

std::vector<Fig1Row> scan_fig1(const Fig1Spec& spec) {
    spec.lambda.check("lambda");
    spec.r.check("r");
    spec.theta.check("theta");
    if (spec.t2p < 0.0 || spec.t2p > 0.5)
        throw std::invalid_argument("fig1: t2p must lie in [0, 1/2]");
    const double r_phys = std::min(spec.t2p, 0.5 - spec.t2p);

    std::vector<Fig1Row> rows;
    rows.reserve(static_cast<size_t>(spec.lambda.steps) * spec.r.steps * spec.theta.steps);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int il = 0; il < spec.lambda.steps; ++il)
        for (int ir = 0; ir < spec.r.steps; ++ir)
            for (int it = 0; it < spec.theta.steps; ++it) {
                Fig1Row row;
                row.lambda = spec.lambda.value(il);
                row.r = spec.r.value(ir);
                row.theta = spec.theta.value(it);
                row.valid = row.lambda >= 0.0 && row.lambda <= 1.0 &&
                            row.r >= 0.0 && row.r <= r_phys + 1e-12;
                if (!row.valid) {
                    row.busch_value = nan;
                    row.yu_oh_margin = nan;
                    rows.push_back(row);
                    continue;
                }
                const auto [b1, b2] =
                    fig1_observables(row.lambda, row.r, row.theta, spec.t2p);
                row.busch_value = busch_criterion(b1, b2);
                const PairVerdict v = yu_oh_criterion(b1, b2);
                row.yu_oh_margin = v.margin;
                row.steerable_inner = row.busch_value > 2.0;
                row.steerable_outer = !v.jm;
                rows.push_back(row);
            }
    return rows;
}

MeasurementAssemblage sharp_pair(double theta) {
    BlochObservable o1;
    o1.r = {0.0, 0.0, 1.0};
    BlochObservable o2;
    o2.r = {std::sin(theta), 0.0, std::cos(theta)};
    return assemblage_from_bloch({o1, o2});
}

std::vector<Fig2Row> scan_fig2(const Fig2Spec& spec) {
    spec.theta.check("theta");
    if (spec.theta.min <= 0.0)
        throw std::invalid_argument("fig2: theta must be positive");
    const int n = spec.theta.steps;
    std::vector<Fig2Row> rows(n);

    auto compute = [&](int i) {
        Fig2Row& row = rows[i];
        row.theta = spec.theta.value(i);
        row.lambda_w.assign(spec.biases.size(), 0.0);
        try {
            const MeasurementAssemblage m = sharp_pair(row.theta);
            const double t = incompatibility_robustness(m).value;
            row.lambda_g = t / (1.0 + t);
            for (size_t b = 0; b < spec.biases.size(); ++b)
                row.lambda_w[b] = white_noise_robustness(m, spec.biases[b]).value;
        } catch (const SolverError&) {
            row.ok = false;
        }
    };

    const int workers = std::max(1, std::min(spec.threads, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) compute(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) compute(i);
            });
        for (std::thread& th : pool) th.join();
    }
    return rows;
}

namespace {

void axis_header(std::ostringstream& out, const char* name, const GridAxis& a) {
    out << "# axis " << name << ": min=" << format_double(a.min)
        << " max=" << format_double(a.max) << " steps=" << a.steps << "\n";
}

}  // namespace

std::string fig1_csv(const Fig1Spec& spec, const std::vector<Fig1Row>& rows) {
    std::ostringstream out;
    out << "# steerjm " << kVersion << " scan-fig1\n";
    axis_header(out, "lambda", spec.lambda);
    axis_header(out, "r", spec.r);
    axis_header(out, "theta", spec.theta);
    out << "# t2p=" << format_double(spec.t2p) << "\n";
    out << "lambda,r,theta,busch_value,yu_oh_margin,steerable_inner,steerable_outer,valid\n";
    for (const Fig1Row& row : rows) {
        out << format_double(row.lambda) << ',' << format_double(row.r) << ','
            << format_double(row.theta) << ',' << format_double(row.busch_value) << ','
            << format_double(row.yu_oh_margin) << ',' << (row.steerable_inner ? 1 : 0) << ','
            << (row.steerable_outer ? 1 : 0) << ',' << (row.valid ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string fig2_csv(const Fig2Spec& spec, const std::vector<Fig2Row>& rows) {
    std::ostringstream out;
    out << "# steerjm " << kVersion << " scan-fig2\n";
    axis_header(out, "theta", spec.theta);
    out << "# biases=";
    for (size_t b = 0; b < spec.biases.size(); ++b)
        out << (b ? " " : "") << format_double(spec.biases[b]);
    out << "\n";
    out << "theta,lambda_g";
    for (double b : spec.biases) {
        std::string tag = format_double(b);
        tag.erase(std::remove(tag.begin(), tag.end(), '.'), tag.end());
        out << ",lambda_w_b" << tag;
    }
    out << ",ok\n";
    for (const Fig2Row& row : rows) {
        out << format_double(row.theta) << ',' << format_double(row.lambda_g);
        for (double v : row.lambda_w) out << ',' << format_double(v);
        out << ',' << (row.ok ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace steerjm
