#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "steerjm/feasibility.hpp"
#include "steerjm/json_io.hpp"
#include "steerjm/qubit.hpp"
#include "steerjm/robustness.hpp"
#include "steerjm/scans.hpp"
#include "steerjm/version.hpp"

namespace {

using nlohmann::json;
using namespace steerjm;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitConsistency = 4;
constexpr int kExitSolver = 5;

struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& output_path, const std::string& text) {
    if (output_path.empty() || output_path == "-")
        std::cout << text << "\n";
    else
        write_file(output_path, text);
}

json matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

template <typename Assemblage>
void require_valid(const Assemblage& a) {
    const std::vector<Violation> violations = validate(a);
    if (violations.empty()) return;
    std::string msg = "input fails validation:";
    for (const Violation& v : violations)
        msg += "\n  " + v.what + " at (x=" + std::to_string(v.setting) +
               ", a=" + std::to_string(v.outcome) +
               "), residual " + std::to_string(v.residual);
    throw std::invalid_argument(msg);
}

/// Exact-criterion margin for qubit binary pairs; empty otherwise.
std::optional<double> pair_margin(const MeasurementAssemblage& m) {
    if (m.dim != 2 || m.settings() != 2 || m.outcomes(0) != 2 || m.outcomes(1) != 2)
        return std::nullopt;
    auto as_bloch = [](const HermitianOperator& effect) {
        const BlochEnsembleElement e = bloch_of(effect);
        BlochObservable o;
        o.alpha = 2.0 * e.t - 1.0;
        o.r = 2.0 * e.s;
        return o;
    };
    try {
        return yu_oh_criterion(as_bloch(m.elements[0][0]), as_bloch(m.elements[1][0])).margin;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

std::string verdict_string(bool feasible, double robustness, std::optional<double> margin) {
    if (margin && std::abs(*margin) < 1e-6) return "boundary";
    if (!margin && !feasible && robustness <= 1e-6) return "boundary";
    return feasible ? "compatible" : "incompatible";
}

int cmd_se_map(const std::string& input, const std::string& output, double tol) {
    const StateAssemblage a = parse_state_assemblage(read_file(input));
    require_valid(a);
    const SteeringEquivalentResult se = se_observables(a, tol);

    json out;
    out["kind"] = "measurement";
    out["dim"] = se.rank;
    out["rank"] = se.rank;
    out["projection"] = matrix_json(se.proj);
    json settings = json::array();
    for (const auto& povm : se.observables.elements) {
        json outcomes = json::array();
        for (const HermitianOperator& e : povm) outcomes.push_back(matrix_json(e.mat()));
        settings.push_back(json{{"outcomes", outcomes}});
    }
    out["settings"] = settings;
    if (se.rank == 1) out["note"] = "trivially JM";
    emit(output, out.dump(2));
    return kExitOk;
}

int cmd_check(const std::string& input, const std::string& output) {
    const std::string text = read_file(input);
    std::string kind = json_assemblage_kind(text);
    if (kind.empty()) {
        // Heuristic: an assemblage of states sums to trace 1 per setting, a
        // POVM sums to trace d.
        const MeasurementAssemblage probe = parse_measurement_assemblage(text);
        double tr = 0.0;
        for (int a = 0; a < probe.outcomes(0); ++a)
            tr += trace(probe.elements[0][a].mat()).real();
        kind = std::abs(tr - 1.0) < 0.5 ? "state" : "measurement";
    }

    json out;
    if (kind == "measurement") {
        const MeasurementAssemblage m = parse_measurement_assemblage(text);
        require_valid(m);
        const JmResult res = jm_feasible(m);
        const std::optional<double> margin = pair_margin(m);
        out["kind"] = "measurement";
        out["verdict"] = res.jm ? "jm" : "not_jm";
        out["status"] = verdict_string(res.jm, res.robustness, margin);
        out["robustness"] = res.robustness;
        if (margin) out["margin"] = *margin;
        if (res.certificate) out["certificate_violation"] = res.certificate->violation;
    } else {
        const StateAssemblage a = parse_state_assemblage(text);
        require_valid(a);
        const LhsResult lhs = lhs_feasible(a);
        const SteeringEquivalentResult se = se_observables(a);
        const JmResult jm = jm_feasible(se.observables);
        if (lhs.unsteerable != jm.jm && std::max(lhs.robustness, jm.robustness) > 1e-6)
            throw ConsistencyError(
                "steering and joint-measurability verdicts disagree beyond tolerance");
        if (std::abs(lhs.robustness - jm.robustness) > 1e-6)
            throw ConsistencyError("steering and joint-measurability robustness differ beyond 1e-6");
        const std::optional<double> margin = pair_margin(se.observables);
        out["kind"] = "state";
        out["verdict"] = lhs.unsteerable ? "unsteerable" : "steerable";
        out["status"] = verdict_string(lhs.unsteerable, lhs.robustness, margin);
        out["robustness"] = lhs.robustness;
        out["se_verdict"] = jm.jm ? "jm" : "not_jm";
        out["se_robustness"] = jm.robustness;
        if (margin) out["margin"] = *margin;
        if (lhs.certificate) out["certificate_violation"] = lhs.certificate->violation;
    }
    emit(output, out.dump(2));
    return kExitOk;
}

int cmd_robustness(const std::string& input, const std::string& output,
                   const std::string& kind, double bias) {
    const MeasurementAssemblage m = parse_measurement_assemblage(read_file(input));
    require_valid(m);
    RobustnessReport rep;
    if (kind == "general")
        rep = incompatibility_robustness(m);
    else if (kind == "white")
        rep = white_noise_robustness(m, bias);
    else if (kind == "weight")
        rep = incompatibility_weight(m);
    else
        throw std::invalid_argument("unknown robustness kind: " + kind);

    json out;
    out["kind"] = kind;
    out["value"] = rep.value;
    out["margin"] = rep.margin;
    if (rep.kind == RobustnessKind::general)
        out["lambda"] = rep.value / (1.0 + rep.value);
    if (rep.kind == RobustnessKind::biased_white || rep.kind == RobustnessKind::white)
        out["bias"] = rep.bias;
    if (rep.noise) {
        json settings = json::array();
        for (const auto& povm : rep.noise->elements) {
            json outcomes = json::array();
            for (const HermitianOperator& e : povm) outcomes.push_back(matrix_json(e.mat()));
            settings.push_back(json{{"outcomes", outcomes}});
        }
        out["noise"] = json{{"kind", "measurement"}, {"dim", rep.noise->dim},
                            {"settings", settings}};
    }
    emit(output, out.dump(2));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steering / joint-measurability toolbox"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string input, output, kind = "general";
    double tol = 1e-9, bias = 0.0, t2p = 0.45;
    int threads = 1;

    auto* se_map = app.add_subcommand("se-map", "Map a state assemblage to its "
                                                "steering-equivalent observables");
    se_map->add_option("--input", input, "Assemblage JSON")->required();
    se_map->add_option("--output", output, "Output path (default: stdout)");
    se_map->add_option("--tol", tol, "Rank tolerance for the reduced state");

    auto* check = app.add_subcommand("check", "Joint-measurability / steerability verdict");
    check->add_option("--input", input, "Assemblage JSON")->required();
    check->add_option("--output", output, "Output path (default: stdout)");

    auto* rob = app.add_subcommand("robustness", "Robustness quantifiers");
    rob->add_option("--input", input, "Measurement assemblage JSON")->required();
    rob->add_option("--output", output, "Output path (default: stdout)");
    rob->add_option("--kind", kind, "general | white | weight")
        ->check(CLI::IsMember({"general", "white", "weight"}));
    rob->add_option("--bias", bias, "Noise bias b in [0,1] (white kind only)");

    Fig1Spec f1;
    auto* fig1 = app.add_subcommand("scan-fig1", "Steering-region scan over (lambda, r, theta)");
    fig1->add_option("--output", output, "CSV output path")->required();
    int f1_steps = 0;
    fig1->add_option("--steps", f1_steps, "Steps per axis (default 50)");
    fig1->add_option("--t2p", f1.t2p, "Trace parameter of the second setting");
    fig1->add_option("--lambda-min", f1.lambda.min);
    fig1->add_option("--lambda-max", f1.lambda.max);
    fig1->add_option("--r-min", f1.r.min);
    fig1->add_option("--r-max", f1.r.max);
    fig1->add_option("--theta-min", f1.theta.min);
    fig1->add_option("--theta-max", f1.theta.max);

    Fig2Spec f2;
    auto* fig2 = app.add_subcommand("scan-fig2", "Noise-threshold scan over theta");
    fig2->add_option("--output", output, "CSV output path")->required();
    int f2_steps = 0;
    fig2->add_option("--steps", f2_steps, "Theta steps (default 100)");
    fig2->add_option("--theta-min", f2.theta.min);
    fig2->add_option("--theta-max", f2.theta.max);
    fig2->add_option("--threads", threads, "Worker threads for the scan");
    fig2->add_option("--biases", f2.biases, "Bias values for the white-noise curves");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitParse;
    }

    try {
        if (se_map->parsed()) return cmd_se_map(input, output, tol);
        if (check->parsed()) return cmd_check(input, output);
        if (rob->parsed()) return cmd_robustness(input, output, kind, bias);
        if (fig1->parsed()) {
            if (f1_steps > 0) f1.lambda.steps = f1.r.steps = f1.theta.steps = f1_steps;
            emit(output, fig1_csv(f1, scan_fig1(f1)));
            return kExitOk;
        }
        if (fig2->parsed()) {
            if (f2_steps > 0) f2.theta.steps = f2_steps;
            f2.threads = threads;
            const std::vector<Fig2Row> rows = scan_fig2(f2);
            for (const Fig2Row& row : rows)
                if (!row.ok) throw SolverError("scan-fig2: solver failure at theta=" +
                                               std::to_string(row.theta));
            emit(output, fig2_csv(f2, rows));
            return kExitOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ConsistencyError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return kExitConsistency;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
