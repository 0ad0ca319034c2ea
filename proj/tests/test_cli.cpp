#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "steerjm/json_io.hpp"
#include "steerjm/qubit.hpp"

using namespace steerjm;
using nlohmann::json;

namespace {

std::string cli_path() {
    const char* p = std::getenv("STEERJM_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::filesystem::path temp_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() / "steerjm_cli_tests";
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string write_temp(const std::string& name, const std::string& text) {
    const std::filesystem::path p = temp_dir() / name;
    write_file(p.string(), text);
    return p.string();
}

std::string noisy_pair_json(double eta) {
    BlochObservable o1, o2;
    o1.r = {eta, 0.0, 0.0};
    o2.r = {0.0, 0.0, eta};
    return serialize(assemblage_from_bloch({o1, o2}));
}

std::string state_from_pair_json(double eta) {
    BlochObservable o1, o2;
    o1.r = {eta, 0.0, 0.0};
    o2.r = {0.0, 0.0, eta};
    const MeasurementAssemblage m = assemblage_from_bloch({o1, o2});
    StateAssemblage a;
    a.dim_b = 2;
    a.elements.resize(2);
    for (int x = 0; x < 2; ++x)
        for (int aa = 0; aa < 2; ++aa)
            a.elements[x].push_back(HermitianOperator(0.5 * m.elements[x][aa].mat()));
    return serialize(a);
}

json run_json(const std::string& subcmd, const std::string& input_json,
              const std::string& stem, int expected_rc = 0) {
    const std::string in = write_temp(stem + "_in.json", input_json);
    const std::filesystem::path out = temp_dir() / (stem + "_out.json");
    const int rc = run(subcmd + " --input " + in + " --output " + out.string());
    REQUIRE(rc == expected_rc);
    if (expected_rc != 0) return json();
    return json::parse(read_file(out.string()));
}

}  // namespace

TEST_CASE("se-map on a valid state assemblage") {
    const json out = run_json("se-map", state_from_pair_json(0.9), "semap_ok");
    CHECK(out["kind"] == "measurement");
    CHECK(out["rank"] == 2);
    REQUIRE(out["settings"].size() == 2);
    // rho_B = 1/2, so the mapped effects are 2 rho_{a|x} = M_{a|x}: trace 1.
    const json& e = out["settings"][0]["outcomes"][0];
    const double tr = e[0][0][0].get<double>() + e[1][1][0].get<double>();
    CHECK(tr == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("se-map flags a rank-one trivial case") {
    // rho_{a|x} = P(a|x) |0><0|.
    StateAssemblage a;
    a.dim_b = 2;
    ComplexMatrix p00(2, 2);
    p00(0, 0) = 1.0;
    a.elements.push_back({HermitianOperator(0.6 * p00), HermitianOperator(0.4 * p00)});
    const json out = run_json("se-map", serialize(a), "semap_rank1");
    CHECK(out["rank"] == 1);
    CHECK(out.contains("note"));
}

TEST_CASE("se-map rejects invalid input with exit code 3 and names the element") {
    StateAssemblage a;
    a.dim_b = 2;
    a.elements.push_back(
        {HermitianOperator(0.75 * ComplexMatrix::identity(2)),
         HermitianOperator(-0.25 * ComplexMatrix::identity(2))});
    const std::string in = write_temp("semap_bad_in.json", serialize(a));
    const std::string err = (temp_dir() / "semap_bad_err.txt").string();
    const int rc = std::system(
        (cli_path() + " se-map --input " + in + " 2> " + err + " > /dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 3);
    const std::string msg = read_file(err);
    CHECK(msg.find("x=0") != std::string::npos);
    CHECK(msg.find("a=1") != std::string::npos);
}

TEST_CASE("malformed JSON exits with code 2") {
    const std::string in = write_temp("malformed.json", "{not json");
    CHECK(run("se-map --input " + in) == 2);
    CHECK(run("check --input " + in) == 2);
}

TEST_CASE("unknown flags exit with code 2") {
    CHECK(run("check --no-such-flag") == 2);
    CHECK(run("no-such-subcommand") == 2);
}

TEST_CASE("check verdicts for measurement assemblages") {
    json out = run_json("check", noisy_pair_json(0.72), "check_steer");
    CHECK(out["kind"] == "measurement");
    CHECK(out["verdict"] == "not_jm");
    CHECK(out["status"] == "incompatible");
    CHECK(out["robustness"].get<double>() > 1e-4);
    CHECK(out.contains("certificate_violation"));

    out = run_json("check", noisy_pair_json(0.70), "check_jm");
    CHECK(out["verdict"] == "jm");
    CHECK(out["status"] == "compatible");
}

TEST_CASE("check verdicts for state assemblages") {
    json out = run_json("check", state_from_pair_json(0.72), "check_state_steer");
    CHECK(out["kind"] == "state");
    CHECK(out["verdict"] == "steerable");
    CHECK(out["se_verdict"] == "not_jm");
    CHECK(out["robustness"].get<double>() ==
          doctest::Approx(out["se_robustness"].get<double>()).epsilon(1e-6));

    out = run_json("check", state_from_pair_json(0.70), "check_state_ok");
    CHECK(out["verdict"] == "unsteerable");
}

TEST_CASE("check reports the boundary case") {
    const json out =
        run_json("check", noisy_pair_json(1.0 / std::sqrt(2.0)), "check_boundary");
    CHECK(out["status"] == "boundary");
}

TEST_CASE("robustness kinds") {
    json out = run_json("robustness --kind general", noisy_pair_json(1.0), "rob_gen");
    CHECK(out["value"].get<double>() ==
          doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-6));
    CHECK(out["lambda"].get<double>() ==
          doctest::Approx((2.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-6));
    CHECK(out.contains("noise"));

    out = run_json("robustness --kind white", noisy_pair_json(1.0), "rob_white");
    CHECK(out["value"].get<double>() ==
          doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-5));

    out = run_json("robustness --kind white --bias 1.0", noisy_pair_json(1.0), "rob_biased");
    CHECK(out["value"].get<double>() ==
          doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-5));
    CHECK(out["bias"].get<double>() == doctest::Approx(1.0));

    out = run_json("robustness --kind weight", noisy_pair_json(1.0), "rob_weight");
    CHECK(out["value"].get<double>() > 0.1);
    CHECK(out["value"].get<double>() < 1.0);

    const std::string in = write_temp("rob_badkind_in.json", noisy_pair_json(1.0));
    CHECK(run("robustness --kind bogus --input " + in) == 2);
}

TEST_CASE("steering-region scan output and determinism") {
    const std::string out1 = (temp_dir() / "fig1_a.csv").string();
    const std::string out2 = (temp_dir() / "fig1_b.csv").string();
    const std::string args = "scan-fig1 --steps 5 --output ";
    REQUIRE(run(args + out1) == 0);
    REQUIRE(run(args + out2) == 0);
    const std::string csv = read_file(out1);
    CHECK(csv == read_file(out2));  // byte-identical reruns

    // Header with provenance comments, then the column line.
    CHECK(csv.rfind("# steerjm", 0) == 0);
    CHECK(csv.find("lambda,r,theta,busch_value,yu_oh_margin,"
                   "steerable_inner,steerable_outer,valid") != std::string::npos);

    // All default-grid rows are physically valid, and the inner criterion
    // never fires without the outer one.
    std::istringstream lines(csv);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("lambda", 0) == 0) continue;
        ++rows;
        CHECK(line.back() == '1');  // valid flag
        std::istringstream fields(line);
        std::string f;
        std::vector<std::string> cols;
        while (std::getline(fields, f, ',')) cols.push_back(f);
        REQUIRE(cols.size() == 8);
        if (cols[5] == "1") CHECK(cols[6] == "1");
    }
    CHECK(rows == 5 * 5 * 5);
}

TEST_CASE("noise-threshold scan output") {
    const std::string out = (temp_dir() / "fig2.csv").string();
    REQUIRE(run("scan-fig2 --steps 2 --theta-min 0.7853981633974483 "
                "--theta-max 1.5707963267948966 --output " + out) == 0);
    const std::string csv = read_file(out);
    CHECK(csv.find("theta,lambda_g,lambda_w_b0,lambda_w_b05,lambda_w_b08,lambda_w_b1,ok") !=
          std::string::npos);

    // The last row is theta = pi/2 with the known thresholds.
    std::istringstream lines(csv);
    std::string line, last;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line.rfind("theta", 0) != 0) last = line;
    REQUIRE_FALSE(last.empty());
    std::istringstream fields(last);
    std::string f;
    std::vector<double> cols;
    while (std::getline(fields, f, ',')) cols.push_back(std::stod(f));
    REQUIRE(cols.size() == 7);
    CHECK(cols[1] == doctest::Approx((2.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-4));
    CHECK(cols[2] == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-4));
    CHECK(cols[5] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-4));
    // Thresholds grow with the noise bias.
    CHECK(cols[2] <= cols[3] + 1e-7);
    CHECK(cols[3] <= cols[4] + 1e-7);
    CHECK(cols[4] <= cols[5] + 1e-7);
    CHECK(cols[6] == doctest::Approx(1.0));  // ok flag
}

TEST_CASE("version flag") {
    CHECK(run("--version") == 0);
}
