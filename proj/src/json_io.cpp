#include "steerjm/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace steerjm {

namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
            throw ParseError("matrix rows have inconsistent lengths");
        for (int c = 0; c < cols; ++c) {
            const json& e = j[r][c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ParseError("matrix entry must be [re, im]");
            m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
        }
    }
    if (!m.all_finite()) throw ParseError("matrix entry not finite");
    return m;
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::vector<HermitianOperator>> elements_from_json(const json& j, int dim) {
    if (!j.contains("settings") || !j["settings"].is_array() || j["settings"].empty())
        throw ParseError("missing or empty 'settings' array");
    std::vector<std::vector<HermitianOperator>> out;
    for (const json& s : j["settings"]) {
        if (!s.contains("outcomes") || !s["outcomes"].is_array() || s["outcomes"].empty())
            throw ParseError("setting missing 'outcomes' array");
        std::vector<HermitianOperator> ops;
        for (const json& o : s["outcomes"]) {
            ComplexMatrix m = matrix_from_json(o);
            if (m.rows() != dim || m.cols() != dim)
                throw ParseError("matrix dimension does not match 'dim'");
            try {
                ops.push_back(HermitianOperator(m, 1e-9));
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what());
            }
        }
        out.push_back(std::move(ops));
    }
    return out;
}

int dim_from_json(const json& j) {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw ParseError("missing integer 'dim'");
    const int d = j["dim"].get<int>();
    if (d < 1 || d > 64) throw ParseError("'dim' out of range");
    return d;
}

json elements_to_json(const std::vector<std::vector<HermitianOperator>>& els) {
    json settings = json::array();
    for (const auto& s : els) {
        json outcomes = json::array();
        for (const HermitianOperator& o : s) outcomes.push_back(matrix_to_json(o.mat()));
        settings.push_back(json{{"outcomes", outcomes}});
    }
    return settings;
}

}  // namespace

StateAssemblage parse_state_assemblage(const std::string& text) {
    const json j = parse_or_throw(text);
    StateAssemblage a;
    a.dim_b = dim_from_json(j);
    a.elements = elements_from_json(j, a.dim_b);
    return a;
}

MeasurementAssemblage parse_measurement_assemblage(const std::string& text) {
    const json j = parse_or_throw(text);
    MeasurementAssemblage m;
    m.dim = dim_from_json(j);
    m.elements = elements_from_json(j, m.dim);
    return m;
}

std::string json_assemblage_kind(const std::string& text) {
    const json j = parse_or_throw(text);
    if (j.contains("kind") && j["kind"].is_string()) return j["kind"].get<std::string>();
    return "";
}

std::string serialize(const StateAssemblage& a) {
    json j{{"kind", "state"}, {"dim", a.dim_b}, {"settings", elements_to_json(a.elements)}};
    return j.dump(2);
}

std::string serialize(const MeasurementAssemblage& m) {
    json j{{"kind", "measurement"}, {"dim", m.dim}, {"settings", elements_to_json(m.elements)}};
    return j.dump(2);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << text;
}

}  // namespace steerjm
