#pragma once

#include <string>

#include "steerjm/assemblage.hpp"

namespace steerjm {

/// JSON schema for assemblages:
///   {"kind": "state"|"measurement" (optional),
///    "dim": d,
///    "settings": [{"outcomes": [matrix, ...]}, ...]}
/// where matrix is a list of rows and each entry is [re, im].
/// Round-trip parse -> serialize is value-identical for finite doubles.

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

StateAssemblage parse_state_assemblage(const std::string& json_text);
MeasurementAssemblage parse_measurement_assemblage(const std::string& json_text);

/// "state", "measurement", or "" when no kind field is present.
std::string json_assemblage_kind(const std::string& json_text);

std::string serialize(const StateAssemblage& a);
std::string serialize(const MeasurementAssemblage& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace steerjm
