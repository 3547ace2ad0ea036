// io.hpp — Deterministic artifact serialization: spectrum CSV, field-state
// JSON and comparison-report JSON. Reruns with the same inputs produce
// byte-identical files.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lambdasim/field_state.hpp"
#include "lambdasim/spectrum.hpp"

namespace lambdasim {

using ordered_json = nlohmann::ordered_json;

// Full-precision, locale-independent double formatting (%.17g): parses back
// to the identical bit pattern.
std::string fmt_double(double v);

// Spectrum CSV layout:
//   # key=value            (scenario, resolved config, norm, columns)
//   <detuning>,<intensity> (full double precision, one row per grid sample)
void write_spectrum_csv(const std::string& path, const Spectrum& s,
                        const std::vector<std::pair<std::string, std::string>>& header_kv);

struct SpectrumFile {
    Spectrum spectrum;
    std::map<std::string, std::string> header;
};

// Throws ConfigError on malformed files.
SpectrumFile read_spectrum_csv(const std::string& path);

ordered_json field_state_to_json(const FieldState& state);
FieldState field_state_from_json(const ordered_json& j);

ordered_json comparison_report_to_json(const ComparisonReport& r);

// Writes pretty-printed JSON with a trailing newline.
void write_json_file(const std::string& path, const ordered_json& j);

}  // namespace lambdasim
