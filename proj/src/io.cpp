#include "lambdasim/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lambdasim/errors.hpp"

namespace lambdasim {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_spectrum_csv(const std::string& path, const Spectrum& s,
                        const std::vector<std::pair<std::string, std::string>>& header_kv) {
    std::ofstream f(path, std::ios::binary);  // binary: no platform newline games
    if (!f) throw ConfigError("cannot open " + path + " for writing");
    f << "# scenario=" << s.meta.scenario << "\n";
    for (const auto& [k, v] : header_kv) f << "# " << k << "=" << v << "\n";
    f << "# grid.lo=" << fmt_double(s.grid.lo) << "\n";
    f << "# grid.hi=" << fmt_double(s.grid.hi) << "\n";
    f << "# grid.count=" << s.grid.count << "\n";
    f << "# norm=" << fmt_double(s.meta.norm) << "\n";
    f << "# columns=detuning,intensity\n";
    for (int i = 0; i < s.grid.count; ++i)
        f << fmt_double(s.grid.omega(i)) << ","
          << fmt_double(s.values[static_cast<std::size_t>(i)]) << "\n";
    if (!f) throw ConfigError("failed while writing " + path);
}

namespace {
double parse_double(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || (end && *end != '\0'))
        throw ConfigError("malformed number '" + text + "' in " + what);
    return v;
}
}  // namespace

SpectrumFile read_spectrum_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path);

    SpectrumFile out;
    std::vector<double> detunings, values;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body.front() == ' ') body.erase(0, 1);
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                out.header[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("malformed data row '" + line + "' in " + path);
        detunings.push_back(parse_double(line.substr(0, comma), path));
        values.push_back(parse_double(line.substr(comma + 1), path));
    }
    if (values.size() < 2) throw ConfigError("spectrum file " + path + " holds fewer than 2 rows");

    Spectrum& s = out.spectrum;
    if (out.header.count("grid.lo") && out.header.count("grid.hi") &&
        out.header.count("grid.count")) {
        s.grid.lo = parse_double(out.header.at("grid.lo"), path);
        s.grid.hi = parse_double(out.header.at("grid.hi"), path);
        s.grid.count = static_cast<int>(parse_double(out.header.at("grid.count"), path));
        if (s.grid.count != static_cast<int>(values.size()))
            throw ConfigError("row count does not match grid.count in " + path);
    } else {
        s.grid.lo = detunings.front();
        s.grid.hi = detunings.back();
        s.grid.count = static_cast<int>(values.size());
    }
    s.grid.validate();
    s.values = std::move(values);
    if (out.header.count("scenario")) s.meta.scenario = out.header.at("scenario");
    if (out.header.count("norm")) s.meta.norm = parse_double(out.header.at("norm"), path);
    return out;
}

ordered_json field_state_to_json(const FieldState& state) {
    ordered_json amps = ordered_json::array();
    for (const cplx& a : state.amps()) amps.push_back({a.real(), a.imag()});
    return ordered_json{{"n_min", state.n_min()}, {"amplitudes", std::move(amps)}};
}

FieldState field_state_from_json(const ordered_json& j) {
    if (!j.contains("n_min") || !j.contains("amplitudes"))
        throw ConfigError("field state JSON needs 'n_min' and 'amplitudes'");
    std::vector<cplx> amps;
    for (const auto& pair : j.at("amplitudes")) {
        if (!pair.is_array() || pair.size() != 2)
            throw ConfigError("field state amplitudes must be [re, im] pairs");
        amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return FieldState::raw(j.at("n_min").get<int>(), std::move(amps));
}

ordered_json comparison_report_to_json(const ComparisonReport& r) {
    return ordered_json{
        {"l2_rel", r.l2_rel},
        {"sup_rel", r.sup_rel},
        {"peaks_a", r.peaks_a},
        {"peaks_b", r.peaks_b},
        {"dip_a", {{"location", r.dip_a.location}, {"value", r.dip_a.value}}},
    };
}

void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path + " for writing");
    f << j.dump(2) << "\n";
    if (!f) throw ConfigError("failed while writing " + path);
}

}  // namespace lambdasim
