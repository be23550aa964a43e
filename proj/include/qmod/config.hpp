#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmod/figures.hpp"

namespace qmod {

/// Contents of an INI-style config file. Keys at the top level:
///   gamma lambda delta omega theta phi units tau_max points
///   out_dir svg exact_segments jobs
/// [sweep]:   scenario axis_start axis_stop axis_step taus eps refine
/// [panel.X]: the parameter keys, applied only to the panel named X.
/// Anything not set stays unset; command-line flags are layered on top.
struct ConfigFile {
    ParamOverrides params;
    std::map<std::string, ParamOverrides> panels;
    std::optional<std::string> out_dir;
    std::optional<bool> svg;
    std::optional<bool> exact_segments;
    std::optional<unsigned> jobs;

    std::optional<std::string> scenario;
    std::optional<double> axis_start, axis_stop, axis_step;
    std::optional<std::vector<double>> taus;
    std::optional<double> eps;
    std::optional<bool> refine;
};

/// Throws ValidationError naming the key on malformed values or unknown keys.
ConfigFile parse_config(std::istream& in);
/// Throws IoError if the file cannot be read.
ConfigFile load_config(const std::filesystem::path& path);

/// "0.4,0.6,0.8" or "start:stop:step".
std::vector<double> parse_number_list(std::string_view text, const std::string& field);

} // namespace qmod
