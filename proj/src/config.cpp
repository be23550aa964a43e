#include "qmod/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <set>

#include "qmod/errors.hpp"

namespace qmod {

namespace pt = boost::property_tree;

namespace {

double to_number(const std::string& text, const std::string& field)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ValidationError(field, "not a number: '" + text + "'");
    }
    if (used != text.size())
        throw ValidationError(field, "not a number: '" + text + "'");
    return v;
}

bool to_bool(const std::string& text, const std::string& field)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ValidationError(field, "expected true or false, got '" + text + "'");
}

std::size_t to_count(const std::string& text, const std::string& field)
{
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size())
        throw ValidationError(field, "expected a non-negative integer, got '" + text + "'");
    return v;
}

bool read_param(ParamOverrides& o, const std::string& key, const std::string& value, const std::string& field)
{
    if (key == "gamma") o.gamma = to_number(value, field);
    else if (key == "lambda") o.lambda = to_number(value, field);
    else if (key == "delta") o.delta = to_number(value, field);
    else if (key == "omega") o.omega = to_number(value, field);
    else if (key == "theta") o.theta = to_number(value, field);
    else if (key == "phi") o.phi = to_number(value, field);
    else if (key == "units") o.unit = parse_time_unit(value);
    else if (key == "tau_max") o.tau_max = to_number(value, field);
    else if (key == "points") o.points = to_count(value, field);
    else return false;
    return true;
}

} // namespace

std::vector<double> parse_number_list(std::string_view text, const std::string& field)
{
    const std::string s(text);
    if (s.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::size_t start = 0;
        while (true) {
            const auto colon = s.find(':', start);
            parts.push_back(to_number(s.substr(start, colon - start), field));
            if (colon == std::string::npos) break;
            start = colon + 1;
        }
        if (parts.size() != 3)
            throw ValidationError(field, "range must be start:stop:step");
        try {
            return uniform_axis(parts[0], parts[1], parts[2]);
        } catch (const ValidationError& e) {
            throw ValidationError(field, e.what());
        }
    }
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        out.push_back(to_number(item, field));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

ConfigFile parse_config(std::istream& in)
{
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError("config", e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    ConfigFile cfg;
    for (const auto& [key, node] : tree) {
        if (node.empty()) {
            const std::string value = node.data();
            if (read_param(cfg.params, key, value, key)) continue;
            if (key == "out_dir") cfg.out_dir = value;
            else if (key == "svg") cfg.svg = to_bool(value, key);
            else if (key == "exact_segments") cfg.exact_segments = to_bool(value, key);
            else if (key == "jobs") cfg.jobs = static_cast<unsigned>(to_count(value, key));
            else throw ValidationError(key, "unknown config key");
            continue;
        }
        if (key == "sweep") {
            for (const auto& [k, v] : node) {
                const std::string field = "sweep." + k;
                const std::string value = v.data();
                if (k == "scenario") cfg.scenario = value;
                else if (k == "axis_start") cfg.axis_start = to_number(value, field);
                else if (k == "axis_stop") cfg.axis_stop = to_number(value, field);
                else if (k == "axis_step") cfg.axis_step = to_number(value, field);
                else if (k == "taus") cfg.taus = parse_number_list(value, field);
                else if (k == "eps") cfg.eps = to_number(value, field);
                else if (k == "refine") cfg.refine = to_bool(value, field);
                else if (!read_param(cfg.params, k, value, field))
                    throw ValidationError(field, "unknown config key");
            }
            continue;
        }
        if (key.rfind("panel.", 0) == 0) {
            ParamOverrides& o = cfg.panels[key.substr(6)];
            for (const auto& [k, v] : node)
                if (!read_param(o, k, v.data(), key + "." + k))
                    throw ValidationError(key + "." + k, "unknown config key");
            continue;
        }
        throw ValidationError(key, "unknown config section");
    }
    return cfg;
}

ConfigFile load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path.string());
    return parse_config(in);
}

} // namespace qmod
