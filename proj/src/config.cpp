#include "cellsmith/config.hpp"

#include <fstream>
#include <stdexcept>

namespace cellsmith {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_num(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad value for " + key + ": " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    double v = parse_num(key, value);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw std::invalid_argument("bad value for " + key + ": " + value);
    return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("bad value for " + key + ": " + value);
}

}  // namespace

double RunConfig::sizing_load() const {
    // matches a fanout-of-four load on a minimum-width two-fin inverter input
    if (load >= 0) return load;
    return 4.0 * model.cg * 2 * min_fins;
}

std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw std::runtime_error(path + ": expected key = value: " + t);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty()) throw std::runtime_error(path + ": empty key: " + t);
        kv[key] = value;
    }
    return kv;
}

RunConfig apply_config_kv(const std::map<std::string, std::string>& kv, RunConfig base) {
    for (const auto& [key, value] : kv) {
        if (key == "arch")
            base.arch = value;
        else if (key == "min_fins")
            base.min_fins = parse_int(key, value);
        else if (key == "max_fins")
            base.max_fins = parse_int(key, value);
        else if (key == "limit")
            base.placement_limit = parse_int(key, value);
        else if (key == "max_width_slack")
            base.max_width_slack = parse_int(key, value);
        else if (key == "top_n")
            base.top_n = parse_int(key, value);
        else if (key == "load")
            base.load = parse_num(key, value);
        else if (key == "pin_cap_g")
            base.pin_cap_g = parse_num(key, value);
        else if (key == "pin_cap_m")
            base.pin_cap_m = parse_num(key, value);
        else if (key == "r1")
            base.model.r1 = parse_num(key, value);
        else if (key == "cg")
            base.model.cg = parse_num(key, value);
        else if (key == "cd")
            base.model.cd = parse_num(key, value);
        else if (key == "cw")
            base.model.cw = parse_num(key, value);
        else if (key == "beta")
            base.model.beta = parse_num(key, value);
        else if (key == "out")
            base.out_dir = value;
        else if (key == "overrides")
            base.overrides_path = value;
        else if (key == "ascii")
            base.ascii = parse_bool(key, value);
        else if (key == "full")
            base.full_dump = parse_bool(key, value);
        else
            throw std::invalid_argument("unknown config key: " + key);
    }
    return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    return apply_config_kv(read_kv_file(path), base);
}

std::map<std::string, std::map<std::string, int>> load_overrides_file(const std::string& path) {
    std::map<std::string, std::map<std::string, int>> overrides;
    for (const auto& [key, value] : read_kv_file(path)) {
        std::size_t dot = key.rfind('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == key.size())
            throw std::invalid_argument(path + ": override key must be cell.group: " + key);
        int fins = parse_int(key, value);
        if (fins < 1) throw std::invalid_argument(path + ": fins must be at least 1: " + key);
        overrides[key.substr(0, dot)][key.substr(dot + 1)] = fins;
    }
    return overrides;
}

}
