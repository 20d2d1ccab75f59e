#pragma once

#include <map>
#include <string>

#include "cellsmith/sizing.hpp"

namespace cellsmith {

struct RunConfig {
    std::string arch = "9T";
    int min_fins = 2;
    int max_fins = 3;
    int placement_limit = 20000;
    int max_width_slack = 2;
    int top_n = 10;
    double load = -1;
    double pin_cap_g = 1.0;
    double pin_cap_m = 0.5;
    DelayModel model;
    std::string out_dir = ".";
    std::string overrides_path;
    bool ascii = false;
    bool full_dump = false;

    double sizing_load() const;
};

std::map<std::string, std::string> read_kv_file(const std::string& path);

RunConfig apply_config_kv(const std::map<std::string, std::string>& kv, RunConfig base);
RunConfig load_config_file(const std::string& path, RunConfig base);

std::map<std::string, std::map<std::string, int>> load_overrides_file(const std::string& path);

}
