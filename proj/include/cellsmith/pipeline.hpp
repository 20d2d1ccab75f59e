#pragma once

#include <string>
#include <vector>

#include "cellsmith/config.hpp"
#include "cellsmith/netlist.hpp"

namespace cellsmith {

struct CellResult {
    std::string cell;
    std::string arch;
    bool ok = false;
    bool feasible = false;
    int width = 0;
    double width_nm = 0;
    double fo4_delay = 0;
    double fo4_power = 0;
    double total_pin_cap = 0;
    int sizing_candidates = 0;
    int placement_candidates = 0;
    std::string winner_label;
    std::string error;
};

struct SynthOutcome {
    int exit_code = 0;
    std::vector<CellResult> results;
};

SynthOutcome run_synth(const std::vector<std::string>& deck_paths, const RunConfig& cfg);

std::string library_report_json(const std::vector<CellResult>& rows);

std::string fo4_report_json(const std::string& lib_dir, const std::vector<std::string>& arch_names,
                            const DelayModel& model, const std::vector<std::string>& basic_cells);

}
