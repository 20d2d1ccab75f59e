#pragma once

#include <map>
#include <string>
#include <vector>

#include "cellsmith/netlist.hpp"

namespace cellsmith {

struct DelayModel {
    double r1 = 1.0;
    double cg = 1.0;
    double cd = 0.5;
    double cw = 1.0;
    double beta = 1.1;
};

struct SharingGroup {
    Device device = Device::PMOS;
    std::string id;
    std::vector<int> members;
};

struct SizingCandidate {
    std::vector<int> fins;
    std::string label;
    double rise_delay = 0;
    double fall_delay = 0;
    double rise_slew = 0;
    double fall_slew = 0;
    double balance = 0;
    bool evaluable = true;
    std::string note;
};

struct NetlistEval {
    double rise_delay = 0;
    double fall_delay = 0;
    double rise_slew = 0;
    double fall_slew = 0;
    double rise_cap = 0;
    double fall_cap = 0;
    bool evaluable = true;
    std::string note;
};

std::vector<SharingGroup> derive_sharing_groups(const CellNetlist& netlist, Device device);
std::vector<SharingGroup> all_sharing_groups(const CellNetlist& netlist);

std::vector<SizingCandidate> enumerate_sizings(const std::vector<SharingGroup>& groups,
                                               int min_fins, int max_fins);

NetlistEval evaluate_netlist(const CellNetlist& netlist, const DelayModel& model, double load);

void evaluate_candidate(SizingCandidate& candidate, const std::vector<SharingGroup>& groups,
                        const CellNetlist& netlist, const DelayModel& model, double load);

const SizingCandidate& select_balanced(const std::vector<SizingCandidate>& candidates);

CellNetlist apply_sizing(const CellNetlist& netlist, const std::vector<SharingGroup>& groups,
                         const std::vector<int>& fins);

double input_pin_cap(const CellNetlist& netlist, const std::string& pin, const DelayModel& model);

struct ShapeKey {
    Device device = Device::PMOS;
    int depth = 0;

    bool operator<(const ShapeKey& o) const {
        if (device != o.device) return device < o.device;
        return depth < o.depth;
    }
};

int group_series_depth(const CellNetlist& netlist, const SharingGroup& group);

std::map<ShapeKey, int> basic_sizing_table(const std::vector<CellNetlist>& basics,
                                           const DelayModel& model, double load, int min_fins,
                                           int max_fins, std::vector<std::string>& warnings);

CellNetlist propagate_to_complex(const CellNetlist& cell, const std::map<ShapeKey, int>& table,
                                 int arch_max_fins, std::vector<std::string>& warnings);

}
