#pragma once

#include <string>
#include <vector>

#include "cellsmith/arch.hpp"
#include "cellsmith/graph.hpp"
#include "cellsmith/netlist.hpp"

namespace cellsmith {

struct Column {
    std::string pu_gate;
    std::string pd_gate;
    std::string pu_diff_left;
    std::string pu_diff_right;
    std::string pd_diff_left;
    std::string pd_diff_right;
    int pu_fins = 0;
    int pd_fins = 0;
};

struct PinAccess {
    std::string pin;
    int accessible = 0;
    int total = 0;
};

struct PinCap {
    std::string pin;
    double cap = 0;
};

struct ScoreBreakdown {
    int width = 0;
    std::vector<PinAccess> access;
    int min_access = 0;
    bool zero_access = false;
    std::vector<PinCap> pin_caps;
    double total_pin_cap = 0;
};

struct PlacementCandidate {
    std::vector<std::string> pu_sequence;
    std::vector<std::string> pd_sequence;
    int width = 0;
    std::vector<Column> columns;
    bool consistent = false;
    ScoreBreakdown score;

    std::string pu_string() const;
    std::string pd_string() const;
    std::string pair_string() const;
};

struct PlacementSearch {
    int min_width = 0;
    bool truncated = false;
    std::vector<PlacementCandidate> candidates;
};

std::vector<PlacementCandidate> find_consistent_placements(const DiffusionGraph& pu,
                                                           const DiffusionGraph& pd, int limit);

PlacementSearch find_generalized_placements(const DiffusionGraph& pu, const DiffusionGraph& pd,
                                            int max_width, int limit);

int minimum_width(const DiffusionGraph& pu, const DiffusionGraph& pd);

// Candidates must be scored: of each mirror pair the rank-preferred orientation is kept.
void dedup_mirrors(std::vector<PlacementCandidate>& candidates);

struct Strap {
    std::string net;
    int left = 0;
    int right = 0;
    int track = 0;
};

std::vector<Strap> route_straps(const PlacementCandidate& candidate, const CellNetlist& netlist);

void score_pin_access(PlacementCandidate& candidate, const CellNetlist& netlist,
                      const Architecture& arch);

void score_pin_cap(PlacementCandidate& candidate, const CellNetlist& netlist,
                   double g_const = 1.0, double m_const = 0.5);

bool rank_less(const PlacementCandidate& a, const PlacementCandidate& b);
void rank_candidates(std::vector<PlacementCandidate>& candidates);

enum class LayoutFormat { Json, Ascii };

std::string emit_layout(const PlacementCandidate& candidate, const CellNetlist& netlist,
                        const Architecture& arch, LayoutFormat format);

}
