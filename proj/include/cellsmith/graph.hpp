#pragma once

#include <string>
#include <vector>

#include "cellsmith/netlist.hpp"

namespace cellsmith {

inline const std::string kBreak = "0";

struct GraphEdge {
    int id;
    int a;
    int b;
    std::string gate;
    int fins;
};

struct DiffusionGraph {
    Device device = Device::PMOS;
    std::vector<std::string> nodes;
    std::vector<GraphEdge> edges;

    int node_index(const std::string& net) const;
    int degree(int node) const;
};

enum class EulerKind { Closed, Open, None };

struct EulerStatus {
    EulerKind kind = EulerKind::None;
    std::vector<std::string> endpoints;
    std::vector<std::string> odd_nodes;
    int components = 0;
};

struct TrailStep {
    int edge;
    int from;
    int to;
};

struct Trail {
    std::vector<TrailStep> steps;
};

struct TrailSet {
    std::vector<Trail> trails;
};

struct Decomposition {
    int minimum = 0;
    std::vector<TrailSet> sets;
};

DiffusionGraph build_diffusion_graph(const CellNetlist& netlist, Device device);

EulerStatus eulerian_status(const DiffusionGraph& g);

int min_trail_count(const DiffusionGraph& g);

std::vector<Trail> enumerate_euler_paths(const DiffusionGraph& g, int limit);

Decomposition decompose_into_trails(const DiffusionGraph& g, int max_trails, int limit);

std::string gate_string(const DiffusionGraph& g, const Trail& t);
std::string node_string(const DiffusionGraph& g, const Trail& t);

std::string dot_dump(const DiffusionGraph& g, const std::string& graph_name);

}
