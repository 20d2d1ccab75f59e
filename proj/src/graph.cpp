#include "cellsmith/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cellsmith {

int DiffusionGraph::node_index(const std::string& net) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == net) return static_cast<int>(i);
    return -1;
}

int DiffusionGraph::degree(int node) const {
    int d = 0;
    for (const auto& e : edges) {
        if (e.a == node) ++d;
        if (e.b == node) ++d;
    }
    return d;
}

DiffusionGraph build_diffusion_graph(const CellNetlist& netlist, Device device) {
    DiffusionGraph g;
    g.device = device;
    std::set<std::string> nets;
    for (const auto& t : netlist.transistors) {
        if (t.device != device) continue;
        if (t.source == t.drain)
            throw std::invalid_argument("transistor " + t.name + " is a self-loop (source = drain)");
        nets.insert(t.source);
        nets.insert(t.drain);
    }
    if (nets.empty())
        throw std::invalid_argument(netlist.name + " has no " + device_name(device) + " transistors");
    g.nodes.assign(nets.begin(), nets.end());
    for (size_t i = 0; i < netlist.transistors.size(); ++i) {
        const auto& t = netlist.transistors[i];
        if (t.device != device) continue;
        GraphEdge e;
        e.id = static_cast<int>(i);
        e.a = g.node_index(t.source);
        e.b = g.node_index(t.drain);
        e.gate = t.gate;
        e.fins = t.fins;
        g.edges.push_back(e);
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const GraphEdge& x, const GraphEdge& y) {
        if (x.gate != y.gate) return x.gate < y.gate;
        return x.id < y.id;
    });
    return g;
}

namespace {

// Component ids for non-isolated nodes only; isolated nodes get -1.
std::vector<int> edge_components(const DiffusionGraph& g, int* count_out) {
    int n = static_cast<int>(g.nodes.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::vector<bool> touched(n, false);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : g.edges) {
        touched[e.a] = touched[e.b] = true;
        parent[find(e.a)] = find(e.b);
    }
    std::map<int, int> roots;
    std::vector<int> comp(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!touched[i]) continue;
        int r = find(i);
        auto it = roots.find(r);
        if (it == roots.end()) it = roots.emplace(r, static_cast<int>(roots.size())).first;
        comp[i] = it->second;
    }
    if (count_out) *count_out = static_cast<int>(roots.size());
    return comp;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ",";
        out += parts[i];
    }
    return out;
}

Trail reversed(const Trail& t) {
    Trail r;
    for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it)
        r.steps.push_back({it->edge, it->to, it->from});
    return r;
}

// Orientation with the smaller (gate string, node string) pair represents a trail.
Trail canonical_trail(const DiffusionGraph& g, const Trail& t) {
    Trail r = reversed(t);
    auto fw = std::make_pair(gate_string(g, t), node_string(g, t));
    auto rv = std::make_pair(gate_string(g, r), node_string(g, r));
    return rv < fw ? r : t;
}

std::string trail_class(const DiffusionGraph& g, const Trail& t) {
    std::string fw = gate_string(g, t);
    std::string rv = gate_string(g, reversed(t));
    return std::min(fw, rv);
}

struct TrailSearch {
    const DiffusionGraph& g;
    std::vector<std::vector<int>> adjacency;  // node -> edge indices, in sorted edge order

    explicit TrailSearch(const DiffusionGraph& graph) : g(graph) {
        adjacency.resize(g.nodes.size());
        for (size_t i = 0; i < g.edges.size(); ++i) {
            adjacency[g.edges[i].a].push_back(static_cast<int>(i));
            adjacency[g.edges[i].b].push_back(static_cast<int>(i));
        }
    }
};

}  // namespace

EulerStatus eulerian_status(const DiffusionGraph& g) {
    EulerStatus st;
    st.components = 0;
    edge_components(g, &st.components);
    std::vector<std::string> odd;
    for (size_t i = 0; i < g.nodes.size(); ++i)
        if (g.degree(static_cast<int>(i)) % 2 == 1) odd.push_back(g.nodes[i]);
    std::sort(odd.begin(), odd.end());
    if (st.components == 1 && odd.empty()) {
        st.kind = EulerKind::Closed;
    } else if (st.components == 1 && odd.size() == 2) {
        st.kind = EulerKind::Open;
        st.endpoints = odd;
    } else {
        st.kind = EulerKind::None;
        st.odd_nodes = odd;
    }
    return st;
}

int min_trail_count(const DiffusionGraph& g) {
    int comp_count = 0;
    std::vector<int> comp = edge_components(g, &comp_count);
    std::vector<int> odd(comp_count, 0);
    for (size_t i = 0; i < g.nodes.size(); ++i)
        if (comp[i] >= 0 && g.degree(static_cast<int>(i)) % 2 == 1) ++odd[comp[i]];
    int total = 0;
    for (int c = 0; c < comp_count; ++c) total += std::max(1, odd[c] / 2);
    return total;
}

std::vector<Trail> enumerate_euler_paths(const DiffusionGraph& g, int limit) {
    EulerStatus st = eulerian_status(g);
    if (st.kind == EulerKind::None)
        throw std::invalid_argument("graph is not eulerian");
    if (g.edges.size() > 63)
        throw std::invalid_argument("too many edges to enumerate");

    TrailSearch ts(g);
    std::vector<Trail> out;
    std::set<std::string> seen;
    int m = static_cast<int>(g.edges.size());

    std::vector<int> starts;
    if (st.kind == EulerKind::Open) {
        for (const auto& name : st.endpoints) starts.push_back(g.node_index(name));
    } else {
        std::vector<std::pair<std::string, int>> named;
        for (size_t i = 0; i < g.nodes.size(); ++i)
            if (g.degree(static_cast<int>(i)) > 0)
                named.emplace_back(g.nodes[i], static_cast<int>(i));
        std::sort(named.begin(), named.end());
        for (const auto& [_, i] : named) starts.push_back(i);
    }

    Trail cur;
    auto dfs = [&](auto&& self, int node, std::uint64_t used, int left) -> bool {
        if (static_cast<int>(out.size()) >= limit) return false;
        if (left == 0) {
            std::string cls = trail_class(g, cur);
            if (seen.insert(cls).second) out.push_back(canonical_trail(g, cur));
            return static_cast<int>(out.size()) < limit;
        }
        for (int ei : ts.adjacency[node]) {
            if (used & (1ULL << ei)) continue;
            const GraphEdge& e = g.edges[ei];
            int other = e.a == node ? e.b : e.a;
            cur.steps.push_back({ei, node, other});
            bool go = self(self, other, used | (1ULL << ei), left - 1);
            cur.steps.pop_back();
            if (!go) return false;
        }
        return true;
    };
    for (int s : starts) {
        if (!dfs(dfs, s, 0, m)) break;
    }
    return out;
}

Decomposition decompose_into_trails(const DiffusionGraph& g, int max_trails, int limit) {
    Decomposition result;
    result.minimum = min_trail_count(g);
    if (max_trails < result.minimum || g.edges.empty()) return result;
    if (g.edges.size() > 63) throw std::invalid_argument("too many edges to enumerate");

    TrailSearch ts(g);
    int m = static_cast<int>(g.edges.size());
    std::uint64_t full = (m == 63) ? ~0ULL >> 1 : (1ULL << m) - 1;

    std::map<std::string, TrailSet> found;
    std::vector<Trail> partial;

    // Each recursion level starts the trail that covers the smallest unused edge,
    // so every partition is produced from exactly one trail ordering.
    auto cover = [&](auto&& self, std::uint64_t used) -> void {
        if (static_cast<int>(found.size()) >= limit * 4) return;
        if (used == full) {
            TrailSet set;
            for (const auto& t : partial) set.trails.push_back(canonical_trail(g, t));
            std::sort(set.trails.begin(), set.trails.end(), [&](const Trail& x, const Trail& y) {
                auto kx = std::make_pair(gate_string(g, x), node_string(g, x));
                auto ky = std::make_pair(gate_string(g, y), node_string(g, y));
                return kx < ky;
            });
            std::vector<std::string> classes;
            for (const auto& t : set.trails) classes.push_back(trail_class(g, t));
            std::sort(classes.begin(), classes.end());
            std::string key = std::to_string(set.trails.size()) + "|" + join(classes);
            found.emplace(key, set);
            return;
        }
        if (static_cast<int>(partial.size()) >= max_trails) return;
        int need = 0;
        while (used & (1ULL << need)) ++need;

        Trail cur;
        auto walk = [&](auto&& wself, int node, std::uint64_t wused) -> void {
            if (!cur.steps.empty()) {
                bool has_need = false;
                for (const auto& s : cur.steps)
                    if (s.edge == need) has_need = true;
                if (has_need) {
                    partial.push_back(cur);
                    self(self, wused);
                    partial.pop_back();
                }
            }
            for (int ei : ts.adjacency[node]) {
                if (wused & (1ULL << ei)) continue;
                const GraphEdge& e = g.edges[ei];
                int other = e.a == node ? e.b : e.a;
                cur.steps.push_back({ei, node, other});
                wself(wself, other, wused | (1ULL << ei));
                cur.steps.pop_back();
            }
        };
        for (size_t s = 0; s < g.nodes.size(); ++s) walk(walk, static_cast<int>(s), used);
    };
    cover(cover, 0);

    std::vector<std::pair<std::string, TrailSet>> rows(found.begin(), found.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
        return x.second.trails.size() < y.second.trails.size();
    });
    for (auto& [key, set] : rows) {
        if (static_cast<int>(result.sets.size()) >= limit) break;
        result.sets.push_back(std::move(set));
    }
    return result;
}

std::string gate_string(const DiffusionGraph& g, const Trail& t) {
    std::vector<std::string> labels;
    for (const auto& s : t.steps) labels.push_back(g.edges[s.edge].gate);
    return join(labels);
}

std::string node_string(const DiffusionGraph& g, const Trail& t) {
    if (t.steps.empty()) return "";
    std::vector<std::string> names{g.nodes[t.steps.front().from]};
    for (const auto& s : t.steps) names.push_back(g.nodes[s.to]);
    return join(names);
}

std::string dot_dump(const DiffusionGraph& g, const std::string& graph_name) {
    std::ostringstream os;
    os << "graph " << graph_name << " {\n";
    for (const auto& e : g.edges)
        os << "    \"" << g.nodes[e.a] << "\" -- \"" << g.nodes[e.b] << "\" [label=\"" << e.gate
           << "\"];\n";
    os << "}\n";
    return os.str();
}

}
