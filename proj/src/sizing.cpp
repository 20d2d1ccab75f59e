#include "cellsmith/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace cellsmith {

namespace {

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

struct PathResult {
    bool found = false;
    double resistance = 0;
    std::vector<std::string> interior;
};

// worst case pull resistance: the maximum-resistance simple path from the output
// net to the rail, never passing through a rail in the interior
PathResult worst_path(const CellNetlist& netlist, Device device, const DelayModel& model,
                      const std::string& output, const std::string& rail) {
    std::vector<const Transistor*> edges;
    for (const Transistor& t : netlist.transistors)
        if (t.device == device) edges.push_back(&t);

    PathResult best;
    std::vector<std::string> visited{output};
    std::vector<bool> used(edges.size(), false);
    double per_fin = device == Device::PMOS ? model.r1 : model.r1 / model.beta;

    auto walk = [&](auto&& self, const std::string& at, double r) -> void {
        if (at == rail) {
            if (!best.found || r > best.resistance) {
                best.found = true;
                best.resistance = r;
                best.interior.assign(visited.begin() + 1, visited.end() - 1);
            }
            return;
        }
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (used[i]) continue;
            const Transistor& t = *edges[i];
            std::string next;
            if (t.source == at)
                next = t.drain;
            else if (t.drain == at)
                next = t.source;
            else
                continue;
            if (next != rail && netlist.is_rail(next)) continue;
            if (std::find(visited.begin(), visited.end(), next) != visited.end()) continue;
            used[i] = true;
            visited.push_back(next);
            self(self, next, r + per_fin / t.fins);
            visited.pop_back();
            used[i] = false;
        }
    };
    if (netlist.is_rail(output)) return best;
    walk(walk, output, 0);
    return best;
}

double diffusion_cap(const CellNetlist& netlist, const std::set<std::string>& nets,
                     const DelayModel& model) {
    double cap = 0;
    for (const Transistor& t : netlist.transistors) {
        if (nets.count(t.source)) cap += model.cd * t.fins;
        if (nets.count(t.drain)) cap += model.cd * t.fins;
    }
    return cap;
}

}  // namespace

std::vector<SharingGroup> derive_sharing_groups(const CellNetlist& netlist, Device device) {
    std::vector<int> members;
    for (int i = 0; i < static_cast<int>(netlist.transistors.size()); ++i)
        if (netlist.transistors[i].device == device) members.push_back(i);

    std::vector<int> parent(netlist.transistors.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);

    std::map<std::string, int> first_holder;
    for (int i : members) {
        const Transistor& t = netlist.transistors[i];
        for (const std::string& net : {t.source, t.drain}) {
            if (netlist.is_rail(net)) continue;
            auto [it, fresh] = first_holder.emplace(net, i);
            if (!fresh) parent[find_root(parent, i)] = find_root(parent, it->second);
        }
    }

    std::map<int, std::vector<int>> by_root;
    for (int i : members) by_root[find_root(parent, i)].push_back(i);

    std::vector<SharingGroup> groups;
    for (auto& [root, ids] : by_root) {
        SharingGroup g;
        g.device = device;
        std::sort(ids.begin(), ids.end());
        g.members = ids;
        groups.push_back(std::move(g));
    }
    std::sort(groups.begin(), groups.end(),
              [](const SharingGroup& a, const SharingGroup& b) { return a.members[0] < b.members[0]; });
    const char* prefix = device == Device::PMOS ? "p" : "n";
    for (std::size_t i = 0; i < groups.size(); ++i) groups[i].id = prefix + std::to_string(i);
    return groups;
}

std::vector<SharingGroup> all_sharing_groups(const CellNetlist& netlist) {
    std::vector<SharingGroup> groups = derive_sharing_groups(netlist, Device::PMOS);
    std::vector<SharingGroup> n = derive_sharing_groups(netlist, Device::NMOS);
    groups.insert(groups.end(), n.begin(), n.end());
    return groups;
}

std::vector<SizingCandidate> enumerate_sizings(const std::vector<SharingGroup>& groups,
                                               int min_fins, int max_fins) {
    if (groups.empty()) throw std::invalid_argument("no sharing groups to size");
    if (min_fins < 1 || min_fins > max_fins) throw std::invalid_argument("invalid fin range");
    std::vector<SizingCandidate> out;
    std::vector<int> fins(groups.size(), min_fins);
    while (true) {
        SizingCandidate c;
        c.fins = fins;
        c.label = "(";
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (i) c.label += ',';
            c.label += std::to_string(fins[i]);
            c.label += groups[i].device == Device::PMOS ? 'p' : 'n';
        }
        c.label += ')';
        out.push_back(std::move(c));
        int i = static_cast<int>(fins.size()) - 1;
        while (i >= 0 && fins[i] == max_fins) fins[i--] = min_fins;
        if (i < 0) break;
        ++fins[i];
    }
    return out;
}

NetlistEval evaluate_netlist(const CellNetlist& netlist, const DelayModel& model, double load) {
    NetlistEval eval;
    if (netlist.outputs.empty()) {
        eval.evaluable = false;
        eval.note = "no output pin";
        return eval;
    }
    const std::string& out = netlist.outputs.front();
    PathResult up = worst_path(netlist, Device::PMOS, model, out, netlist.power);
    if (!up.found) {
        eval.evaluable = false;
        eval.note = "no pull-up path from " + out + " to " + netlist.power;
        return eval;
    }
    PathResult down = worst_path(netlist, Device::NMOS, model, out, netlist.ground);
    if (!down.found) {
        eval.evaluable = false;
        eval.note = "no pull-down path from " + out + " to " + netlist.ground;
        return eval;
    }
    std::set<std::string> rise_nets{out};
    rise_nets.insert(up.interior.begin(), up.interior.end());
    std::set<std::string> fall_nets{out};
    fall_nets.insert(down.interior.begin(), down.interior.end());
    eval.rise_cap = load + model.cw + diffusion_cap(netlist, rise_nets, model);
    eval.fall_cap = load + model.cw + diffusion_cap(netlist, fall_nets, model);
    eval.rise_delay = std::numbers::ln2 * up.resistance * eval.rise_cap;
    eval.fall_delay = std::numbers::ln2 * down.resistance * eval.fall_cap;
    eval.rise_slew = 2.2 * up.resistance * eval.rise_cap;
    eval.fall_slew = 2.2 * down.resistance * eval.fall_cap;
    return eval;
}

void evaluate_candidate(SizingCandidate& candidate, const std::vector<SharingGroup>& groups,
                        const CellNetlist& netlist, const DelayModel& model, double load) {
    CellNetlist sized = apply_sizing(netlist, groups, candidate.fins);
    NetlistEval eval = evaluate_netlist(sized, model, load);
    candidate.evaluable = eval.evaluable;
    candidate.note = eval.note;
    candidate.rise_delay = eval.rise_delay;
    candidate.fall_delay = eval.fall_delay;
    candidate.rise_slew = eval.rise_slew;
    candidate.fall_slew = eval.fall_slew;
    double hi = std::max(candidate.rise_delay, candidate.fall_delay);
    candidate.balance = hi > 0 ? std::abs(candidate.rise_delay - candidate.fall_delay) / hi : 0;
}

const SizingCandidate& select_balanced(const std::vector<SizingCandidate>& candidates) {
    // scaling both rows by the same fin count leaves balance algebraically unchanged,
    // so such candidates must tie exactly and fall through to the area tie-break
    constexpr double kBalanceTie = 1e-9;
    const SizingCandidate* best = nullptr;
    auto total = [](const SizingCandidate& c) {
        int s = 0;
        for (int f : c.fins) s += f;
        return s;
    };
    for (const SizingCandidate& c : candidates) {
        if (!c.evaluable) continue;
        if (!best) {
            best = &c;
            continue;
        }
        if (std::abs(c.balance - best->balance) > kBalanceTie) {
            if (c.balance < best->balance) best = &c;
            continue;
        }
        if (total(c) != total(*best)) {
            if (total(c) < total(*best)) best = &c;
            continue;
        }
        if (c.label < best->label) best = &c;
    }
    if (!best) throw std::runtime_error("no evaluable sizing candidate");
    return *best;
}

CellNetlist apply_sizing(const CellNetlist& netlist, const std::vector<SharingGroup>& groups,
                         const std::vector<int>& fins) {
    if (fins.size() != groups.size()) throw std::invalid_argument("fin vector does not match groups");
    CellNetlist sized = netlist;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (int idx : groups[g].members) sized.transistors[idx].fins = fins[g];
    return sized;
}

double input_pin_cap(const CellNetlist& netlist, const std::string& pin, const DelayModel& model) {
    double cap = 0;
    for (const Transistor& t : netlist.transistors)
        if (t.gate == pin) cap += model.cg * t.fins;
    return cap;
}

int group_series_depth(const CellNetlist& netlist, const SharingGroup& group) {
    const std::string& rail = group.device == Device::PMOS ? netlist.power : netlist.ground;
    int best = 0;
    std::vector<std::string> visited{rail};
    std::vector<bool> used(group.members.size(), false);
    auto walk = [&](auto&& self, const std::string& at, int depth) -> void {
        best = std::max(best, depth);
        for (std::size_t i = 0; i < group.members.size(); ++i) {
            if (used[i]) continue;
            const Transistor& t = netlist.transistors[group.members[i]];
            std::string next;
            if (t.source == at)
                next = t.drain;
            else if (t.drain == at)
                next = t.source;
            else
                continue;
            if (std::find(visited.begin(), visited.end(), next) != visited.end()) continue;
            used[i] = true;
            visited.push_back(next);
            self(self, next, depth + 1);
            visited.pop_back();
            used[i] = false;
        }
    };
    walk(walk, rail, 0);
    return best;
}

std::map<ShapeKey, int> basic_sizing_table(const std::vector<CellNetlist>& basics,
                                           const DelayModel& model, double load, int min_fins,
                                           int max_fins, std::vector<std::string>& warnings) {
    std::vector<const CellNetlist*> cells;
    for (const CellNetlist& c : basics) cells.push_back(&c);
    std::sort(cells.begin(), cells.end(),
              [](const CellNetlist* a, const CellNetlist* b) { return a->name < b->name; });

    std::map<ShapeKey, int> table;
    std::map<ShapeKey, std::string> holder;
    for (const CellNetlist* cell : cells) {
        std::vector<SharingGroup> groups = all_sharing_groups(*cell);
        std::vector<SizingCandidate> sizings = enumerate_sizings(groups, min_fins, max_fins);
        for (SizingCandidate& s : sizings) evaluate_candidate(s, groups, *cell, model, load);
        const SizingCandidate* winner = nullptr;
        try {
            winner = &select_balanced(sizings);
        } catch (const std::exception&) {
            warnings.push_back(cell->name + ": no evaluable sizing, cell skipped");
            continue;
        }
        for (std::size_t g = 0; g < groups.size(); ++g) {
            ShapeKey key{groups[g].device, group_series_depth(*cell, groups[g])};
            int f = winner->fins[g];
            auto [it, fresh] = table.emplace(key, f);
            if (fresh) {
                holder.emplace(key, cell->name);
            } else if (it->second != f) {
                warnings.push_back("conflicting fin count for " + device_name(key.device) +
                                   " depth " + std::to_string(key.depth) + ": keeping " +
                                   std::to_string(it->second) + " from " + holder[key] +
                                   ", ignoring " + std::to_string(f) + " from " + cell->name);
            }
        }
    }
    return table;
}

CellNetlist propagate_to_complex(const CellNetlist& cell, const std::map<ShapeKey, int>& table,
                                 int arch_max_fins, std::vector<std::string>& warnings) {
    std::vector<SharingGroup> groups = all_sharing_groups(cell);
    std::vector<int> fins;
    for (const SharingGroup& g : groups) {
        ShapeKey key{g.device, group_series_depth(cell, g)};
        auto it = table.find(key);
        if (it != table.end()) {
            fins.push_back(it->second);
        } else {
            fins.push_back(arch_max_fins);
            warnings.push_back(cell.name + ": group " + g.id + " (" + device_name(g.device) +
                               " depth " + std::to_string(key.depth) +
                               ") has no table entry, using " + std::to_string(arch_max_fins) +
                               " fins");
        }
    }
    return apply_sizing(cell, groups, fins);
}

}
