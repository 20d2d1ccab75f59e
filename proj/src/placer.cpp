#include "cellsmith/placer.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace cellsmith {

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    return out;
}

struct RowCtx {
    const DiffusionGraph* g = nullptr;
    std::vector<std::vector<int>> adj;
    int m = 0;
};

RowCtx make_row(const DiffusionGraph& g) {
    if (g.edges.size() > 63) throw std::invalid_argument("placement search supports at most 63 transistors per row");
    RowCtx row;
    row.g = &g;
    row.m = static_cast<int>(g.edges.size());
    row.adj.assign(g.nodes.size(), {});
    for (int i = 0; i < row.m; ++i) {
        row.adj[g.edges[i].a].push_back(i);
        row.adj[g.edges[i].b].push_back(i);
    }
    return row;
}

// edge < 0 encodes a break column for the row
struct StepRec {
    int edge = -1;
    int from = -1;
    int to = -1;
};

// frontier < 0 means no open trail: any unused edge may start one, in either orientation
void row_options(const RowCtx& row, std::uint64_t used, int frontier, std::vector<StepRec>& out) {
    out.clear();
    if (frontier < 0) {
        for (int i = 0; i < row.m; ++i) {
            if (used & (1ULL << i)) continue;
            out.push_back({i, row.g->edges[i].a, row.g->edges[i].b});
            out.push_back({i, row.g->edges[i].b, row.g->edges[i].a});
        }
        return;
    }
    for (int i : row.adj[frontier]) {
        if (used & (1ULL << i)) continue;
        const GraphEdge& e = row.g->edges[i];
        out.push_back({i, frontier, e.a == frontier ? e.b : e.a});
    }
}

struct SearchState {
    RowCtx pu;
    RowCtx pd;
    int width = 0;
    std::size_t limit = 0;
    bool allow_gaps = true;
    bool truncated = false;
    std::vector<StepRec> pu_cols;
    std::vector<StepRec> pd_cols;
    std::map<std::string, PlacementCandidate>* classes = nullptr;
};

PlacementCandidate materialize(const SearchState& st) {
    PlacementCandidate c;
    c.width = st.width;
    c.columns.resize(st.width);
    for (int i = 0; i < st.width; ++i) {
        Column& col = c.columns[i];
        const StepRec& ps = st.pu_cols[i];
        const StepRec& ds = st.pd_cols[i];
        if (ps.edge >= 0) {
            const GraphEdge& e = st.pu.g->edges[ps.edge];
            col.pu_gate = e.gate;
            col.pu_diff_left = st.pu.g->nodes[ps.from];
            col.pu_diff_right = st.pu.g->nodes[ps.to];
            col.pu_fins = e.fins;
        } else {
            col.pu_gate = kBreak;
        }
        if (ds.edge >= 0) {
            const GraphEdge& e = st.pd.g->edges[ds.edge];
            col.pd_gate = e.gate;
            col.pd_diff_left = st.pd.g->nodes[ds.from];
            col.pd_diff_right = st.pd.g->nodes[ds.to];
            col.pd_fins = e.fins;
        } else {
            col.pd_gate = kBreak;
        }
        c.pu_sequence.push_back(col.pu_gate);
        c.pd_sequence.push_back(col.pd_gate);
    }
    c.consistent = (c.pu_sequence == c.pd_sequence);
    return c;
}

// Exhaustive column DFS at one exact width. Returns false once the class limit is hit
// so callers can unwind; the first realization found of each class is kept.
bool search_columns(SearchState& st, int col, std::uint64_t used_pu, int fr_pu, int left_pu,
                    std::uint64_t used_pd, int fr_pd, int left_pd) {
    if (col > st.width) {
        if (left_pu == 0 && left_pd == 0) {
            PlacementCandidate cand = materialize(st);
            std::string key = cand.pair_string();
            st.classes->emplace(std::move(key), std::move(cand));
            if (st.classes->size() >= st.limit) {
                st.truncated = true;
                return false;
            }
        }
        return true;
    }
    int remaining = st.width - col + 1;
    if (left_pu > remaining || left_pd > remaining) return true;
    // both rows exhausted: every remaining column would be a double break, illegal at the end
    if (left_pu == 0 && left_pd == 0) return true;

    std::vector<StepRec> pu_opts;
    std::vector<StepRec> pd_opts;
    row_options(st.pu, used_pu, fr_pu, pu_opts);
    row_options(st.pd, used_pd, fr_pd, pd_opts);

    for (const StepRec& ps : pu_opts) {
        const std::string& gate = st.pu.g->edges[ps.edge].gate;
        for (const StepRec& ds : pd_opts) {
            if (st.pd.g->edges[ds.edge].gate != gate) continue;
            st.pu_cols[col - 1] = ps;
            st.pd_cols[col - 1] = ds;
            if (!search_columns(st, col + 1, used_pu | (1ULL << ps.edge), ps.to, left_pu - 1,
                                used_pd | (1ULL << ds.edge), ds.to, left_pd - 1))
                return false;
        }
    }
    if (!st.allow_gaps) return true;
    for (const StepRec& ps : pu_opts) {
        st.pu_cols[col - 1] = ps;
        st.pd_cols[col - 1] = StepRec{};
        if (!search_columns(st, col + 1, used_pu | (1ULL << ps.edge), ps.to, left_pu - 1, used_pd,
                            -1, left_pd))
            return false;
    }
    for (const StepRec& ds : pd_opts) {
        st.pu_cols[col - 1] = StepRec{};
        st.pd_cols[col - 1] = ds;
        if (!search_columns(st, col + 1, used_pu, -1, left_pu, used_pd | (1ULL << ds.edge), ds.to,
                            left_pd - 1))
            return false;
    }
    if (col > 1 && col < st.width) {
        st.pu_cols[col - 1] = StepRec{};
        st.pd_cols[col - 1] = StepRec{};
        if (!search_columns(st, col + 1, used_pu, -1, left_pu, used_pd, -1, left_pd)) return false;
    }
    return true;
}

bool run_layer(const DiffusionGraph& pu, const DiffusionGraph& pd, int width, std::size_t limit,
               bool allow_gaps, std::map<std::string, PlacementCandidate>& classes) {
    SearchState st;
    st.pu = make_row(pu);
    st.pd = make_row(pd);
    st.width = width;
    st.limit = limit;
    st.allow_gaps = allow_gaps;
    st.pu_cols.assign(width, StepRec{});
    st.pd_cols.assign(width, StepRec{});
    st.classes = &classes;
    search_columns(st, 1, 0, -1, st.pu.m, 0, -1, st.pd.m);
    return st.truncated;
}

std::string column_serialization(const PlacementCandidate& c) {
    std::string out;
    for (const Column& col : c.columns) {
        out += col.pu_gate + '/' + col.pu_diff_left + '/' + col.pu_diff_right + '/' + col.pd_gate +
               '/' + col.pd_diff_left + '/' + col.pd_diff_right + ';';
    }
    return out;
}

std::vector<int> pin_columns(const PlacementCandidate& c, const std::string& pin) {
    std::vector<int> cols;
    for (int i = 0; i < c.width; ++i) {
        if (c.columns[i].pu_gate == pin || c.columns[i].pd_gate == pin) cols.push_back(i + 1);
    }
    return cols;
}

}  // namespace

std::string PlacementCandidate::pu_string() const { return join(pu_sequence); }
std::string PlacementCandidate::pd_string() const { return join(pd_sequence); }
std::string PlacementCandidate::pair_string() const { return pu_string() + "|" + pd_string(); }

std::vector<PlacementCandidate> find_consistent_placements(const DiffusionGraph& pu,
                                                           const DiffusionGraph& pd, int limit) {
    std::vector<PlacementCandidate> out;
    if (pu.edges.size() != pd.edges.size()) return out;
    if (pu.edges.empty()) return out;
    std::size_t cap = limit < 1 ? 1 : static_cast<std::size_t>(limit);
    std::map<std::string, PlacementCandidate> classes;
    run_layer(pu, pd, static_cast<int>(pu.edges.size()), cap, false, classes);
    for (auto& [key, cand] : classes) out.push_back(std::move(cand));
    return out;
}

PlacementSearch find_generalized_placements(const DiffusionGraph& pu, const DiffusionGraph& pd,
                                            int max_width, int limit) {
    PlacementSearch search;
    int np = static_cast<int>(pu.edges.size());
    int nn = static_cast<int>(pd.edges.size());
    if (np == 0 || nn == 0) throw std::invalid_argument("placement requires edges in both rows");
    int lb = std::max(np, nn);
    if (max_width < lb) max_width = lb;
    std::size_t cap = limit < 1 ? 1 : static_cast<std::size_t>(limit);

    std::map<std::string, PlacementCandidate> classes;
    for (int w = lb; w <= max_width; ++w) {
        bool trunc = run_layer(pu, pd, w, cap, true, classes);
        if (search.min_width == 0 && !classes.empty()) search.min_width = w;
        if (trunc) {
            search.truncated = true;
            break;
        }
    }
    if (search.min_width == 0) search.min_width = minimum_width(pu, pd);
    for (auto& [key, cand] : classes) search.candidates.push_back(std::move(cand));
    return search;
}

int minimum_width(const DiffusionGraph& pu, const DiffusionGraph& pd) {
    int np = static_cast<int>(pu.edges.size());
    int nn = static_cast<int>(pd.edges.size());
    if (np == 0 || nn == 0) throw std::invalid_argument("placement requires edges in both rows");
    // trail interleaving with double-break separators always fits in this many columns
    int hard_max = np + nn + min_trail_count(pu) + min_trail_count(pd);
    for (int w = std::max(np, nn); w <= hard_max; ++w) {
        std::map<std::string, PlacementCandidate> probe;
        run_layer(pu, pd, w, 1, true, probe);
        if (!probe.empty()) return w;
    }
    throw std::logic_error("no placement width found below the interleaving bound");
}

void dedup_mirrors(std::vector<PlacementCandidate>& candidates) {
    std::map<std::string, std::size_t> seen;
    std::vector<PlacementCandidate> out;
    out.reserve(candidates.size());
    for (PlacementCandidate& c : candidates) {
        std::vector<std::string> rpu(c.pu_sequence.rbegin(), c.pu_sequence.rend());
        std::vector<std::string> rpd(c.pd_sequence.rbegin(), c.pd_sequence.rend());
        std::string self = c.pair_string();
        std::string mirror = join(rpu) + "|" + join(rpd);
        std::string key = std::min(self, mirror);
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(std::move(key), out.size());
            out.push_back(std::move(c));
            continue;
        }
        if (rank_less(c, out[it->second])) out[it->second] = std::move(c);
    }
    candidates = std::move(out);
}

std::vector<Strap> route_straps(const PlacementCandidate& candidate, const CellNetlist& netlist) {
    // connection groups: gate column {c}; in-trail junction {c, c+1}; trail end {c}
    std::map<std::string, std::vector<std::pair<int, int>>> extents;
    std::map<std::string, int> group_count;
    auto add = [&](const std::string& net, int lo, int hi) {
        if (net.empty() || netlist.is_rail(net)) return;
        extents[net].push_back({lo, hi});
        ++group_count[net];
    };
    int w = candidate.width;
    for (int c = 1; c <= w; ++c) {
        const Column& col = candidate.columns[c - 1];
        const std::string& g = col.pu_gate != kBreak ? col.pu_gate : col.pd_gate;
        if (g != kBreak) add(g, c, c);
    }
    auto row_pass = [&](auto gate_of, auto left_of, auto right_of) {
        for (int c = 1; c <= w; ++c) {
            if (gate_of(c) == kBreak) continue;
            if (c == 1 || gate_of(c - 1) == kBreak) add(left_of(c), c, c);
            if (c < w && gate_of(c + 1) != kBreak)
                add(right_of(c), c, c + 1);
            else
                add(right_of(c), c, c);
        }
    };
    row_pass([&](int c) -> const std::string& { return candidate.columns[c - 1].pu_gate; },
             [&](int c) -> const std::string& { return candidate.columns[c - 1].pu_diff_left; },
             [&](int c) -> const std::string& { return candidate.columns[c - 1].pu_diff_right; });
    row_pass([&](int c) -> const std::string& { return candidate.columns[c - 1].pd_gate; },
             [&](int c) -> const std::string& { return candidate.columns[c - 1].pd_diff_left; },
             [&](int c) -> const std::string& { return candidate.columns[c - 1].pd_diff_right; });

    std::vector<Strap> straps;
    for (const auto& [net, spans] : extents) {
        if (group_count[net] < 2) continue;
        int lo = spans.front().first;
        int hi = spans.front().second;
        for (const auto& [a, b] : spans) {
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
        straps.push_back({net, lo, hi, -1});
    }
    std::sort(straps.begin(), straps.end(), [](const Strap& a, const Strap& b) {
        if (a.left != b.left) return a.left < b.left;
        if (a.right != b.right) return a.right < b.right;
        return a.net < b.net;
    });
    std::vector<std::vector<std::pair<int, int>>> tracks;
    for (Strap& s : straps) {
        std::size_t t = 0;
        for (; t < tracks.size(); ++t) {
            bool clash = false;
            for (const auto& [l, r] : tracks[t]) {
                if (s.left <= r && l <= s.right) {
                    clash = true;
                    break;
                }
            }
            if (!clash) break;
        }
        if (t == tracks.size()) tracks.emplace_back();
        tracks[t].push_back({s.left, s.right});
        s.track = static_cast<int>(t);
    }
    return straps;
}

void score_pin_access(PlacementCandidate& candidate, const CellNetlist& netlist,
                      const Architecture& arch) {
    std::vector<Strap> straps = route_straps(candidate, netlist);
    int usable = arch.usable_strap_tracks();
    candidate.score.width = candidate.width;
    candidate.score.access.clear();
    candidate.score.min_access = 0;
    candidate.score.zero_access = false;
    bool first = true;
    for (const std::string& pin : netlist.inputs) {
        std::vector<int> cols = pin_columns(candidate, pin);
        int acc = 0;
        for (int c : cols) {
            bool reachable = false;
            for (int t = 0; t < usable && !reachable; ++t) {
                const Strap* covering = nullptr;
                for (const Strap& s : straps) {
                    if (s.track == t && s.left <= c && c <= s.right) {
                        covering = &s;
                        break;
                    }
                }
                if (!covering || covering->net == pin) reachable = true;
            }
            if (reachable) ++acc;
        }
        candidate.score.access.push_back({pin, acc, static_cast<int>(cols.size())});
        if (acc == 0) candidate.score.zero_access = true;
        if (first || acc < candidate.score.min_access) candidate.score.min_access = acc;
        first = false;
    }
}

void score_pin_cap(PlacementCandidate& candidate, const CellNetlist& netlist, double g_const,
                   double m_const) {
    candidate.score.width = candidate.width;
    candidate.score.pin_caps.clear();
    candidate.score.total_pin_cap = 0;
    for (const std::string& pin : netlist.inputs) {
        std::vector<int> cols = pin_columns(candidate, pin);
        double cap = static_cast<double>(cols.size()) * g_const;
        if (cols.size() > 1) cap += static_cast<double>(cols.back() - cols.front()) * m_const;
        candidate.score.pin_caps.push_back({pin, cap});
        candidate.score.total_pin_cap += cap;
    }
}

bool rank_less(const PlacementCandidate& a, const PlacementCandidate& b) {
    if (a.width != b.width) return a.width < b.width;
    if (a.score.zero_access != b.score.zero_access) return !a.score.zero_access;
    if (a.score.min_access != b.score.min_access) return a.score.min_access > b.score.min_access;
    if (a.score.total_pin_cap != b.score.total_pin_cap)
        return a.score.total_pin_cap < b.score.total_pin_cap;
    std::string pa = a.pair_string();
    std::string pb = b.pair_string();
    if (pa != pb) return pa < pb;
    return column_serialization(a) < column_serialization(b);
}

void rank_candidates(std::vector<PlacementCandidate>& candidates) {
    std::sort(candidates.begin(), candidates.end(), rank_less);
}

std::string emit_layout(const PlacementCandidate& candidate, const CellNetlist& netlist,
                        const Architecture& arch, LayoutFormat format) {
    std::vector<Strap> straps = route_straps(candidate, netlist);
    if (format == LayoutFormat::Json) {
        nlohmann::ordered_json j;
        j["cell"] = netlist.name;
        j["arch"] = {{"name", arch.name},
                     {"track_count", arch.track_count},
                     {"fins_per_transistor", arch.fins_per_transistor},
                     {"cell_height_nm", arch.cell_height_nm()},
                     {"usable_strap_tracks", arch.usable_strap_tracks()}};
        j["width"] = candidate.width;
        j["width_nm"] = candidate.width * arch.poly_pitch_nm;
        j["consistent"] = candidate.consistent;
        j["pu_sequence"] = candidate.pu_string();
        j["pd_sequence"] = candidate.pd_string();
        nlohmann::ordered_json cols = nlohmann::ordered_json::array();
        for (int i = 0; i < candidate.width; ++i) {
            const Column& c = candidate.columns[i];
            nlohmann::ordered_json col;
            col["index"] = i + 1;
            col["pu_gate"] = c.pu_gate;
            col["pd_gate"] = c.pd_gate;
            if (c.pu_gate != kBreak) {
                col["pu_diff"] = {c.pu_diff_left, c.pu_diff_right};
                col["pu_fins"] = c.pu_fins;
            } else {
                col["pu_diff"] = nullptr;
            }
            if (c.pd_gate != kBreak) {
                col["pd_diff"] = {c.pd_diff_left, c.pd_diff_right};
                col["pd_fins"] = c.pd_fins;
            } else {
                col["pd_diff"] = nullptr;
            }
            cols.push_back(std::move(col));
        }
        j["columns"] = std::move(cols);
        nlohmann::ordered_json sj;
        sj["width"] = candidate.score.width;
        sj["min_access"] = candidate.score.min_access;
        sj["zero_access"] = candidate.score.zero_access;
        sj["total_pin_cap"] = candidate.score.total_pin_cap;
        nlohmann::ordered_json acc = nlohmann::ordered_json::array();
        for (const PinAccess& a : candidate.score.access)
            acc.push_back({{"pin", a.pin}, {"accessible", a.accessible}, {"total", a.total}});
        sj["access"] = std::move(acc);
        nlohmann::ordered_json caps = nlohmann::ordered_json::array();
        for (const PinCap& p : candidate.score.pin_caps)
            caps.push_back({{"pin", p.pin}, {"cap", p.cap}});
        sj["pin_caps"] = std::move(caps);
        j["scores"] = std::move(sj);
        nlohmann::ordered_json stj = nlohmann::ordered_json::array();
        for (const Strap& s : straps)
            stj.push_back({{"net", s.net}, {"left", s.left}, {"right", s.right}, {"track", s.track}});
        j["straps"] = std::move(stj);
        return j.dump(2) + "\n";
    }

    int w = candidate.width;
    std::vector<std::string> pu_junc(w + 1, ".");
    std::vector<std::string> pd_junc(w + 1, ".");
    for (int jx = 0; jx <= w; ++jx) {
        if (jx > 0 && candidate.columns[jx - 1].pu_gate != kBreak)
            pu_junc[jx] = candidate.columns[jx - 1].pu_diff_right;
        else if (jx < w && candidate.columns[jx].pu_gate != kBreak)
            pu_junc[jx] = candidate.columns[jx].pu_diff_left;
        if (jx > 0 && candidate.columns[jx - 1].pd_gate != kBreak)
            pd_junc[jx] = candidate.columns[jx - 1].pd_diff_right;
        else if (jx < w && candidate.columns[jx].pd_gate != kBreak)
            pd_junc[jx] = candidate.columns[jx].pd_diff_left;
    }
    std::size_t cell_w = 3;
    for (const Column& c : candidate.columns) {
        cell_w = std::max(cell_w, c.pu_gate.size());
        cell_w = std::max(cell_w, c.pd_gate.size());
    }
    for (int jx = 0; jx <= w; ++jx) {
        cell_w = std::max({cell_w, pu_junc[jx].size(), pd_junc[jx].size()});
    }
    cell_w += 1;
    auto pad = [&](const std::string& s) {
        std::string p = s;
        p.resize(cell_w, ' ');
        return p;
    };
    std::ostringstream os;
    os << "cell " << netlist.name << "  arch " << arch.name << "  width " << w << "\n";
    os << "min_access " << candidate.score.min_access << "  zero_access "
       << (candidate.score.zero_access ? "yes" : "no") << "  total_pin_cap "
       << candidate.score.total_pin_cap << "\n";
    os << "straps:";
    for (const Strap& s : straps) os << " " << s.net << "[" << s.left << "," << s.right << "]@" << s.track;
    os << "\n";
    os << "col:     ";
    for (int i = 1; i <= w; ++i) os << pad(std::to_string(i));
    os << "\n";
    os << "pu.gate: ";
    for (const Column& c : candidate.columns) os << pad(c.pu_gate);
    os << "\n";
    os << "pu.diff: ";
    for (int jx = 0; jx <= w; ++jx) os << pad(pu_junc[jx]);
    os << "\n";
    os << "pd.gate: ";
    for (const Column& c : candidate.columns) os << pad(c.pd_gate);
    os << "\n";
    os << "pd.diff: ";
    for (int jx = 0; jx <= w; ++jx) os << pad(pd_junc[jx]);
    os << "\n";
    return os.str();
}

}
