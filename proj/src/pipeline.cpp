#include "cellsmith/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>

#include "cellsmith/arch.hpp"
#include "cellsmith/graph.hpp"
#include "cellsmith/placer.hpp"
#include "cellsmith/sizing.hpp"
#include "json.hpp"

namespace cellsmith {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

nlohmann::ordered_json model_json(const DelayModel& m) {
    return {{"r1", m.r1}, {"cg", m.cg}, {"cd", m.cd}, {"cw", m.cw}, {"beta", m.beta}};
}

std::string sizing_report(const CellNetlist& netlist, const CellNetlist& sized,
                          const Architecture& arch, const RunConfig& cfg,
                          const std::vector<SharingGroup>& groups,
                          const std::vector<SizingCandidate>& candidates,
                          const std::string& winner_label,
                          const std::map<std::string, int>& applied_overrides) {
    nlohmann::ordered_json j;
    j["cell"] = netlist.name;
    j["arch"] = arch.name;
    j["load"] = cfg.sizing_load();
    j["model"] = model_json(cfg.model);
    nlohmann::ordered_json gj = nlohmann::ordered_json::array();
    for (const SharingGroup& g : groups) {
        nlohmann::ordered_json row;
        row["id"] = g.id;
        row["device"] = device_name(g.device);
        nlohmann::ordered_json names = nlohmann::ordered_json::array();
        for (int idx : g.members) names.push_back(netlist.transistors[idx].name);
        row["members"] = std::move(names);
        row["series_depth"] = group_series_depth(netlist, g);
        row["fins"] = sized.transistors[g.members.front()].fins;
        gj.push_back(std::move(row));
    }
    j["groups"] = std::move(gj);
    nlohmann::ordered_json cj = nlohmann::ordered_json::array();
    for (const SizingCandidate& c : candidates) {
        nlohmann::ordered_json row;
        row["label"] = c.label;
        nlohmann::ordered_json fins;
        for (std::size_t i = 0; i < groups.size(); ++i) fins[groups[i].id] = c.fins[i];
        row["fins"] = std::move(fins);
        row["evaluable"] = c.evaluable;
        if (c.evaluable) {
            row["rise_delay"] = c.rise_delay;
            row["fall_delay"] = c.fall_delay;
            row["rise_slew"] = c.rise_slew;
            row["fall_slew"] = c.fall_slew;
            row["balance"] = c.balance;
        } else {
            row["note"] = c.note;
        }
        cj.push_back(std::move(row));
    }
    j["candidates"] = std::move(cj);
    j["winner"] = winner_label;
    nlohmann::ordered_json oj = nlohmann::ordered_json::object();
    for (const auto& [gid, fins] : applied_overrides) oj[gid] = fins;
    j["overrides"] = std::move(oj);
    nlohmann::ordered_json pins;
    DelayModel m = cfg.model;
    for (const std::string& pin : sized.inputs) pins[pin] = input_pin_cap(sized, pin, m);
    j["pin_cin"] = std::move(pins);
    return j.dump(2) + "\n";
}

std::string placements_report(const CellNetlist& netlist, const Architecture& arch,
                              const PlacementSearch& search,
                              const std::vector<PlacementCandidate>& ranked, std::size_t listed) {
    nlohmann::ordered_json j;
    j["cell"] = netlist.name;
    j["arch"] = arch.name;
    j["min_width"] = search.min_width;
    j["truncated"] = search.truncated;
    j["candidates_total"] = ranked.size();
    j["candidates_listed"] = listed;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < listed; ++i) {
        const PlacementCandidate& c = ranked[i];
        nlohmann::ordered_json row;
        row["rank"] = i + 1;
        row["pu"] = c.pu_string();
        row["pd"] = c.pd_string();
        row["width"] = c.width;
        row["consistent"] = c.consistent;
        row["min_access"] = c.score.min_access;
        row["zero_access"] = c.score.zero_access;
        row["total_pin_cap"] = c.score.total_pin_cap;
        rows.push_back(std::move(row));
    }
    j["candidates"] = std::move(rows);
    return j.dump(2) + "\n";
}

}  // namespace

SynthOutcome run_synth(const std::vector<std::string>& deck_paths, const RunConfig& cfg) {
    SynthOutcome outcome;
    if (deck_paths.empty()) {
        std::cerr << "error: no input decks\n";
        outcome.exit_code = 1;
        return outcome;
    }
    Architecture arch;
    try {
        arch = load_architecture(cfg.arch);
        if (cfg.min_fins < 1 || cfg.min_fins > cfg.max_fins)
            throw std::invalid_argument("fin range must satisfy 1 <= min <= max");
        if (cfg.max_fins > arch.fins_per_transistor)
            throw std::invalid_argument("max fins " + std::to_string(cfg.max_fins) +
                                        " exceeds architecture cap " +
                                        std::to_string(arch.fins_per_transistor));
        if (cfg.placement_limit < 1 || cfg.top_n < 1 || cfg.max_width_slack < 0)
            throw std::invalid_argument("limits must be positive");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        outcome.exit_code = 1;
        return outcome;
    }
    std::map<std::string, std::map<std::string, int>> overrides;
    if (!cfg.overrides_path.empty()) {
        try {
            overrides = load_overrides_file(cfg.overrides_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            outcome.exit_code = 1;
            return outcome;
        }
    }
    std::filesystem::create_directories(cfg.out_dir);

    bool any_error = false;
    bool any_infeasible = false;
    std::set<std::string> cells_seen;
    for (const std::string& deck : deck_paths) {
        CellResult r;
        r.arch = arch.name;
        try {
            CellNetlist netlist = parse_netlist_file(deck);
            r.cell = netlist.name;
            cells_seen.insert(netlist.name);
            for (const std::string& w : validate_topology(netlist))
                std::cerr << "warning: " << w << "\n";

            std::vector<SharingGroup> groups = all_sharing_groups(netlist);
            std::vector<SizingCandidate> sizings =
                enumerate_sizings(groups, cfg.min_fins, cfg.max_fins);
            for (SizingCandidate& s : sizings)
                evaluate_candidate(s, groups, netlist, cfg.model, cfg.sizing_load());
            const SizingCandidate& winner = select_balanced(sizings);
            CellNetlist sized = apply_sizing(netlist, groups, winner.fins);
            r.winner_label = winner.label;
            r.sizing_candidates = static_cast<int>(sizings.size());

            std::map<std::string, int> applied;
            auto ov = overrides.find(netlist.name);
            if (ov != overrides.end()) {
                for (const auto& [gid, fins] : ov->second) {
                    const SharingGroup* target = nullptr;
                    for (const SharingGroup& g : groups)
                        if (g.id == gid) target = &g;
                    if (!target)
                        throw std::runtime_error(netlist.name + ": override references unknown group " + gid);
                    if (fins > arch.fins_per_transistor)
                        throw std::runtime_error(netlist.name + ": override " + gid + " exceeds architecture cap");
                    for (int idx : target->members) sized.transistors[idx].fins = fins;
                    applied[gid] = fins;
                }
            }

            DiffusionGraph pu = build_diffusion_graph(sized, Device::PMOS);
            DiffusionGraph pd = build_diffusion_graph(sized, Device::NMOS);
            int min_w = minimum_width(pu, pd);
            PlacementSearch search = find_generalized_placements(
                pu, pd, min_w + cfg.max_width_slack, cfg.placement_limit);
            for (PlacementCandidate& c : search.candidates) {
                score_pin_access(c, sized, arch);
                score_pin_cap(c, sized, cfg.pin_cap_g, cfg.pin_cap_m);
            }
            dedup_mirrors(search.candidates);
            rank_candidates(search.candidates);
            if (search.candidates.empty()) throw std::runtime_error(netlist.name + ": no placements found");

            const PlacementCandidate& best = search.candidates.front();
            r.feasible = false;
            for (const PlacementCandidate& c : search.candidates)
                if (!c.score.zero_access) r.feasible = true;
            if (!r.feasible) any_infeasible = true;

            Fo4Result fo4 = fo4_evaluate(sized, arch, cfg.model);

            r.width = best.width;
            r.width_nm = best.width * arch.poly_pitch_nm;
            r.fo4_delay = fo4.delay;
            r.fo4_power = fo4.power_proxy;
            r.total_pin_cap = best.score.total_pin_cap;
            r.placement_candidates = static_cast<int>(search.candidates.size());

            std::filesystem::path dir(cfg.out_dir);
            write_file(dir / (netlist.name + ".sizing.json"),
                       sizing_report(netlist, sized, arch, cfg, groups, sizings, winner.label, applied));
            std::size_t listed = cfg.full_dump
                                     ? search.candidates.size()
                                     : std::min<std::size_t>(cfg.top_n, search.candidates.size());
            write_file(dir / (netlist.name + ".placements.json"),
                       placements_report(netlist, arch, search, search.candidates, listed));
            write_file(dir / (netlist.name + ".layout.json"),
                       emit_layout(best, sized, arch, LayoutFormat::Json));
            if (cfg.ascii) std::cout << emit_layout(best, sized, arch, LayoutFormat::Ascii);
            r.ok = true;
        } catch (const std::exception& e) {
            std::cerr << "error: " << deck << ": " << e.what() << "\n";
            if (r.cell.empty()) r.cell = std::filesystem::path(deck).stem().string();
            r.error = e.what();
            any_error = true;
        }
        outcome.results.push_back(std::move(r));
    }
    for (const auto& [cell, groups] : overrides) {
        if (!cells_seen.count(cell))
            std::cerr << "warning: overrides for unknown cell " << cell << " ignored\n";
    }
    write_file(std::filesystem::path(cfg.out_dir) / "library.json",
               library_report_json(outcome.results));
    outcome.exit_code = any_error ? 1 : (any_infeasible ? 2 : 0);
    return outcome;
}

std::string library_report_json(const std::vector<CellResult>& rows) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    int ok = 0;
    int infeasible = 0;
    for (const CellResult& r : rows) {
        nlohmann::ordered_json row;
        row["cell"] = r.cell;
        row["arch"] = r.arch;
        row["ok"] = r.ok;
        if (r.ok) {
            row["feasible"] = r.feasible;
            row["width"] = r.width;
            row["width_nm"] = r.width_nm;
            row["fo4_delay"] = r.fo4_delay;
            row["fo4_power"] = r.fo4_power;
            row["total_pin_cap"] = r.total_pin_cap;
            row["sizing_candidates"] = r.sizing_candidates;
            row["placement_candidates"] = r.placement_candidates;
            row["winner"] = r.winner_label;
            ++ok;
            if (!r.feasible) ++infeasible;
        } else {
            row["error"] = r.error;
        }
        cells.push_back(std::move(row));
    }
    j["cells"] = std::move(cells);
    j["summary"] = {{"total", rows.size()}, {"ok", ok}, {"infeasible", infeasible}};
    return j.dump(2) + "\n";
}

std::string fo4_report_json(const std::string& lib_dir, const std::vector<std::string>& arch_names,
                            const DelayModel& model, const std::vector<std::string>& basic_cells) {
    if (arch_names.empty()) throw std::invalid_argument("no architectures given");
    if (basic_cells.empty()) throw std::invalid_argument("no basic cells given");
    if (!std::filesystem::is_directory(lib_dir))
        throw std::runtime_error("library directory not found: " + lib_dir);

    std::vector<Architecture> archs;
    for (const std::string& name : arch_names) archs.push_back(load_architecture(name));

    std::vector<std::string> warnings;
    nlohmann::ordered_json j;
    nlohmann::ordered_json aj = nlohmann::ordered_json::array();
    for (const Architecture& a : archs) {
        aj.push_back({{"name", a.name},
                      {"fins_per_transistor", a.fins_per_transistor},
                      {"cell_height_nm", a.cell_height_nm()}});
    }
    j["archs"] = std::move(aj);
    j["model"] = model_json(model);

    struct CellRow {
        std::string cell;
        std::vector<std::pair<std::string, Fo4Result>> per_arch;
    };
    std::vector<CellRow> table;
    int found = 0;
    for (const std::string& cell : basic_cells) {
        std::filesystem::path deck = std::filesystem::path(lib_dir) / (cell + ".sp");
        if (!std::filesystem::exists(deck)) {
            warnings.push_back("missing basic cell deck: " + deck.string());
            continue;
        }
        ++found;
        CellRow row;
        CellNetlist netlist = parse_netlist_file(deck.string());
        row.cell = netlist.name;
        for (const Architecture& a : archs) {
            CellNetlist sized = netlist;
            for (Transistor& t : sized.transistors) t.fins = a.fins_per_transistor;
            try {
                row.per_arch.push_back({a.name, fo4_evaluate(sized, a, model)});
            } catch (const std::exception& e) {
                warnings.push_back(std::string(e.what()));
            }
        }
        table.push_back(std::move(row));
    }
    if (found == 0) throw std::runtime_error("no basic cell decks found in " + lib_dir);

    nlohmann::ordered_json cj = nlohmann::ordered_json::array();
    std::set<std::string> delay_verdicts;
    std::set<std::string> power_verdicts;
    for (const CellRow& row : table) {
        nlohmann::ordered_json cell;
        cell["cell"] = row.cell;
        nlohmann::ordered_json pj = nlohmann::ordered_json::array();
        for (const auto& [name, r] : row.per_arch) {
            pj.push_back({{"arch", name},
                          {"cin", r.cin},
                          {"load", r.load},
                          {"delay", r.delay},
                          {"power_proxy", r.power_proxy}});
        }
        cell["per_arch"] = std::move(pj);
        if (row.per_arch.size() == 2) {
            const auto& [n0, r0] = row.per_arch[0];
            const auto& [n1, r1] = row.per_arch[1];
            std::string dl = r0.delay == r1.delay ? "tie" : (r0.delay > r1.delay ? n0 : n1);
            std::string pl = r0.power_proxy == r1.power_proxy
                                 ? "tie"
                                 : (r0.power_proxy > r1.power_proxy ? n0 : n1);
            cell["delay_larger"] = dl;
            cell["power_larger"] = pl;
            delay_verdicts.insert(dl);
            power_verdicts.insert(pl);
        }
        cj.push_back(std::move(cell));
    }
    j["cells"] = std::move(cj);
    if (archs.size() == 2 && !delay_verdicts.empty()) {
        nlohmann::ordered_json verdict;
        verdict["delay_larger"] = delay_verdicts.size() == 1 ? *delay_verdicts.begin() : "mixed";
        verdict["power_larger"] = power_verdicts.size() == 1 ? *power_verdicts.begin() : "mixed";
        j["verdict"] = std::move(verdict);
    }
    nlohmann::ordered_json wj = nlohmann::ordered_json::array();
    for (const std::string& w : warnings) wj.push_back(w);
    j["warnings"] = std::move(wj);
    return j.dump(2) + "\n";
}

}
