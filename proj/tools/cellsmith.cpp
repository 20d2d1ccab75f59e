#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cellsmith/config.hpp"
#include "cellsmith/graph.hpp"
#include "cellsmith/netlist.hpp"
#include "cellsmith/pipeline.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transistor-level standard cell synthesis"};
    app.require_subcommand(1);
    int rc = 0;

    std::string config_path;
    std::vector<std::string> decks;
    std::string arch_flag;
    int min_fins = 0;
    int max_fins = 0;
    int top_n = 0;
    int limit = 0;
    int slack = 0;
    std::string out_dir;
    std::string overrides_path;
    bool ascii = false;
    bool full = false;

    CLI::App* synth = app.add_subcommand("synth", "size and place cells, write per-cell reports");
    synth->add_option("--config", config_path, "key = value configuration file");
    synth->add_option("--arch", arch_flag, "architecture name (9T, 7.5T) or file path");
    synth->add_option("--min-fins", min_fins, "smallest fin count per sharing group");
    synth->add_option("--max-fins", max_fins, "largest fin count per sharing group");
    synth->add_option("--top-n", top_n, "ranked placements listed per cell");
    synth->add_option("--limit", limit, "placement class cap per cell");
    synth->add_option("--slack", slack, "extra columns searched beyond the minimal width");
    synth->add_option("--out", out_dir, "output directory");
    synth->add_option("--overrides", overrides_path, "cell.group = fins override file");
    synth->add_flag("--ascii", ascii, "print best layouts as text");
    synth->add_flag("--full", full, "list every ranked placement");
    synth->add_option("decks", decks, "netlist decks");
    synth->callback([&]() {
        cellsmith::RunConfig cfg;
        if (!config_path.empty()) cfg = cellsmith::load_config_file(config_path, cfg);
        if (synth->count("--arch")) cfg.arch = arch_flag;
        if (synth->count("--min-fins")) cfg.min_fins = min_fins;
        if (synth->count("--max-fins")) cfg.max_fins = max_fins;
        if (synth->count("--top-n")) cfg.top_n = top_n;
        if (synth->count("--limit")) cfg.placement_limit = limit;
        if (synth->count("--slack")) cfg.max_width_slack = slack;
        if (synth->count("--out")) cfg.out_dir = out_dir;
        if (synth->count("--overrides")) cfg.overrides_path = overrides_path;
        if (ascii) cfg.ascii = true;
        if (full) cfg.full_dump = true;
        rc = cellsmith::run_synth(decks, cfg).exit_code;
    });

    std::string archs_csv = "9T,7.5T";
    std::string lib_dir = ".";
    std::string cells_csv = "INV_X1,NAND2_X1,NOR2_X1";
    std::string fo4_config;
    CLI::App* fo4 = app.add_subcommand("fo4", "fanout-of-4 comparison across architectures");
    fo4->add_option("--archs", archs_csv, "comma separated architecture list");
    fo4->add_option("--lib", lib_dir, "directory holding the basic cell decks");
    fo4->add_option("--cells", cells_csv, "comma separated basic cell names");
    fo4->add_option("--config", fo4_config, "key = value configuration file for model constants");
    fo4->callback([&]() {
        cellsmith::RunConfig cfg;
        if (!fo4_config.empty()) cfg = cellsmith::load_config_file(fo4_config, cfg);
        std::cout << cellsmith::fo4_report_json(lib_dir, split_csv(archs_csv), cfg.model,
                                                split_csv(cells_csv));
    });

    std::string graph_deck;
    bool dot = false;
    CLI::App* graph = app.add_subcommand("graph", "dump diffusion graphs of one deck");
    graph->add_flag("--dot", dot, "DOT text output");
    graph->add_option("deck", graph_deck, "netlist deck");
    graph->callback([&]() {
        if (graph_deck.empty()) {
            std::cerr << "error: no input deck\n";
            rc = 1;
            return;
        }
        if (!dot) {
            std::cerr << "error: pass --dot to choose the output format\n";
            rc = 1;
            return;
        }
        cellsmith::CellNetlist netlist = cellsmith::parse_netlist_file(graph_deck);
        std::cout << cellsmith::dot_dump(cellsmith::build_diffusion_graph(netlist, cellsmith::Device::PMOS),
                                         netlist.name + "_pu");
        std::cout << cellsmith::dot_dump(cellsmith::build_diffusion_graph(netlist, cellsmith::Device::NMOS),
                                         netlist.name + "_pd");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
