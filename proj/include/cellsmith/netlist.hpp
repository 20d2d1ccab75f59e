#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellsmith {

enum class Device { PMOS, NMOS };

std::string device_name(Device d);

struct Transistor {
    std::string name;
    Device device;
    std::string gate;
    std::string source;
    std::string drain;
    int fins;

    bool operator==(const Transistor&) const = default;
};

struct CellNetlist {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string power;
    std::string ground;
    std::vector<std::string> internal_nets;
    std::vector<Transistor> transistors;

    bool operator==(const CellNetlist&) const = default;

    std::vector<std::string> nets() const;
    bool is_rail(const std::string& net) const;
    bool is_input(const std::string& net) const;
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

CellNetlist parse_netlist(std::istream& in, const std::string& filename);
CellNetlist parse_netlist_text(const std::string& text, const std::string& filename);
CellNetlist parse_netlist_file(const std::string& path);

std::vector<std::string> validate_topology(const CellNetlist& netlist);

std::string unparse(const CellNetlist& netlist);

}
