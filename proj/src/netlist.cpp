#include "cellsmith/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace cellsmith {

std::string device_name(Device d) {
    return d == Device::PMOS ? "PMOS" : "NMOS";
}

std::vector<std::string> CellNetlist::nets() const {
    std::vector<std::string> all = inputs;
    all.insert(all.end(), outputs.begin(), outputs.end());
    all.push_back(power);
    all.push_back(ground);
    all.insert(all.end(), internal_nets.begin(), internal_nets.end());
    return all;
}

bool CellNetlist::is_rail(const std::string& net) const {
    return net == power || net == ground;
}

bool CellNetlist::is_input(const std::string& net) const {
    return std::find(inputs.begin(), inputs.end(), net) != inputs.end();
}

namespace {

struct Token {
    std::string text;
    int line = 0;
    int col = 0;
};

using LogicalLine = std::vector<Token>;

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] void fail(const std::string& file, int line, int col, const std::string& msg) {
    std::ostringstream os;
    os << file << ":" << line << ":" << col << ": " << msg;
    throw ParseError(os.str());
}

[[noreturn]] void fail_at(const std::string& file, const Token& t, const std::string& msg) {
    fail(file, t.line, t.col, msg);
}

std::vector<Token> tokenize_line(const std::string& text, int line_no) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        out.push_back({text.substr(start, i - start), line_no, static_cast<int>(start) + 1});
    }
    return out;
}

bool is_pininfo_line(const std::string& text) {
    size_t i = text.find_first_not_of(" \t\r");
    if (i == std::string::npos) return false;
    return lower(text.substr(i, 9)) == "*.pininfo";
}

std::vector<LogicalLine> read_logical_lines(std::istream& in, const std::string& file) {
    std::vector<LogicalLine> lines;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        size_t first = raw.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (raw[first] == '*' && !is_pininfo_line(raw)) continue;
        if (raw[first] == '+') {
            if (lines.empty()) fail(file, line_no, static_cast<int>(first) + 1,
                                    "continuation line with nothing to continue");
            std::string rest = raw;
            rest[first] = ' ';
            auto toks = tokenize_line(rest, line_no);
            lines.back().insert(lines.back().end(), toks.begin(), toks.end());
            continue;
        }
        lines.push_back(tokenize_line(raw, line_no));
    }
    return lines;
}

int parse_fins(const std::string& file, const Token& t) {
    size_t eq = t.text.find('=');
    if (eq == std::string::npos || lower(t.text.substr(0, eq)) != "nfin")
        fail_at(file, t, "expected nfin=<count>, got '" + t.text + "'");
    std::string v = t.text.substr(eq + 1);
    if (v.empty() || !std::all_of(v.begin(), v.end(),
                                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        fail_at(file, t, "nfin value '" + v + "' is not a nonnegative integer");
    long fins = std::stol(v);
    if (fins < 1) fail_at(file, t, "fins < 1");
    return static_cast<int>(fins);
}

Device parse_model(const std::string& file, const Token& t) {
    std::string m = lower(t.text);
    bool p = m.find("pmos") != std::string::npos;
    bool n = m.find("nmos") != std::string::npos;
    if (p == n) fail_at(file, t, "unknown device model '" + t.text + "' (need pmos or nmos)");
    return p ? Device::PMOS : Device::NMOS;
}

void check_net_name(const std::string& file, const Token& t) {
    if (t.text == "0")
        fail_at(file, t, "net name \"0\" is reserved for the break marker");
}

}  // namespace

CellNetlist parse_netlist(std::istream& in, const std::string& file) {
    auto lines = read_logical_lines(in, file);
    if (lines.empty()) fail(file, 1, 1, "empty input");

    CellNetlist cell;
    std::vector<Token> pin_tokens;
    std::vector<std::pair<Token, char>> pininfo;
    bool in_subckt = false;
    bool ended = false;

    for (const auto& line : lines) {
        if (line.empty()) continue;
        const Token& head = line.front();
        std::string key = lower(head.text);

        if (key == ".subckt") {
            if (in_subckt || ended) fail_at(file, head, "only one subcircuit per file is supported");
            if (line.size() < 2) fail_at(file, head, ".SUBCKT needs a name");
            cell.name = line[1].text;
            std::set<std::string> seen;
            for (size_t i = 2; i < line.size(); ++i) {
                check_net_name(file, line[i]);
                if (!seen.insert(line[i].text).second)
                    fail_at(file, line[i], "duplicate pin '" + line[i].text + "'");
                pin_tokens.push_back(line[i]);
            }
            in_subckt = true;
            continue;
        }
        if (key == ".ends") {
            if (!in_subckt) fail_at(file, head, ".ENDS without .SUBCKT");
            in_subckt = false;
            ended = true;
            continue;
        }
        if (lower(head.text.substr(0, 9)) == "*.pininfo") {
            if (!in_subckt) fail_at(file, head, "*.PININFO outside a subcircuit");
            for (size_t i = 1; i < line.size(); ++i) {
                const std::string& s = line[i].text;
                size_t colon = s.rfind(':');
                if (colon == std::string::npos || colon == 0 || colon + 2 != s.size())
                    fail_at(file, line[i], "PININFO entry must be <pin>:<I|O|P|G>");
                char dir = static_cast<char>(std::toupper(static_cast<unsigned char>(s[colon + 1])));
                if (dir != 'I' && dir != 'O' && dir != 'P' && dir != 'G')
                    fail_at(file, line[i], "PININFO direction must be one of I, O, P, G");
                Token name = line[i];
                name.text = s.substr(0, colon);
                pininfo.emplace_back(name, dir);
            }
            continue;
        }
        if (ended) fail_at(file, head, "unexpected content after .ENDS");
        if (!in_subckt) fail_at(file, head, "expected .SUBCKT, got '" + head.text + "'");

        char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(head.text[0])));
        if (kind == 'R' || kind == 'C' || kind == 'L')
            fail_at(file, head, "passive element cards are not supported");
        if (kind != 'M') fail_at(file, head, "unsupported card '" + head.text + "'");
        if (line.size() != 7)
            fail_at(file, head, "transistor card needs: M<name> drain gate source bulk model nfin=<k>");

        for (size_t i = 1; i <= 4; ++i) check_net_name(file, line[i]);
        Transistor t;
        t.name = head.text;
        t.drain = line[1].text;
        t.gate = line[2].text;
        t.source = line[3].text;
        t.device = parse_model(file, line[5]);
        t.fins = parse_fins(file, line[6]);
        cell.transistors.push_back(t);
    }
    if (in_subckt) fail(file, lines.back().front().line, 1, "missing .ENDS");
    if (!ended) fail(file, 1, 1, "no subcircuit found");
    if (cell.transistors.empty()) fail(file, 1, 1, "empty subcircuit");

    std::vector<std::string> pins;
    for (const auto& t : pin_tokens) pins.push_back(t.text);

    auto is_pin = [&](const std::string& n) {
        return std::find(pins.begin(), pins.end(), n) != pins.end();
    };

    std::set<std::string> gate_nets, sd_nets;
    for (const auto& t : cell.transistors) {
        gate_nets.insert(t.gate);
        sd_nets.insert(t.source);
        sd_nets.insert(t.drain);
    }

    if (!pininfo.empty()) {
        std::set<std::string> classified;
        for (const auto& [tok, dir] : pininfo) {
            if (!is_pin(tok.text)) fail_at(file, tok, "undeclared pin '" + tok.text + "' in PININFO");
            if (!classified.insert(tok.text).second)
                fail_at(file, tok, "pin '" + tok.text + "' classified twice in PININFO");
            switch (dir) {
                case 'P':
                    if (!cell.power.empty()) fail_at(file, tok, "two power pins in PININFO");
                    cell.power = tok.text;
                    break;
                case 'G':
                    if (!cell.ground.empty()) fail_at(file, tok, "two ground pins in PININFO");
                    cell.ground = tok.text;
                    break;
                default:
                    break;
            }
        }
        for (const auto& t : pin_tokens)
            if (!classified.count(t.text))
                fail_at(file, t, "pin '" + t.text + "' missing from PININFO");
        for (const auto& [tok, dir] : pininfo) {
            if (dir == 'I') cell.inputs.push_back(tok.text);
            if (dir == 'O') cell.outputs.push_back(tok.text);
        }
    } else {
        auto rail_class = [](const std::string& n) {
            std::string l = lower(n);
            if (l == "vdd" || l == "vcc" || l == "vpwr") return 'P';
            if (l == "vss" || l == "gnd" || l == "vgnd") return 'G';
            return ' ';
        };
        for (const auto& t : pin_tokens) {
            char c = rail_class(t.text);
            if (c == 'P') {
                if (!cell.power.empty()) fail_at(file, t, "two power pins by naming convention");
                cell.power = t.text;
            } else if (c == 'G') {
                if (!cell.ground.empty()) fail_at(file, t, "two ground pins by naming convention");
                cell.ground = t.text;
            }
        }
        for (const auto& t : pin_tokens) {
            if (t.text == cell.power || t.text == cell.ground) continue;
            if (gate_nets.count(t.text))
                cell.inputs.push_back(t.text);
            else if (sd_nets.count(t.text))
                cell.outputs.push_back(t.text);
            else
                cell.inputs.push_back(t.text);
        }
    }
    if (cell.power.empty()) fail(file, 1, 1, "cannot identify a power pin");
    if (cell.ground.empty()) fail(file, 1, 1, "cannot identify a ground pin");

    std::set<std::string> pin_set(pins.begin(), pins.end());
    std::set<std::string> internal;
    for (const auto& t : cell.transistors)
        for (const std::string& n : {t.gate, t.source, t.drain})
            if (!pin_set.count(n)) internal.insert(n);
    cell.internal_nets.assign(internal.begin(), internal.end());

    bool has_p = false, has_n = false;
    for (const auto& t : cell.transistors) {
        (t.device == Device::PMOS ? has_p : has_n) = true;
    }
    if (!has_p || !has_n)
        fail(file, 1, 1, std::string("cell needs at least one PMOS and one NMOS (missing ") +
                             (has_p ? "NMOS" : "PMOS") + ")");
    return cell;
}

CellNetlist parse_netlist_text(const std::string& text, const std::string& filename) {
    std::istringstream in(text);
    return parse_netlist(in, filename);
}

CellNetlist parse_netlist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return parse_netlist(in, path);
}

std::vector<std::string> validate_topology(const CellNetlist& netlist) {
    std::vector<std::string> out;
    std::set<std::string> referenced;
    for (const auto& t : netlist.transistors) {
        referenced.insert(t.gate);
        referenced.insert(t.source);
        referenced.insert(t.drain);
        if (t.source == t.drain)
            out.push_back(netlist.name + ": transistor " + t.name + " has source = drain");
    }
    for (const std::string& n : netlist.nets())
        if (!referenced.count(n))
            out.push_back(netlist.name + ": net " + n + " is floating");
    for (const std::string& o : netlist.outputs) {
        bool p = false, n = false;
        for (const auto& t : netlist.transistors)
            if (t.source == o || t.drain == o) (t.device == Device::PMOS ? p : n) = true;
        if (!p || !n)
            out.push_back(netlist.name + ": output " + o + " is not driven by both networks");
    }
    return out;
}

std::string unparse(const CellNetlist& netlist) {
    std::ostringstream os;
    os << ".SUBCKT " << netlist.name;
    for (const auto& p : netlist.inputs) os << " " << p;
    for (const auto& p : netlist.outputs) os << " " << p;
    os << " " << netlist.power << " " << netlist.ground << "\n";
    os << "*.PININFO";
    for (const auto& p : netlist.inputs) os << " " << p << ":I";
    for (const auto& p : netlist.outputs) os << " " << p << ":O";
    os << " " << netlist.power << ":P " << netlist.ground << ":G\n";
    for (const auto& t : netlist.transistors) {
        bool pmos = t.device == Device::PMOS;
        os << t.name << " " << t.drain << " " << t.gate << " " << t.source << " "
           << (pmos ? netlist.power : netlist.ground) << " " << (pmos ? "pmos" : "nmos")
           << " nfin=" << t.fins << "\n";
    }
    os << ".ENDS\n";
    return os.str();
}

}
