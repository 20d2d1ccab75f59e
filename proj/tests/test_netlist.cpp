#include "doctest.h"

#include "cellsmith/netlist.hpp"

#include <algorithm>
#include <string>
#include <vector>

using namespace cellsmith;

namespace {

std::string deck(const std::string& name) {
    return std::string(CELLS_DIR) + "/" + name;
}

}

TEST_CASE("inverter deck parses to the exact device list") {
    CellNetlist c = parse_netlist_file(deck("INV_X1.sp"));
    CHECK(c.name == "INV_X1");
    CHECK(c.inputs == std::vector<std::string>{"A"});
    CHECK(c.outputs == std::vector<std::string>{"Y"});
    CHECK(c.power == "VDD");
    CHECK(c.ground == "VSS");
    CHECK(c.internal_nets.empty());
    REQUIRE(c.transistors.size() == 2);

    const Transistor& mp = c.transistors[0];
    CHECK(mp.name == "MP0");
    CHECK(mp.device == Device::PMOS);
    CHECK(mp.drain == "Y");
    CHECK(mp.gate == "A");
    CHECK(mp.source == "VDD");
    CHECK(mp.fins == 2);

    const Transistor& mn = c.transistors[1];
    CHECK(mn.name == "MN0");
    CHECK(mn.device == Device::NMOS);
    CHECK(mn.drain == "Y");
    CHECK(mn.gate == "A");
    CHECK(mn.source == "VSS");
    CHECK(mn.fins == 2);
}

TEST_CASE("nand deck exposes the internal series net") {
    CellNetlist c = parse_netlist_file(deck("NAND2_X1.sp"));
    CHECK(c.name == "NAND2_X1");
    CHECK(c.inputs == std::vector<std::string>{"A", "B"});
    CHECK(c.outputs == std::vector<std::string>{"Y"});
    CHECK(c.internal_nets == std::vector<std::string>{"n1"});
    REQUIRE(c.transistors.size() == 4);
    CHECK(c.transistors[2].name == "MN0");
    CHECK(c.transistors[2].drain == "Y");
    CHECK(c.transistors[2].source == "n1");
    CHECK(c.transistors[3].drain == "n1");
    CHECK(c.transistors[3].source == "VSS");
}

TEST_CASE("nor deck exposes the internal series net on the pull-up side") {
    CellNetlist c = parse_netlist_file(deck("NOR2_X1.sp"));
    CHECK(c.internal_nets == std::vector<std::string>{"p1"});
    CHECK(c.transistors[0].drain == "p1");
    CHECK(c.transistors[1].source == "p1");
}

TEST_CASE("wide cell deck parses with doubled devices") {
    CellNetlist c = parse_netlist_file(deck("AOI31_X2.sp"));
    CHECK(c.name == "AOI31_X2");
    CHECK(c.inputs == std::vector<std::string>{"A0", "A1", "A2", "B0"});
    REQUIRE(c.transistors.size() == 16);
    int pmos = 0, nmos = 0;
    for (const auto& t : c.transistors) (t.device == Device::PMOS ? pmos : nmos)++;
    CHECK(pmos == 8);
    CHECK(nmos == 8);
    CHECK(c.internal_nets == std::vector<std::string>{"m", "x1", "x2"});
}

TEST_CASE("mux deck collects all five internal nets sorted") {
    CellNetlist c = parse_netlist_file(deck("MXT2_X1.sp"));
    CHECK(c.inputs == std::vector<std::string>{"A", "B", "S0"});
    CHECK(c.outputs == std::vector<std::string>{"Y"});
    CHECK(c.internal_nets ==
          std::vector<std::string>{"na", "nb", "nq", "ns0", "ny"});
    REQUIRE(c.transistors.size() == 12);
}

TEST_CASE("every bundled deck survives an unparse round trip") {
    for (const char* name : {"INV_X1.sp", "NAND2_X1.sp", "NOR2_X1.sp",
                             "AOI31_X2.sp", "MXT2_X1.sp"}) {
        CAPTURE(name);
        CellNetlist a = parse_netlist_file(deck(name));
        CellNetlist b = parse_netlist_text(unparse(a), "roundtrip.sp");
        CHECK(a == b);
    }
}

TEST_CASE("continuation lines fold into the preceding card") {
    CellNetlist c = parse_netlist_text(
        ".SUBCKT INV A Y\n"
        "+ VDD VSS\n"
        "*.PININFO A:I Y:O VDD:P VSS:G\n"
        "MP0 Y A VDD VDD pmos\n"
        "+ nfin=3\n"
        "MN0 Y A VSS VSS nmos nfin=2\n"
        ".ENDS\n",
        "cont.sp");
    CHECK(c.inputs == std::vector<std::string>{"A"});
    CHECK(c.transistors[0].fins == 3);
}

TEST_CASE("pin roles fall back to a naming and usage heuristic") {
    CellNetlist c = parse_netlist_text(
        ".SUBCKT X IN OUT VDD VSS\n"
        "MP0 OUT IN VDD VDD pmos nfin=1\n"
        "MN0 OUT IN VSS VSS nmos nfin=1\n"
        ".ENDS\n",
        "bare.sp");
    CHECK(c.inputs == std::vector<std::string>{"IN"});
    CHECK(c.outputs == std::vector<std::string>{"OUT"});
    CHECK(c.power == "VDD");
    CHECK(c.ground == "VSS");
}

TEST_CASE("parser rejects malformed decks with located errors") {
    auto expect_fail = [](const std::string& text, const std::string& needle) {
        CAPTURE(text);
        CAPTURE(needle);
        try {
            parse_netlist_text(text, "bad.sp");
            FAIL_CHECK("expected ParseError containing '" << needle << "'");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
            CHECK(std::string(e.what()).find("bad.sp:") != std::string::npos);
        }
    };

    const std::string head = ".SUBCKT X A Y VDD VSS\n"
                             "*.PININFO A:I Y:O VDD:P VSS:G\n";
    const std::string pair = "MP0 Y A VDD VDD pmos nfin=1\n"
                             "MN0 Y A VSS VSS nmos nfin=1\n";

    expect_fail(head + "MP0 Y A VDD VDD pmos nfin=0\n" + ".ENDS\n", "fins < 1");
    expect_fail(head + "MP0 Y A VDD VDD pmos nfin=-2\n" + ".ENDS\n",
                "not a nonnegative integer");
    expect_fail(head + "MP0 Y A VDD VDD pmos nfin=two\n" + ".ENDS\n",
                "not a nonnegative integer");
    expect_fail(head + "MP0 Y A VDD VDD pmos w=2\n" + ".ENDS\n",
                "expected nfin=");
    expect_fail(head + "MP0 0 A VDD VDD pmos nfin=1\n" + ".ENDS\n",
                "reserved for the break marker");
    expect_fail(head + "MP0 Y A VDD VDD cmos nfin=1\n" + ".ENDS\n",
                "unknown device model");
    expect_fail(head + "MP0 Y A VDD pmos nfin=1\n" + ".ENDS\n",
                "transistor card needs");
    expect_fail(head + "R1 Y A 100\n" + pair + ".ENDS\n",
                "passive element cards are not supported");
    expect_fail(head + "XSUB Y A VDD VSS other\n" + pair + ".ENDS\n",
                "unsupported card");
    expect_fail(".SUBCKT X A A Y VDD VSS\n" + pair + ".ENDS\n",
                "duplicate pin");
    expect_fail(head + pair + ".ENDS\nMP9 Y A VDD VDD pmos nfin=1\n",
                "unexpected content after .ENDS");
    expect_fail(head + pair, "missing .ENDS");
    expect_fail("* nothing here\n", "empty input");
    expect_fail(head + ".ENDS\n", "empty subcircuit");
    expect_fail(head + "MP0 Y A VDD VDD pmos nfin=1\n.ENDS\n",
                "at least one PMOS and one NMOS");
    expect_fail(".SUBCKT X A Y VDD VSS\n"
                "*.PININFO A:I Y:O VDD:P VSS:G Z:I\n" + pair + ".ENDS\n",
                "undeclared pin");
    expect_fail(".SUBCKT X A Y VDD VSS\n"
                "*.PININFO A:I A:O Y:O VDD:P VSS:G\n" + pair + ".ENDS\n",
                "classified twice");
}

TEST_CASE("topology validation reports suspect structures") {
    CellNetlist good = parse_netlist_file(deck("MXT2_X1.sp"));
    CHECK(validate_topology(good).empty());

    CellNetlist shorted = parse_netlist_text(
        ".SUBCKT X A Y VDD VSS\n"
        "*.PININFO A:I Y:O VDD:P VSS:G\n"
        "MP0 Y A VDD VDD pmos nfin=1\n"
        "MP1 Y A Y VDD pmos nfin=1\n"
        "MN0 Y A VSS VSS nmos nfin=1\n"
        ".ENDS\n",
        "shorted.sp");
    auto warnings = validate_topology(shorted);
    REQUIRE(!warnings.empty());
    bool found = false;
    for (const auto& w : warnings)
        if (w.find("source = drain") != std::string::npos) found = true;
    CHECK(found);

    CellNetlist half = parse_netlist_text(
        ".SUBCKT X A B Y VDD VSS\n"
        "*.PININFO A:I B:I Y:O VDD:P VSS:G\n"
        "MP0 Y A VDD VDD pmos nfin=1\n"
        "MN0 n9 A VSS VSS nmos nfin=1\n"
        ".ENDS\n",
        "half.sp");
    warnings = validate_topology(half);
    bool undriven = false, floating = false;
    for (const auto& w : warnings) {
        if (w.find("not driven by both networks") != std::string::npos) undriven = true;
        if (w.find("floating") != std::string::npos) floating = true;
    }
    CHECK(undriven);
    CHECK(floating);
}
