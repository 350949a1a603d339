#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <sstream>

#include "seqbench/topology.hpp"

using namespace seqbench;

namespace {

const char* kTiny =
    "root system - 1000 1000\n"
    "ctl controller root 450 450\n"
    "d0 disk ctl 60 55\n"
    "d1 disk ctl inf inf\n"
    "cpu 2 25.0\n";

int error_line(const std::string& text) {
    try {
        Topology::parse(text);
    } catch (const TopoParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("well-formed documents parse") {
    const Topology t = Topology::parse(kTiny);
    REQUIRE(t.nodes().size() == 4);
    CHECK(t.node(0).kind == NodeKind::system);
    CHECK(t.node(0).cap_read == 1000.0);
    CHECK(t.node(1).parent == 0);
    CHECK(t.find("d0") == 2);
    CHECK(t.find("nope") == -1);
    CHECK(t.node(2).cap_write == 55.0);
    CHECK(t.node(3).cap_read == kUnlimited);
    CHECK(t.cpu().n_processors == 2);
    CHECK(t.cpu().pct_per_gbps == 25.0);
    CHECK(t.disk_ids() == std::vector<std::string>{"d0", "d1"});
}

TEST_CASE("comments and blank lines are ignored") {
    const Topology t = Topology::parse("# hello\n\nroot system - inf inf  # trailing\n");
    CHECK(t.nodes().size() == 1);
}

TEST_CASE("parse errors carry the offending line number") {
    CHECK(error_line("") == 0);
    CHECK(error_line("root system - inf\n") == 1);                       // missing field
    CHECK(error_line("root system - inf inf extra\n") == 1);             // extra field
    CHECK(error_line("root widget - inf inf\n") == 1);                   // unknown kind
    CHECK(error_line("root system - -5 inf\n") == 1);                    // negative cap
    CHECK(error_line("root system - fast inf\n") == 1);                  // non-numeric cap
    CHECK(error_line("root bridge - inf inf\n") == 1);                   // root must be system
    CHECK(error_line("root system - inf inf\nd disk ghost 60 60\n") == 2);  // undeclared parent
    CHECK(error_line("root system - inf inf\nroot system - inf inf\n") == 2);  // duplicate id
    CHECK(error_line(std::string(kTiny) + "cpu 2 25.0\n") == 6);         // duplicate cpu
    CHECK(error_line("root system - inf inf\ncpu 0 25\n") == 2);         // bad processor count
    CHECK(error_line("root system - inf inf\ncpu 2 -1\n") == 2);         // negative cpu cost
}

TEST_CASE("hierarchy order is enforced") {
    // disks are leaves
    CHECK(error_line("r system - inf inf\nc controller r 1 1\nd disk c 1 1\nx disk d 1 1\n") == 4);
    // a slot cannot contain a bridge
    CHECK(error_line("r system - inf inf\ns slot r 1 1\nb bridge s 1 1\n") == 3);
    // a controller cannot contain a slot
    CHECK(error_line("r system - inf inf\nc controller r 1 1\ns slot c 1 1\n") == 3);
    // bridges may nest
    CHECK_NOTHROW(Topology::parse("r system - inf inf\nb1 bridge r 1 1\nb2 bridge b1 1 1\n"));
    // controllers may sit directly under the system
    CHECK_NOTHROW(Topology::parse("r system - inf inf\nc controller r 1 1\n"));
}

TEST_CASE("serialize round-trips through parse") {
    const Topology t = Topology::parse(kTiny);
    const std::string text = t.serialize();
    const Topology u = Topology::parse(text);
    CHECK(u.serialize() == text);
    CHECK(u.nodes().size() == t.nodes().size());
}

TEST_CASE("preset names and aliases resolve") {
    for (const std::string& name : preset_names()) CHECK(canonical_preset_name(name) == name);
    CHECK(canonical_preset_name("tyan") == "tyan-s2882");
    CHECK(canonical_preset_name("xeon") == "xeon-2003");
    CHECK(canonical_preset_name("newisys") == "newisys-4300");
    CHECK(canonical_preset_name("nec") == "nec-1320xd");
    CHECK_THROWS_AS(canonical_preset_name("vax"), UnknownPresetError);
    CHECK_THROWS_AS(preset("vax"), UnknownPresetError);
}

TEST_CASE("preset shapes") {
    const Topology tyan = preset("tyan");
    CHECK(tyan.disk_indices().size() == 24);
    CHECK(tyan.node(tyan.require("sys0")).cap_read == 1050.0);
    CHECK(tyan.node(tyan.require("sys0")).cap_write == 1100.0);
    CHECK(tyan.node(tyan.require("ctl1")).cap_read == 450.0);
    CHECK(tyan.cpu().n_processors == 2);
    CHECK(tyan.cpu().pct_per_gbps == Catch::Approx(25.7));

    const Topology xeon = preset("xeon");
    CHECK(xeon.disk_indices().size() == 24);
    CHECK(xeon.node(xeon.require("ctl-3ware")).cap_read == 225.0);
    CHECK(xeon.node(xeon.require("ctl-3ware")).cap_write == 200.0);
    CHECK(xeon.node(xeon.require("hp-pair")).cap_read == 400.0);
    CHECK(xeon.node(xeon.require("hp-pair")).cap_write == 334.0);

    const Topology newisys = preset("newisys");
    CHECK(newisys.disk_indices().size() == 48);
    CHECK(newisys.node(newisys.require("ht-right")).cap_read == 1700.0);
    CHECK(newisys.node(newisys.require("br-left")).cap_read == 500.0);
    CHECK(newisys.cpu().n_processors == 4);

    const Topology nec = preset("nec");
    CHECK(nec.disk_indices().size() == 84);
    CHECK(nec.node(nec.require("hba20")).cap_read == 195.0);
    CHECK(nec.node(nec.require("sys0")).cap_read == 3500.0);
    CHECK(nec.cpu().n_processors == 32);
}

TEST_CASE("preset disks enumerate in population order") {
    const Topology newisys = preset("newisys");
    // disk0 belongs to the first controller installed (slot 5), disk40 to the last (slot 1)
    const int d0 = newisys.require("disk0");
    const int d40 = newisys.require("disk40");
    CHECK(newisys.node(newisys.node(d0).parent).id == "ctl0");
    CHECK(newisys.node(newisys.node(d40).parent).id == "ctl5");
    const std::vector<std::string> ids = newisys.disk_ids();
    REQUIRE(ids.size() == 48);
    for (int i = 0; i < 48; ++i) CHECK(ids[static_cast<std::size_t>(i)] == "disk" + std::to_string(i));
}

TEST_CASE("disk node caps seed the default disk model") {
    const Topology t = Topology::parse(kTiny);
    const SimDiskModel m = t.disk_model(t.require("d0"));
    CHECK(m.cap_outer_read == 60.0);
    CHECK(m.cap_outer_write == 55.0);
    CHECK(m.cap_inner_read == Catch::Approx(36.0));
    CHECK(m.overhead_s == 0.005);
    CHECK_THROWS_AS(t.disk_model(t.require("ctl")), std::invalid_argument);
}

TEST_CASE("shipped preset files match the built-in definitions") {
    for (const std::string& name : preset_names()) {
        const std::string path = std::string(SEQBENCH_SOURCE_DIR) + "/data/presets/" + name + ".topo";
        std::ifstream in(path, std::ios::binary);
        INFO(path);
        REQUIRE(in.good());
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(text == preset_text(name));
    }
}
