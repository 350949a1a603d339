#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqbench/disk_model.hpp"
#include "seqbench/units.hpp"

namespace seqbench {

enum class NodeKind { disk, controller, slot, bridge, system };

inline const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::disk: return "disk";
        case NodeKind::controller: return "controller";
        case NodeKind::slot: return "slot";
        case NodeKind::bridge: return "bridge";
        case NodeKind::system: return "system";
    }
    return "?";
}

inline int kind_rank(NodeKind k) { return static_cast<int>(k); }

constexpr double kUnlimited = std::numeric_limits<double>::infinity();

struct TopoNode {
    std::string id;
    NodeKind kind = NodeKind::disk;
    int parent = -1;  // index into Topology::nodes(), -1 for roots
    double cap_read = kUnlimited;   // MB/s
    double cap_write = kUnlimited;  // MB/s

    double cap(Mode m) const { return m == Mode::read ? cap_read : cap_write; }
};

struct CpuModel {
    int n_processors = 1;
    double pct_per_gbps = 0.0;  // percent of one processor per GB/s moved
};

class TopoParseError : public std::runtime_error {
public:
    TopoParseError(int line, const std::string& what)
        : std::runtime_error("topology: line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class UnknownPresetError : public std::runtime_error {
public:
    explicit UnknownPresetError(const std::string& name)
        : std::runtime_error("unknown preset: " + name) {}
};

// Tree of capacity-capped nodes: disk -> controller -> slot -> bridge -> system.
// Built from a line-oriented config, one node per line:
//
//   <id> <kind> <parent|-> <cap_read|inf> <cap_write|inf>
//   cpu <n_processors> <cpu_pct_per_gbps>
//
// Parents must be declared before their children; '#' starts a comment.
class Topology {
public:
    const std::vector<TopoNode>& nodes() const { return nodes_; }
    const TopoNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    const CpuModel& cpu() const { return cpu_; }

    int find(const std::string& id) const {
        auto it = index_.find(id);
        return it == index_.end() ? -1 : it->second;
    }

    int require(const std::string& id) const {
        int i = find(id);
        if (i < 0) throw std::invalid_argument("unknown disk or node: " + id);
        return i;
    }

    std::vector<int> disk_indices() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].kind == NodeKind::disk) out.push_back(static_cast<int>(i));
        return out;
    }

    std::vector<std::string> disk_ids() const {
        std::vector<std::string> out;
        for (const auto& n : nodes_)
            if (n.kind == NodeKind::disk) out.push_back(n.id);
        return out;
    }

    // Disk caps double as the model's outer-band rates; inner zones run at
    // 60% of the outer band and requests carry the default 5 ms overhead.
    SimDiskModel disk_model(int i) const {
        const TopoNode& n = node(i);
        if (n.kind != NodeKind::disk) throw std::invalid_argument(n.id + " is not a disk");
        SimDiskModel m;
        m.cap_outer_read = n.cap_read == kUnlimited ? 60.0 : n.cap_read;
        m.cap_outer_write = n.cap_write == kUnlimited ? 60.0 : n.cap_write;
        m.cap_inner_read = 0.6 * m.cap_outer_read;
        m.cap_inner_write = 0.6 * m.cap_outer_write;
        return m;
    }

    static Topology parse(const std::string& text) {
        Topology topo;
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        bool saw_cpu = false;
        while (std::getline(in, raw)) {
            ++lineno;
            const std::string line = strip_comment(raw);
            std::istringstream ls(line);
            std::string tok0;
            if (!(ls >> tok0)) continue;  // blank
            if (tok0 == "cpu") {
                if (saw_cpu) throw TopoParseError(lineno, "duplicate cpu line");
                long n = 0;
                double pct = 0;
                std::string extra;
                if (!(ls >> n >> pct) || (ls >> extra))
                    throw TopoParseError(lineno, "expected: cpu <n_processors> <cpu_pct_per_gbps>");
                if (n < 1) throw TopoParseError(lineno, "n_processors must be >= 1");
                if (pct < 0) throw TopoParseError(lineno, "cpu_pct_per_gbps must be >= 0");
                topo.cpu_.n_processors = static_cast<int>(n);
                topo.cpu_.pct_per_gbps = pct;
                saw_cpu = true;
                continue;
            }
            TopoNode n;
            n.id = tok0;
            std::string kind, parent, capr, capw, extra;
            if (!(ls >> kind >> parent >> capr >> capw) || (ls >> extra))
                throw TopoParseError(lineno, "expected: <id> <kind> <parent|-> <cap_read|inf> <cap_write|inf>");
            n.kind = parse_kind(kind, lineno);
            n.cap_read = parse_cap(capr, lineno);
            n.cap_write = parse_cap(capw, lineno);
            if (topo.index_.count(n.id)) throw TopoParseError(lineno, "duplicate node id: " + n.id);
            if (parent == "-") {
                if (n.kind != NodeKind::system)
                    throw TopoParseError(lineno, "root node must have kind 'system'");
                n.parent = -1;
            } else {
                auto it = topo.index_.find(parent);
                if (it == topo.index_.end())
                    throw TopoParseError(lineno, "parent '" + parent + "' not declared above (orphan node)");
                const TopoNode& p = topo.nodes_[static_cast<std::size_t>(it->second)];
                if (p.kind == NodeKind::disk)
                    throw TopoParseError(lineno, "disk nodes are leaves; '" + parent + "' cannot be a parent");
                const bool bridge_chain = p.kind == NodeKind::bridge && n.kind == NodeKind::bridge;
                if (!bridge_chain && kind_rank(p.kind) <= kind_rank(n.kind))
                    throw TopoParseError(lineno, "parent kind '" + std::string(to_string(p.kind)) +
                                                     "' cannot contain '" + to_string(n.kind) + "'");
                n.parent = it->second;
            }
            topo.index_[n.id] = static_cast<int>(topo.nodes_.size());
            topo.nodes_.push_back(n);
        }
        if (topo.nodes_.empty()) throw TopoParseError(lineno, "empty topology document");
        return topo;
    }

    std::string serialize() const {
        std::ostringstream out;
        for (const auto& n : nodes_) {
            out << n.id << ' ' << to_string(n.kind) << ' '
                << (n.parent < 0 ? "-" : nodes_[static_cast<std::size_t>(n.parent)].id) << ' '
                << cap_str(n.cap_read) << ' ' << cap_str(n.cap_write) << '\n';
        }
        out << "cpu " << cpu_.n_processors << ' ' << cpu_.pct_per_gbps << '\n';
        return out.str();
    }

private:
    static std::string strip_comment(const std::string& s) {
        auto pos = s.find('#');
        return pos == std::string::npos ? s : s.substr(0, pos);
    }

    static NodeKind parse_kind(const std::string& s, int lineno) {
        if (s == "disk") return NodeKind::disk;
        if (s == "controller") return NodeKind::controller;
        if (s == "slot") return NodeKind::slot;
        if (s == "bridge") return NodeKind::bridge;
        if (s == "system") return NodeKind::system;
        throw TopoParseError(lineno, "unknown node kind: " + s);
    }

    static double parse_cap(const std::string& s, int lineno) {
        if (s == "inf") return kUnlimited;
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw TopoParseError(lineno, "bad capacity: " + s);
        }
        if (pos != s.size() || !(v > 0)) throw TopoParseError(lineno, "capacity must be positive or 'inf': " + s);
        return v;
    }

    static std::string cap_str(double c) {
        if (c == kUnlimited) return "inf";
        std::ostringstream o;
        o << c;
        return o.str();
    }

    std::vector<TopoNode> nodes_;
    std::unordered_map<std::string, int> index_;
    CpuModel cpu_;
};

inline Topology load_topology(const std::string& text) { return Topology::parse(text); }

namespace detail {

inline void append_disks(std::string& out, int first, int count, const std::string& parent,
                         const std::string& caps) {
    for (int i = first; i < first + count; ++i)
        out += "disk" + std::to_string(i) + " disk " + parent + " " + caps + "\n";
}

// Dual-Xeon tower, 2003: one 3ware 8506 and two Highpoint RocketRAID 1820
// 8-port SATA controllers on 64/66 PCI-X, 24 disks. The Highpoint pair
// shares a virtual cap: two of them deliver little more than one (400 MB/s
// read) and slightly less than one on writes (334 MB/s).
inline std::string preset_text_xeon() {
    std::string t =
        "# xeon-2003: dual Xeon 2.4, 3ware + 2x Highpoint, 24 SATA disks\n"
        "sys0 system - inf inf\n"
        "pci bridge sys0 inf inf\n"
        "hp-pair bridge pci 400 334\n"
        "slot-3w slot pci 422 422\n"
        "slot-hp1 slot hp-pair 422 422\n"
        "slot-hp2 slot hp-pair 422 422\n"
        "ctl-3ware controller slot-3w 225 200\n"
        "ctl-hp1 controller slot-hp1 346 342\n"
        "ctl-hp2 controller slot-hp2 346 342\n";
    append_disks(t, 0, 8, "ctl-3ware", "60 60");
    append_disks(t, 8, 8, "ctl-hp1", "60 60");
    append_disks(t, 16, 8, "ctl-hp2", "60 60");
    t += "cpu 2 33.3\n";
    return t;
}

// Tyan S2882 white box, dual Opteron 246: three SuperMicro Marvell MV8
// SATA controllers, 8 disks each. Aggregate plateaus at 1.05 GB/s read /
// 1.10 GB/s write regardless of added drives beyond ~19.
inline std::string preset_text_tyan() {
    std::string t =
        "# tyan-s2882: dual Opteron, 3x SuperMicro MV8, 24 SATA disks\n"
        "sys0 system - 1050 1100\n"
        "pcix bridge sys0 inf inf\n"
        "slot0 slot pcix 853 853\n"
        "slot1 slot pcix 853 853\n"
        "slot2 slot pcix 853 853\n"
        "slot3 slot pcix 853 853\n"
        "ctl0 controller slot0 450 450\n"
        "ctl1 controller slot1 450 450\n"
        "ctl2 controller slot2 450 450\n";
    append_disks(t, 0, 8, "ctl0", "60 60");
    append_disks(t, 8, 8, "ctl1", "60 60");
    append_disks(t, 16, 8, "ctl2", "60 60");
    t += "cpu 2 25.7\n";
    return t;
}

// Newisys 4300, quad Opteron: three AMD-8131 PCI-X bridges. Slots 4..7 are
// 64/133 and sit in pairs under the two right-hand bridges, which share one
// uplink; slots 1 (64/66) and 2,3 (64/100) hang off the left bridge.
// Controllers populate slots in the order 5,4,6,7,3,1, eight disks each.
inline std::string preset_text_newisys() {
    std::string t =
        "# newisys-4300: quad Opteron, 6x SuperMicro MV8, 48 SATA disks\n"
        "sys0 system - inf inf\n"
        "ht-right bridge sys0 1700 1700\n"
        "br-low bridge ht-right 900 900\n"
        "br-up bridge ht-right 900 900\n"
        "br-left bridge sys0 500 500\n"
        "slot5 slot br-low 853 853\n"
        "slot4 slot br-low 853 853\n"
        "slot6 slot br-up 853 853\n"
        "slot7 slot br-up 853 853\n"
        "slot3 slot br-left 640 640\n"
        "slot2 slot br-left 640 640\n"
        "slot1 slot br-left 422 422\n"
        "ctl0 controller slot5 450 450\n"
        "ctl1 controller slot4 450 450\n"
        "ctl2 controller slot6 450 450\n"
        "ctl3 controller slot7 450 450\n"
        "ctl4 controller slot3 450 450\n"
        "ctl5 controller slot1 450 450\n";
    for (int c = 0; c < 6; ++c) append_disks(t, c * 8, 8, "ctl" + std::to_string(c), "60 60");
    t += "cpu 4 22.7\n";
    return t;
}

// NEC Express5800/1320Xd, 32-way Itanium2: 21 Qlogic fiber-channel HBAs,
// ~195 MB/s of user data each, modeled with 4 disks per HBA. Bandwidth is
// linear in HBA count until the 3.5 GB/s system ceiling.
inline std::string preset_text_nec() {
    std::string t =
        "# nec-1320xd: 32x Itanium2, 21 Qlogic FC HBAs\n"
        "sys0 system - 3500 3500\n";
    for (int h = 0; h < 21; ++h) t += "hba" + std::to_string(h) + " controller sys0 195 195\n";
    for (int h = 0; h < 21; ++h) append_disks(t, h * 4, 4, "hba" + std::to_string(h), "60 60");
    t += "cpu 32 33.3\n";
    return t;
}

}  // namespace detail

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"xeon-2003", "tyan-s2882", "newisys-4300",
                                                   "nec-1320xd"};
    return names;
}

inline std::string canonical_preset_name(const std::string& name) {
    if (name == "xeon" || name == "xeon-2003") return "xeon-2003";
    if (name == "tyan" || name == "tyan-s2882") return "tyan-s2882";
    if (name == "newisys" || name == "newisys-4300") return "newisys-4300";
    if (name == "nec" || name == "nec-1320xd") return "nec-1320xd";
    throw UnknownPresetError(name);
}

inline std::string preset_text(const std::string& name) {
    const std::string canon = canonical_preset_name(name);
    if (canon == "xeon-2003") return detail::preset_text_xeon();
    if (canon == "tyan-s2882") return detail::preset_text_tyan();
    if (canon == "newisys-4300") return detail::preset_text_newisys();
    return detail::preset_text_nec();
}

inline Topology preset(const std::string& name) { return Topology::parse(preset_text(name)); }

}  // namespace seqbench
