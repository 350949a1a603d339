#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "seqbench/topology.hpp"

namespace seqbench {

// A flow demand against one disk, in MB/s. Several demands may target the
// same disk; they then share its capacity like any other contended node.
struct Demand {
    int disk = -1;    // node index of a disk in the topology
    double want = 0;  // requested rate, MB/s (finite, >= 0)
};

struct FlowResult {
    std::vector<double> alloc;  // granted rate per demand, same order
    double total = 0;           // sum of grants, MB/s
};

// Max-min fair allocation by progressive filling: every unfrozen demand
// grows at the same rate until it reaches its own request or some node on
// its path to the root runs out of capacity, at which point it freezes.
// Event-driven, so the answer is exact up to floating point.
inline FlowResult solve_flows(const Topology& topo, const std::vector<Demand>& demands, Mode mode) {
    const std::size_t nd = demands.size();
    const std::size_t nn = topo.nodes().size();

    std::vector<std::vector<int>> chain(nd);  // capped nodes on each demand's root path
    for (std::size_t d = 0; d < nd; ++d) {
        if (demands[d].disk < 0 || static_cast<std::size_t>(demands[d].disk) >= nn)
            throw std::invalid_argument("flow demand targets an unknown node");
        if (topo.node(demands[d].disk).kind != NodeKind::disk)
            throw std::invalid_argument("flow demand must target a disk node");
        if (!(demands[d].want >= 0) || !std::isfinite(demands[d].want))
            throw std::invalid_argument("flow demand must be finite and non-negative");
        for (int i = demands[d].disk; i >= 0; i = topo.node(i).parent)
            if (topo.node(i).cap(mode) != kUnlimited) chain[d].push_back(i);
    }

    std::vector<double> residual(nn, kUnlimited);
    for (std::size_t i = 0; i < nn; ++i) residual[i] = topo.node(static_cast<int>(i)).cap(mode);

    std::vector<int> active_below(nn, 0);
    std::vector<bool> frozen(nd, false);
    std::vector<double> alloc(nd, 0.0);
    std::size_t n_active = 0;

    auto freeze = [&](std::size_t d) {
        frozen[d] = true;
        --n_active;
        for (int i : chain[d]) --active_below[i];
    };

    for (std::size_t d = 0; d < nd; ++d) {
        if (demands[d].want > 0) {
            ++n_active;
            for (int i : chain[d]) ++active_below[i];
        } else {
            frozen[d] = true;
        }
    }

    while (n_active > 0) {
        double step = kUnlimited;
        for (std::size_t d = 0; d < nd; ++d)
            if (!frozen[d]) step = std::min(step, demands[d].want - alloc[d]);
        for (std::size_t i = 0; i < nn; ++i)
            if (active_below[i] > 0 && residual[i] != kUnlimited)
                step = std::min(step, residual[i] / active_below[i]);

        for (std::size_t d = 0; d < nd; ++d)
            if (!frozen[d]) alloc[d] += step;
        for (std::size_t i = 0; i < nn; ++i)
            if (active_below[i] > 0 && residual[i] != kUnlimited)
                residual[i] -= active_below[i] * step;

        // Freeze demands that reached their request, then everything under
        // a node that just saturated. Tolerances are relative to the values
        // involved so large topologies behave the same as small ones.
        for (std::size_t d = 0; d < nd; ++d)
            if (!frozen[d] && alloc[d] >= demands[d].want - 1e-9 * (1.0 + demands[d].want))
                freeze(d);
        for (std::size_t d = 0; d < nd; ++d) {
            if (frozen[d]) continue;
            for (int i : chain[d]) {
                if (residual[i] <= 1e-9 * (1.0 + topo.node(i).cap(mode))) {
                    freeze(d);
                    break;
                }
            }
        }
    }

    FlowResult r;
    r.alloc = std::move(alloc);
    for (double a : r.alloc) r.total += a;
    return r;
}

// CPU cost model: percent of one processor consumed scales linearly with
// the data rate; total-percent divides that across all processors.
struct CpuCost {
    double one_proc_pct = 0;
    double total_pct = 0;
};

inline CpuCost cpu_cost(const CpuModel& cpu, double rate_mbps) {
    CpuCost c;
    c.one_proc_pct = cpu.pct_per_gbps * rate_mbps / 1000.0;
    c.total_pct = c.one_proc_pct / cpu.n_processors;
    return c;
}

struct PredictResult {
    double total_mbps = 0;
    std::vector<double> per_disk;  // parallel to the disk list passed in
    CpuCost cpu;
};

// Aggregate bandwidth when one full-depth sequential stream runs against
// each listed disk at once.
inline PredictResult predict(const Topology& topo, const std::vector<int>& disks,
                             std::uint64_t block_bytes, double depth, Mode mode) {
    std::vector<Demand> demands;
    demands.reserve(disks.size());
    for (int d : disks)
        demands.push_back({d, stream_rate(topo.disk_model(d), block_bytes, depth, mode)});
    FlowResult f = solve_flows(topo, demands, mode);
    PredictResult p;
    p.per_disk = std::move(f.alloc);
    p.total_mbps = f.total;
    p.cpu = cpu_cost(topo.cpu(), p.total_mbps);
    return p;
}

inline PredictResult predict_first_n(const Topology& topo, int n_disks, std::uint64_t block_bytes,
                                     double depth, Mode mode) {
    std::vector<int> all = topo.disk_indices();
    if (n_disks < 1 || static_cast<std::size_t>(n_disks) > all.size())
        throw std::invalid_argument("disk count out of range: " + std::to_string(n_disks));
    all.resize(static_cast<std::size_t>(n_disks));
    return predict(topo, all, block_bytes, depth, mode);
}

}  // namespace seqbench
