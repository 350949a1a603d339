#pragma once

#include <algorithm>
#include <barrier>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "seqbench/backend.hpp"
#include "seqbench/cpu_stat.hpp"
#include "seqbench/flow.hpp"
#include "seqbench/stripe.hpp"
#include "seqbench/units.hpp"

namespace seqbench {

struct RunSpec {
    std::string locator;
    Mode mode = Mode::read;
    Buffering buffering = Buffering::unbuffered;
    std::uint64_t block_bytes = 1048576;
    double depth = 4;  // integral for real targets; sim accepts fractions
    double duration_s = 30;
    std::uint64_t start_offset = 0;
    bool allow_write = false;
    bool force_mock = false;  // sim targets only: drive the mock transport instead
};

struct StreamResult {
    std::string locator;
    std::uint64_t bytes = 0;
    std::uint64_t io_count = 0;
    double elapsed_s = 0;
    double rate_mbps = 0;
    CpuUsage cpu;
    std::string backend;  // "real", "mock" or "sim"
    std::string error;    // empty on success
};

namespace detail {

struct LoopStats {
    std::uint64_t bytes = 0;
    std::uint64_t io_count = 0;
    double elapsed_s = 0;
    std::string error;
};

// The overlapped control loop: keep `depth` requests in flight, walking the
// target sequentially and wrapping at the last whole block. Completions
// arriving after the deadline still count; nothing new is submitted then.
inline LoopStats run_device_loop(AsyncDevice& dev, std::uint64_t start_offset,
                                 std::uint64_t usable, std::uint64_t block, int depth,
                                 double duration_s) {
    LoopStats s;
    const double t0 = dev.now_s();
    const double deadline = t0 + duration_s;
    std::uint64_t k = 0;
    int inflight = 0;
    auto offset_of = [&](std::uint64_t i) { return start_offset + (i * block) % usable; };
    for (; inflight < depth; ++inflight) dev.submit({offset_of(k++), block});
    double last_t = t0;
    while (inflight > 0) {
        IoCompletion c = dev.wait_one();
        --inflight;
        if (!c.ok) {
            s.error = c.error;
            break;
        }
        s.bytes += c.bytes;
        ++s.io_count;
        last_t = dev.now_s();
        if (last_t < deadline) {
            dev.submit({offset_of(k++), block});
            ++inflight;
        }
    }
    while (inflight > 0) {
        dev.wait_one();
        --inflight;
    }
    s.elapsed_s = std::max(last_t - t0, 0.0);
    return s;
}

inline void check_geometry(const Target& t, const RunSpec& spec) {
    if (spec.block_bytes == 0) throw std::invalid_argument("block size must be positive");
    if (!(spec.duration_s > 0)) throw std::invalid_argument("duration must be positive");
    if (!(spec.depth > 0)) throw std::invalid_argument("queue depth must be positive");
    if (spec.block_bytes % t.granule != 0)
        throw std::invalid_argument("block size must be a multiple of " +
                                    std::to_string(t.granule) + " for " + t.locator);
    if (spec.start_offset % t.granule != 0)
        throw std::invalid_argument("start offset must be a multiple of " +
                                    std::to_string(t.granule) + " for " + t.locator);
    if (t.size_bytes < spec.start_offset + spec.block_bytes)
        throw std::invalid_argument(t.locator + " is smaller than one block past the start offset");
}

inline int integral_depth(double depth) {
    const int d = static_cast<int>(depth);
    if (static_cast<double>(d) != depth || d < 1)
        throw std::invalid_argument("queue depth must be a whole number of requests here");
    return d;
}

inline std::uint64_t usable_bytes(const Target& t, const RunSpec& spec) {
    return (t.size_bytes - spec.start_offset) / spec.block_bytes * spec.block_bytes;
}

inline StreamResult finish(StreamResult r, const LoopStats& s) {
    r.bytes = s.bytes;
    r.io_count = s.io_count;
    r.elapsed_s = s.elapsed_s;
    r.error = s.error;
    r.rate_mbps = s.elapsed_s > 0 ? compute_rate_mbps(s.bytes, s.elapsed_s) : 0.0;
    return r;
}

}  // namespace detail

namespace detail {

// Simulated streams report the model's steady rate directly; the byte and
// request counts are the whole blocks that fit in the duration at that
// rate, so they trail the rate by less than one block per run.
inline StreamResult make_sim_result(const RunSpec& spec, double granted_mbps,
                                    const CpuModel& cpu) {
    StreamResult r;
    r.locator = spec.locator;
    r.backend = "sim";
    r.io_count = static_cast<std::uint64_t>(granted_mbps * 1e6 * spec.duration_s /
                                            static_cast<double>(spec.block_bytes));
    r.bytes = r.io_count * spec.block_bytes;
    r.elapsed_s = spec.duration_s;
    r.rate_mbps = granted_mbps;
    const CpuCost c = cpu_cost(cpu, r.rate_mbps);
    r.cpu = {c.total_pct, c.one_proc_pct, true};
    return r;
}

}  // namespace detail

inline StreamResult run_sim_stream(const Topology& topo, const std::string& disk_id,
                                   const RunSpec& spec) {
    const int idx = topo.require(disk_id);
    const double want = stream_rate(topo.disk_model(idx), spec.block_bytes, spec.depth, spec.mode);
    const FlowResult f = solve_flows(topo, {{idx, want}}, spec.mode);
    return detail::make_sim_result(spec, f.total, topo.cpu());
}

inline StreamResult run_stream(const RunSpec& spec) {
    const Target t = open_target(spec.locator, spec.mode, spec.allow_write);
    detail::check_geometry(t, spec);
    if (t.kind == Target::Kind::sim) {
        Topology topo = resolve_topology(t.preset_name);
        if (!spec.force_mock) return run_sim_stream(topo, t.disk_id, spec);
        MockDevice dev(topo.disk_model(topo.require(t.disk_id)), spec.mode);
        StreamResult r;
        r.locator = spec.locator;
        r.backend = "mock";
        return detail::finish(std::move(r),
                              detail::run_device_loop(dev, spec.start_offset,
                                                      detail::usable_bytes(t, spec),
                                                      spec.block_bytes,
                                                      detail::integral_depth(spec.depth),
                                                      spec.duration_s));
    }
    const int depth = detail::integral_depth(spec.depth);
    FileDevice dev(t.path, spec.mode, spec.buffering, depth, spec.block_bytes);
    StreamResult r;
    r.locator = spec.locator;
    r.backend = "real";
    const CpuSample c0 = read_cpu_sample();
    detail::LoopStats s = detail::run_device_loop(dev, spec.start_offset,
                                                  detail::usable_bytes(t, spec),
                                                  spec.block_bytes, depth, spec.duration_s);
    const CpuSample c1 = read_cpu_sample();
    r = detail::finish(std::move(r), s);
    r.cpu = cpu_usage_between(c0, c1, online_processors());
    return r;
}

struct AggregateResult {
    std::uint64_t bytes = 0;
    std::uint64_t io_count = 0;
    double window_s = 0;  // widest single-stream elapsed time
    double rate_mbps = 0;
    CpuUsage cpu;
};

struct ParallelResult {
    std::vector<StreamResult> streams;
    AggregateResult aggregate;
};

// Run several streams at once. Real-file streams get a thread each and
// start together behind a barrier; simulated streams against the same
// preset and mode are solved jointly so they contend for shared hardware.
inline ParallelResult run_parallel(const std::vector<RunSpec>& specs) {
    ParallelResult out;
    out.streams.resize(specs.size());

    struct SimEntry {
        std::size_t slot;
        Target target;
    };
    std::map<std::pair<std::string, Mode>, std::vector<SimEntry>> sim_groups;
    std::vector<std::size_t> device_slots;

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const Target t = open_target(specs[i].locator, specs[i].mode, specs[i].allow_write);
        detail::check_geometry(t, specs[i]);
        if (t.kind == Target::Kind::sim && !specs[i].force_mock)
            sim_groups[{t.preset_name, specs[i].mode}].push_back({i, t});
        else
            device_slots.push_back(i);
    }

    for (auto& [key, group] : sim_groups) {
        Topology topo = resolve_topology(key.first);
        std::vector<Demand> demands;
        demands.reserve(group.size());
        for (const SimEntry& e : group) {
            const int idx = topo.require(e.target.disk_id);
            demands.push_back({idx, stream_rate(topo.disk_model(idx), specs[e.slot].block_bytes,
                                                specs[e.slot].depth, specs[e.slot].mode)});
        }
        const FlowResult f = solve_flows(topo, demands, key.second);
        for (std::size_t j = 0; j < group.size(); ++j)
            out.streams[group[j].slot] =
                detail::make_sim_result(specs[group[j].slot], f.alloc[j], topo.cpu());
    }

    CpuUsage measured;
    if (!device_slots.empty()) {
        std::barrier gate(static_cast<std::ptrdiff_t>(device_slots.size()));
        std::vector<std::thread> threads;
        const CpuSample c0 = read_cpu_sample();
        for (std::size_t slot : device_slots) {
            threads.emplace_back([&, slot] {
                const RunSpec& spec = specs[slot];
                StreamResult r;
                r.locator = spec.locator;
                try {
                    const Target t = open_target(spec.locator, spec.mode, spec.allow_write);
                    const int depth = detail::integral_depth(spec.depth);
                    std::unique_ptr<AsyncDevice> dev;
                    if (t.kind == Target::Kind::sim) {
                        Topology topo = resolve_topology(t.preset_name);
                        dev = std::make_unique<MockDevice>(topo.disk_model(topo.require(t.disk_id)),
                                                           spec.mode);
                        r.backend = "mock";
                    } else {
                        dev = std::make_unique<FileDevice>(t.path, spec.mode, spec.buffering, depth,
                                                           spec.block_bytes);
                        r.backend = "real";
                    }
                    gate.arrive_and_wait();
                    r = detail::finish(std::move(r),
                                       detail::run_device_loop(*dev, spec.start_offset,
                                                               detail::usable_bytes(t, spec),
                                                               spec.block_bytes, depth,
                                                               spec.duration_s));
                } catch (const std::exception& ex) {
                    gate.arrive_and_drop();
                    r.error = ex.what();
                }
                out.streams[slot] = std::move(r);
            });
        }
        for (auto& th : threads) th.join();
        const CpuSample c1 = read_cpu_sample();
        measured = cpu_usage_between(c0, c1, online_processors());
    }

    AggregateResult& agg = out.aggregate;
    bool all_sim = !out.streams.empty();
    double sim_rate_sum = 0;
    for (const StreamResult& r : out.streams) {
        agg.bytes += r.bytes;
        agg.io_count += r.io_count;
        agg.window_s = std::max(agg.window_s, r.elapsed_s);
        sim_rate_sum += r.rate_mbps;
        if (r.backend != "sim") all_sim = false;
    }
    // Simulated aggregates stay in rate space; measured ones come from the
    // byte totals over the widest stream window.
    if (all_sim)
        agg.rate_mbps = sim_rate_sum;
    else
        agg.rate_mbps = agg.window_s > 0 ? compute_rate_mbps(agg.bytes, agg.window_s) : 0.0;
    if (!device_slots.empty()) {
        agg.cpu = measured;
    } else if (sim_groups.size() == 1) {
        const Topology topo = resolve_topology(sim_groups.begin()->first.first);
        const CpuCost c = cpu_cost(topo.cpu(), agg.rate_mbps);
        agg.cpu = {c.total_pct, c.one_proc_pct, true};
    }
    return out;
}

// Striped-volume simulation: the first n disks are dealt into volumes, each
// volume spreads one stream's queue across its member disks (depth/n per
// disk, block unchanged), and every demand is solved jointly.
struct VolumeSimResult {
    std::vector<int> volume_sizes;
    std::vector<double> volume_mbps;
    double total_mbps = 0;
    CpuCost cpu;
};

inline VolumeSimResult simulate_volumes(const Topology& topo, int n_disks,
                                        std::uint64_t block_bytes, double depth, Mode mode,
                                        int max_per_volume = 32) {
    const std::vector<int> all = topo.disk_indices();
    if (n_disks < 1 || static_cast<std::size_t>(n_disks) > all.size())
        throw std::invalid_argument("disk count out of range: " + std::to_string(n_disks));
    const auto groups = assign_volumes(n_disks, max_per_volume);
    VolumeSimResult res;
    std::vector<Demand> demands;
    std::vector<std::size_t> volume_of;
    for (std::size_t v = 0; v < groups.size(); ++v) {
        res.volume_sizes.push_back(static_cast<int>(groups[v].size()));
        const double per_disk_depth = depth / static_cast<double>(groups[v].size());
        for (int local : groups[v]) {
            const int disk = all[static_cast<std::size_t>(local)];
            demands.push_back(
                {disk, stream_rate(topo.disk_model(disk), block_bytes, per_disk_depth, mode)});
            volume_of.push_back(v);
        }
    }
    const FlowResult f = solve_flows(topo, demands, mode);
    res.volume_mbps.assign(groups.size(), 0.0);
    for (std::size_t d = 0; d < demands.size(); ++d) res.volume_mbps[volume_of[d]] += f.alloc[d];
    res.total_mbps = f.total;
    res.cpu = cpu_cost(topo.cpu(), res.total_mbps);
    return res;
}

// Side-by-side: independent per-disk streams versus striped volumes over
// the same disks, same total queue depth per stream.
struct CompareResult {
    PredictResult jbod;
    VolumeSimResult striped;
    double gap_mbps = 0;  // jbod minus striped
    double gap_pct = 0;   // gap relative to jbod
};

inline CompareResult simulate_compare(const Topology& topo, int n_disks,
                                      std::uint64_t block_bytes, double depth, Mode mode,
                                      int max_per_volume = 32) {
    CompareResult c;
    c.jbod = predict_first_n(topo, n_disks, block_bytes, depth, mode);
    c.striped = simulate_volumes(topo, n_disks, block_bytes, depth, mode, max_per_volume);
    c.gap_mbps = c.jbod.total_mbps - c.striped.total_mbps;
    c.gap_pct = c.jbod.total_mbps > 0 ? 100.0 * c.gap_mbps / c.jbod.total_mbps : 0.0;
    return c;
}

}  // namespace seqbench
