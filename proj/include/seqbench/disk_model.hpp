#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "seqbench/units.hpp"

namespace seqbench {

// Single-disk performance model: zoned sequential bandwidth (outer tracks
// transfer faster than inner ones) plus a fixed per-request service overhead.
struct SimDiskModel {
    double cap_outer_read = 60.0;   // MB/s at zone 0
    double cap_outer_write = 60.0;
    double cap_inner_read = 36.0;   // MB/s at zone 1
    double cap_inner_write = 36.0;
    double overhead_s = 0.005;      // per-request service overhead
    double zone = 0.0;              // 0 = outermost track, 1 = innermost
    std::uint64_t size_bytes = 250'000'000'000ull;

    void validate() const {
        if (cap_outer_read <= 0 || cap_outer_write <= 0 || cap_inner_read <= 0 || cap_inner_write <= 0)
            throw std::invalid_argument("disk caps must be > 0");
        if (cap_inner_read > cap_outer_read || cap_inner_write > cap_outer_write)
            throw std::invalid_argument("inner caps must not exceed outer caps");
        if (overhead_s < 0) throw std::invalid_argument("overhead must be >= 0");
        if (zone < 0 || zone > 1) throw std::invalid_argument("zone must be in [0,1]");
    }
};

// Sustained sequential rate of the disk at its zone, MB/s.
inline double disk_rate(const SimDiskModel& m, Mode mode) {
    const double outer = mode == Mode::read ? m.cap_outer_read : m.cap_outer_write;
    const double inner = mode == Mode::read ? m.cap_inner_read : m.cap_inner_write;
    return outer + m.zone * (inner - outer);
}

// Pre-contention demand of one sequential stream against this disk.
// One request costs overhead_s plus transfer time at the disk rate; `depth`
// overlapped requests pipeline, saturating at the disk rate. `depth` may be
// fractional (striped streams fan a logical depth out across member disks).
inline double stream_rate(const SimDiskModel& m, std::uint64_t block_bytes, double depth, Mode mode) {
    if (block_bytes == 0) throw std::invalid_argument("block_bytes must be > 0");
    if (!(depth > 0)) throw std::invalid_argument("depth must be > 0");
    const double rate = disk_rate(m, mode);
    const double service_s = m.overhead_s + static_cast<double>(block_bytes) / (rate * 1e6);
    const double pipelined = depth * static_cast<double>(block_bytes) / service_s / 1e6;
    return std::min(rate, pipelined);
}

}  // namespace seqbench
