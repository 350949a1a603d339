#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

namespace seqbench {

// System-wide CPU accounting from /proc/stat. Jiffy counters, so usage is
// the delta between two samples; returns supported=false where the file
// does not exist rather than inventing numbers.
struct CpuSample {
    std::uint64_t busy = 0;
    std::uint64_t total = 0;
    bool valid = false;
};

inline CpuSample read_cpu_sample(const std::string& path = "/proc/stat") {
    CpuSample s;
    std::ifstream in(path);
    if (!in) return s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("cpu ", 0) != 0) continue;
        std::istringstream ls(line);
        std::string label;
        ls >> label;
        std::uint64_t v = 0;
        std::uint64_t fields[10] = {};
        int n = 0;
        while (n < 10 && (ls >> v)) fields[n++] = v;
        if (n < 4) return s;
        // user nice system idle iowait irq softirq steal guest guest_nice
        const std::uint64_t idle = fields[3] + (n > 4 ? fields[4] : 0);
        std::uint64_t all = 0;
        for (int i = 0; i < n && i < 8; ++i) all += fields[i];
        s.busy = all - idle;
        s.total = all;
        s.valid = true;
        return s;
    }
    return s;
}

struct CpuUsage {
    double total_pct = 0;     // percent of all processors combined
    double one_proc_pct = 0;  // same load expressed against a single processor
    bool supported = false;
};

inline CpuUsage cpu_usage_between(const CpuSample& a, const CpuSample& b, int n_processors) {
    CpuUsage u;
    if (!a.valid || !b.valid || b.total <= a.total) return u;
    u.total_pct = 100.0 * static_cast<double>(b.busy - a.busy) /
                  static_cast<double>(b.total - a.total);
    u.one_proc_pct = u.total_pct * n_processors;
    u.supported = true;
    return u;
}

inline int online_processors() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace seqbench
