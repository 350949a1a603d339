#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqbench/engine.hpp"
#include "seqbench/units.hpp"

namespace seqbench {

// The classic measurement grid: every queue depth crossed with every block
// size and direction, 30 seconds per cell.
struct SweepMatrix {
    std::vector<double> depths;          // ascending
    std::vector<std::uint64_t> blocks;   // ascending
    std::vector<Mode> modes = {Mode::read};
    double duration_s = 30;

    void validate() const {
        if (depths.empty() || blocks.empty() || modes.empty())
            throw std::invalid_argument("sweep matrix axes must be non-empty");
        if (!std::is_sorted(depths.begin(), depths.end()) ||
            std::adjacent_find(depths.begin(), depths.end()) != depths.end())
            throw std::invalid_argument("sweep depths must be strictly ascending");
        if (!std::is_sorted(blocks.begin(), blocks.end()) ||
            std::adjacent_find(blocks.begin(), blocks.end()) != blocks.end())
            throw std::invalid_argument("sweep blocks must be strictly ascending");
    }
};

inline SweepMatrix build_default_matrix() {
    SweepMatrix m;
    m.depths = {1, 2, 4, 8, 16, 32, 64};
    for (const char* b : {"64K", "128K", "256K", "512K", "1M", "2M", "4M", "8M", "16M", "30M"})
        m.blocks.push_back(parse_size(b));
    m.modes = {Mode::read, Mode::write};
    m.duration_s = 30;
    return m;
}

// One measurement, already reduced to what the condensed CSV carries.
// Rates and CPU percentages are stored at the precision they are printed
// (one decimal place) so emit -> parse -> emit is byte-identical.
struct ResultRow {
    std::string config;
    int n_disks = 1;
    Mode mode = Mode::read;
    std::uint64_t block_bytes = 0;
    double depth = 0;
    double duration_s = 0;
    std::uint64_t bytes = 0;
    std::uint64_t io_count = 0;
    double rate_mbps = 0;
    double cpu_total_pct = 0;
    double cpu_one_proc_pct = 0;
    std::string backend;
    std::string error;
};

inline const char* condensed_header() {
    return "config,n_disks,mode,block_bytes,depth,duration_s,bytes,io_count,rate_mbps,"
           "cpu_total_pct,cpu_one_proc_pct,backend,error";
}

namespace detail {

inline std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string fmt_tenth(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace detail

inline std::string emit_condensed_row(const ResultRow& r) {
    std::ostringstream o;
    o << detail::csv_safe(r.config) << ',' << r.n_disks << ',' << to_string(r.mode) << ','
      << r.block_bytes << ',' << detail::fmt_g(r.depth) << ',' << detail::fmt_g(r.duration_s)
      << ',' << r.bytes << ',' << r.io_count << ',' << detail::fmt_tenth(r.rate_mbps) << ','
      << detail::fmt_tenth(r.cpu_total_pct) << ',' << detail::fmt_tenth(r.cpu_one_proc_pct) << ','
      << detail::csv_safe(r.backend) << ',' << detail::csv_safe(r.error);
    return o.str();
}

inline std::string emit_condensed(const std::vector<ResultRow>& rows) {
    std::string out = condensed_header();
    out += '\n';
    for (const ResultRow& r : rows) {
        out += emit_condensed_row(r);
        out += '\n';
    }
    return out;
}

class CsvFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::vector<ResultRow> parse_condensed(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != condensed_header())
        throw CsvFormatError("missing or mismatched header line");
    std::vector<ResultRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() != 13)
            throw CsvFormatError("line " + std::to_string(lineno) + ": expected 13 fields, got " +
                                 std::to_string(f.size()));
        try {
            ResultRow r;
            r.config = f[0];
            r.n_disks = std::stoi(f[1]);
            r.mode = mode_from_string(f[2]);
            r.block_bytes = std::stoull(f[3]);
            r.depth = std::stod(f[4]);
            r.duration_s = std::stod(f[5]);
            r.bytes = std::stoull(f[6]);
            r.io_count = std::stoull(f[7]);
            r.rate_mbps = std::stod(f[8]);
            r.cpu_total_pct = std::stod(f[9]);
            r.cpu_one_proc_pct = std::stod(f[10]);
            r.backend = f[11];
            r.error = f[12];
            rows.push_back(std::move(r));
        } catch (const CsvFormatError&) {
            throw;
        } catch (const std::exception& ex) {
            throw CsvFormatError("line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    return rows;
}

// A sweep's fixed half: which targets, how they are opened, how the queue
// is placed. Directions come from the matrix.
struct SweepConfig {
    std::string name;                    // config column in the CSV
    std::vector<std::string> locators;   // one stream per locator, run together
    Buffering buffering = Buffering::unbuffered;
    bool allow_write = false;
    bool force_mock = false;
    double start_offset = 0;
};

inline ResultRow run_cell(const SweepConfig& cfg, Mode mode, double depth, std::uint64_t block,
                          double duration_s) {
    ResultRow row;
    row.config = cfg.name;
    row.n_disks = static_cast<int>(cfg.locators.size());
    row.mode = mode;
    row.block_bytes = block;
    row.depth = depth;
    row.duration_s = duration_s;
    try {
        std::vector<RunSpec> specs;
        specs.reserve(cfg.locators.size());
        for (const std::string& loc : cfg.locators) {
            RunSpec s;
            s.locator = loc;
            s.mode = mode;
            s.buffering = cfg.buffering;
            s.block_bytes = block;
            s.depth = depth;
            s.duration_s = duration_s;
            s.start_offset = static_cast<std::uint64_t>(cfg.start_offset);
            s.allow_write = cfg.allow_write;
            s.force_mock = cfg.force_mock;
            specs.push_back(std::move(s));
        }
        const ParallelResult res = run_parallel(specs);
        row.bytes = res.aggregate.bytes;
        row.io_count = res.aggregate.io_count;
        row.rate_mbps = quantize_tenth(res.aggregate.rate_mbps);
        if (res.aggregate.cpu.supported) {
            row.cpu_total_pct = quantize_tenth(res.aggregate.cpu.total_pct);
            row.cpu_one_proc_pct = quantize_tenth(res.aggregate.cpu.one_proc_pct);
        }
        row.backend = res.streams.empty() ? "" : res.streams.front().backend;
        for (const StreamResult& s : res.streams) {
            if (s.backend != row.backend) row.backend = "mixed";
            if (!s.error.empty() && row.error.empty()) row.error = s.error;
        }
    } catch (const std::exception& ex) {
        row.error = ex.what();
    }
    return row;
}

// Walk the whole grid one cell at a time, mode-major, then depth, then
// block, reporting each finished row through on_row as it lands. A failed
// cell becomes a row with its error field set; the sweep keeps going.
inline std::vector<ResultRow> run_sweep(const SweepConfig& cfg, const SweepMatrix& matrix,
                                        const std::function<void(const ResultRow&)>& on_row = {}) {
    matrix.validate();
    std::vector<ResultRow> rows;
    rows.reserve(matrix.modes.size() * matrix.depths.size() * matrix.blocks.size());
    for (Mode mode : matrix.modes) {
        for (double depth : matrix.depths) {
            for (std::uint64_t block : matrix.blocks) {
                ResultRow row = run_cell(cfg, mode, depth, block, matrix.duration_s);
                if (on_row) on_row(row);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

class IncompleteGridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One mode's rate surface as a plain-text table, blocks down, depths
// across. The rows must tile the full depth x block rectangle exactly
// once; cells that ran but failed render as "-".
inline std::string emit_surface(const std::vector<ResultRow>& rows, Mode mode) {
    std::vector<double> depths;
    std::vector<std::uint64_t> blocks;
    for (const ResultRow& r : rows) {
        if (r.mode != mode) continue;
        if (std::find(depths.begin(), depths.end(), r.depth) == depths.end())
            depths.push_back(r.depth);
        if (std::find(blocks.begin(), blocks.end(), r.block_bytes) == blocks.end())
            blocks.push_back(r.block_bytes);
    }
    if (depths.empty())
        throw IncompleteGridError("no rows for mode " + std::string(to_string(mode)));
    std::sort(depths.begin(), depths.end());
    std::sort(blocks.begin(), blocks.end());
    std::ostringstream o;
    o << "block\\depth";
    for (double d : depths) o << '\t' << detail::fmt_g(d);
    o << '\n';
    for (std::uint64_t b : blocks) {
        o << format_size(b);
        for (double d : depths) {
            const ResultRow* hit = nullptr;
            for (const ResultRow& r : rows) {
                if (r.mode != mode || r.depth != d || r.block_bytes != b) continue;
                if (hit)
                    throw IncompleteGridError("duplicate cell at depth " + detail::fmt_g(d) +
                                              ", block " + std::to_string(b));
                hit = &r;
            }
            if (!hit)
                throw IncompleteGridError("missing cell at depth " + detail::fmt_g(d) +
                                          ", block " + std::to_string(b));
            o << '\t' << (hit->error.empty() ? detail::fmt_tenth(hit->rate_mbps) : "-");
        }
        o << '\n';
    }
    return o.str();
}

struct PlateauPoint {
    double depth = 0;
    std::uint64_t block_bytes = 0;
    double rate_mbps = 0;
};

// First grid point of the mode, scanning depths then blocks in ascending
// order, whose rate reaches the given fraction of the grid maximum.
// Thresholds above the maximum find nothing.
inline std::optional<PlateauPoint> find_plateau(const std::vector<ResultRow>& rows, Mode mode,
                                                double fraction = 0.95) {
    double best = 0;
    for (const ResultRow& r : rows)
        if (r.mode == mode && r.error.empty()) best = std::max(best, r.rate_mbps);
    if (best <= 0) return std::nullopt;
    std::vector<const ResultRow*> ok;
    for (const ResultRow& r : rows)
        if (r.mode == mode && r.error.empty()) ok.push_back(&r);
    std::sort(ok.begin(), ok.end(), [](const ResultRow* a, const ResultRow* b) {
        if (a->depth != b->depth) return a->depth < b->depth;
        return a->block_bytes < b->block_bytes;
    });
    for (const ResultRow* r : ok)
        if (r->rate_mbps >= fraction * best) return PlateauPoint{r->depth, r->block_bytes, r->rate_mbps};
    return std::nullopt;
}

// Relative rate drift between a short and a long run of the same cell;
// near zero for simulated targets, a stability probe for real ones.
inline double long_run_delta(const SweepConfig& cfg, Mode mode, double depth,
                             std::uint64_t block, double short_s, double long_s) {
    const ResultRow a = run_cell(cfg, mode, depth, block, short_s);
    const ResultRow b = run_cell(cfg, mode, depth, block, long_s);
    if (!a.error.empty()) throw std::runtime_error("short run failed: " + a.error);
    if (!b.error.empty()) throw std::runtime_error("long run failed: " + b.error);
    if (a.rate_mbps <= 0) throw std::runtime_error("short run produced no data");
    return (b.rate_mbps - a.rate_mbps) / a.rate_mbps;
}

}  // namespace seqbench
