#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <vector>

#include "CLI11.hpp"
#include "seqbench/seqbench.hpp"

namespace {

using namespace seqbench;

std::uint64_t parse_size_arg(const std::string& text, const std::string& flag) {
    try {
        return parse_size(text);
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "expected a size like 4096, 64K, 1M, got '" + text + "'");
    }
}

// Locators of the form sim:<preset> (no disk) mean "the whole machine";
// expand to its first n disks, or all of them.
std::string preset_name_or_raw(const std::string& name) {
    try {
        return canonical_preset_name(name);
    } catch (const UnknownPresetError&) {
        return name;  // may still resolve through SEQBENCH_PRESET_DIR
    }
}

std::vector<std::string> expand_locator(const std::string& loc, int n_disks) {
    if (loc.rfind("sim:", 0) == 0 && loc.find('/') == std::string::npos) {
        const std::string name = preset_name_or_raw(loc.substr(4));
        const Topology topo = resolve_topology(name);
        std::vector<std::string> ids = topo.disk_ids();
        if (n_disks > 0) {
            if (static_cast<std::size_t>(n_disks) > ids.size())
                throw std::runtime_error(name + " has only " + std::to_string(ids.size()) +
                                         " disks");
            ids.resize(static_cast<std::size_t>(n_disks));
        }
        std::vector<std::string> out;
        out.reserve(ids.size());
        for (const std::string& id : ids) out.push_back("sim:" + name + "/" + id);
        return out;
    }
    return {loc};
}

void print_row_human(const ResultRow& row) {
    std::printf("target        %s\n", row.config.c_str());
    std::printf("streams       %d\n", row.n_disks);
    std::printf("mode          %s\n", to_string(row.mode));
    std::printf("block         %llu bytes\n", static_cast<unsigned long long>(row.block_bytes));
    std::printf("depth         %g\n", row.depth);
    std::printf("backend       %s\n", row.backend.c_str());
    std::printf("bytes moved   %llu\n", static_cast<unsigned long long>(row.bytes));
    std::printf("requests      %llu\n", static_cast<unsigned long long>(row.io_count));
    std::printf("duration      %.9g s\n", row.duration_s);
    std::printf("rate          %.1f MB/s\n", row.rate_mbps);
    std::printf("cpu total     %.1f %%\n", row.cpu_total_pct);
    std::printf("cpu one-proc  %.1f %%\n", row.cpu_one_proc_pct);
    if (!row.error.empty()) std::printf("error         %s\n", row.error.c_str());
}

int cmd_run(const std::string& target, Mode mode, bool unbuffered, double duration, int depth,
            const std::string& block_text, std::uint64_t offset, bool allow_write, bool mock,
            bool condensed) {
    SweepConfig cfg;
    cfg.name = target;
    cfg.locators = expand_locator(target, 0);
    cfg.buffering = unbuffered ? Buffering::unbuffered : Buffering::os_buffered;
    cfg.allow_write = allow_write;
    cfg.force_mock = mock;
    cfg.start_offset = static_cast<double>(offset);
    const std::uint64_t block = parse_size_arg(block_text, "-b");
    const ResultRow row = run_cell(cfg, mode, depth, block, duration);
    if (condensed)
        std::fputs(emit_condensed({row}).c_str(), stdout);
    else
        print_row_human(row);
    return row.error.empty() ? 0 : 1;
}

int cmd_sweep(std::vector<std::string> targets, int n_disks, std::vector<Mode> modes,
              bool unbuffered, double duration, const std::string& out_path, bool allow_write,
              bool mock, const std::vector<int>& depths, const std::vector<std::string>& blocks) {
    SweepConfig cfg;
    cfg.buffering = unbuffered ? Buffering::unbuffered : Buffering::os_buffered;
    cfg.allow_write = allow_write;
    cfg.force_mock = mock;
    cfg.name = targets.size() == 1 ? targets.front() : std::to_string(targets.size()) + " targets";
    for (const std::string& t : targets)
        for (std::string& loc : expand_locator(t, n_disks)) cfg.locators.push_back(std::move(loc));

    SweepMatrix matrix = build_default_matrix();
    matrix.modes = std::move(modes);
    matrix.duration_s = duration;
    if (!depths.empty()) matrix.depths.assign(depths.begin(), depths.end());
    if (!blocks.empty()) {
        matrix.blocks.clear();
        for (const std::string& b : blocks) matrix.blocks.push_back(parse_size_arg(b, "--blocks"));
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    *out << condensed_header() << '\n';
    bool failed = false;
    run_sweep(cfg, matrix, [&](const ResultRow& row) {
        *out << emit_condensed_row(row) << '\n';
        out->flush();
        if (!row.error.empty()) failed = true;
    });
    return failed ? 1 : 0;
}

int cmd_gen(const std::string& path, std::uint64_t records, const std::string& size_text,
            std::uint64_t seed, bool verify) {
    if (!size_text.empty()) {
        // power-of-two sizes are never whole records, so round down rather than reject
        const std::uint64_t bytes = parse_size_arg(size_text, "--size");
        records = bytes / kRecordBytes;
        if (records == 0 && bytes != 0)
            throw std::runtime_error("--size smaller than one 100-byte record");
    }
    if (verify) {
        if (records == 0) {
            struct stat st {};
            if (::stat(path.c_str(), &st) != 0) throw std::runtime_error("cannot stat " + path);
            if (st.st_size % static_cast<off_t>(kRecordBytes) != 0)
                throw std::runtime_error(path + " is not whole records long");
            records = static_cast<std::uint64_t>(st.st_size) / kRecordBytes;
        }
        const VerifyResult v = verify_file(path, records, seed);
        if (v.ok) {
            std::printf("ok: %llu records match\n",
                        static_cast<unsigned long long>(v.records_checked));
            return 0;
        }
        std::printf("mismatch at record %llu\n", static_cast<unsigned long long>(v.first_bad));
        return 1;
    }
    if (records == 0) throw std::runtime_error("nothing to do: give --records or --size");
    generate_file(path, records, seed);
    std::printf("wrote %llu records (%llu bytes) to %s\n",
                static_cast<unsigned long long>(records),
                static_cast<unsigned long long>(records * kRecordBytes), path.c_str());
    return 0;
}

ResultRow predicted_row(const std::string& config, int n_disks, Mode mode, std::uint64_t block,
                        int depth, double total_mbps, const CpuCost& cpu) {
    ResultRow row;
    row.config = config;
    row.n_disks = n_disks;
    row.mode = mode;
    row.block_bytes = block;
    row.depth = depth;
    row.duration_s = 0;
    row.rate_mbps = quantize_tenth(total_mbps);
    row.cpu_total_pct = quantize_tenth(cpu.total_pct);
    row.cpu_one_proc_pct = quantize_tenth(cpu.one_proc_pct);
    row.backend = "sim";
    return row;
}

int cmd_simulate(const std::string& preset_name, std::vector<int> counts, int depth,
                 const std::string& block_text, Mode mode, bool volumes, bool compare) {
    const std::string canon = preset_name_or_raw(preset_name);
    const Topology topo = resolve_topology(canon);
    const std::uint64_t block = parse_size_arg(block_text, "-b");
    const int total = static_cast<int>(topo.disk_indices().size());
    if (counts.empty()) counts.push_back(total);

    std::vector<ResultRow> rows;
    for (int n : counts) {
        if (!compare && !volumes) {
            const PredictResult p = predict_first_n(topo, n, block, depth, mode);
            rows.push_back(predicted_row(canon, n, mode, block, depth, p.total_mbps, p.cpu));
            continue;
        }
        if (volumes || compare) {
            const VolumeSimResult v = simulate_volumes(topo, n, block, depth, mode);
            rows.push_back(predicted_row(compare ? canon + "/striped" : canon, n, mode, block,
                                         depth, v.total_mbps, v.cpu));
        }
        if (compare) {
            const CompareResult c = simulate_compare(topo, n, block, depth, mode);
            rows.push_back(
                predicted_row(canon + "/jbod", n, mode, block, depth, c.jbod.total_mbps, c.jbod.cpu));
            std::fprintf(stderr, "compare n_disks=%d jbod=%.1f striped=%.1f gap=%.1f gap_pct=%.1f\n",
                         n, c.jbod.total_mbps, c.striped.total_mbps, c.gap_mbps, c.gap_pct);
        }
    }
    std::fputs(emit_condensed(rows).c_str(), stdout);
    return 0;
}

int cmd_report(const std::string& csv_path, const std::string& mode_filter,
               std::string svg_path, const std::string& title, double plateau_fraction) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + csv_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<ResultRow> rows = parse_condensed(text);
    if (!mode_filter.empty()) {
        const Mode want = mode_from_string(mode_filter);
        std::erase_if(rows, [&](const ResultRow& r) { return r.mode != want; });
    }
    if (rows.empty()) throw std::runtime_error(csv_path + ": no rows left to report");
    for (Mode m : {Mode::read, Mode::write}) {
        if (std::none_of(rows.begin(), rows.end(),
                         [&](const ResultRow& r) { return r.mode == m; }))
            continue;
        std::printf("mode %s\n", to_string(m));
        std::fputs(emit_surface(rows, m).c_str(), stdout);
        if (const auto p = find_plateau(rows, m, plateau_fraction))
            std::printf("plateau depth %g block %llu rate %.1f MB/s\n", p->depth,
                        static_cast<unsigned long long>(p->block_bytes), p->rate_mbps);
        else
            std::printf("plateau none\n");
    }
    if (svg_path.empty()) svg_path = csv_path + ".svg";
    std::ofstream svg(svg_path, std::ios::trunc);
    if (!svg) throw std::runtime_error("cannot write " + svg_path);
    const std::string t = title.empty() ? rows.front().config : title;
    svg << render_heatmap_svg(rows, t);
    std::printf("svg %s\n", svg_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential disk bandwidth measurement and simulation"};
    app.set_help_flag("--help", "print usage");
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "measure one target");
    run->set_help_flag("--help", "print usage");
    std::string run_target, run_block = "1M";
    bool run_unbuffered = false, run_write = false, run_condensed = false, run_mock = false,
         run_allow_write = false;
    double run_duration = 30;
    int run_depth = 4;
    std::uint64_t run_offset = 0;
    run->add_option("target", run_target, "file:<path> or sim:<preset>/<disk>")->required();
    run->add_flag("-h", run_unbuffered, "bypass the OS file cache");
    run->add_flag("-w", run_write, "write instead of read");
    run->add_flag("-x", run_condensed, "condensed CSV output");
    run->add_option("-d", run_duration, "seconds to run (default 30)");
    run->add_option("-o", run_depth, "outstanding requests (default 4)");
    run->add_option("-b", run_block, "request size, K/M suffixes binary (default 1M)");
    run->add_option("--offset", run_offset, "start offset in bytes");
    run->add_flag("--allow-write", run_allow_write, "consent to overwrite a non-generated file");
    run->add_flag("--mock", run_mock, "drive sim targets through the mock transport");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "depth x block grid over targets");
    sweep->set_help_flag("--help", "print usage");
    std::vector<std::string> sweep_targets;
    std::string sweep_out;
    bool sweep_unbuffered = true, sweep_write = false, sweep_both = false,
         sweep_allow_write = false, sweep_mock = false;
    double sweep_duration = 30;
    int sweep_disks = 0;
    std::vector<int> sweep_depths;
    std::vector<std::string> sweep_blocks;
    sweep->add_option("targets", sweep_targets, "locators; sim:<preset> expands to its disks")
        ->required();
    sweep->add_option("--disks", sweep_disks, "limit sim:<preset> expansion to first N disks");
    sweep->add_flag("-w", sweep_write, "write instead of read");
    sweep->add_flag("--both", sweep_both, "sweep reads and writes in one pass");
    sweep->add_option("-d", sweep_duration, "seconds per cell (default 30)");
    sweep->add_option("--depths", sweep_depths, "queue depths to visit")->delimiter(',');
    sweep->add_option("--blocks", sweep_blocks, "block sizes to visit")->delimiter(',');
    sweep->add_option("--out", sweep_out, "write CSV here instead of stdout");
    sweep->add_flag("--buffered", [&](std::int64_t) { sweep_unbuffered = false; },
                    "go through the OS file cache");
    sweep->add_flag("--allow-write", sweep_allow_write, "consent to overwrite non-generated files");
    sweep->add_flag("--mock", sweep_mock, "drive sim targets through the mock transport");

    // gen
    auto* gen = app.add_subcommand("gen", "create or check a benchmark file");
    gen->set_help_flag("--help", "print usage");
    std::string gen_path, gen_size;
    std::uint64_t gen_records = 0, gen_seed = 1;
    bool gen_verify = false;
    gen->add_option("path", gen_path, "benchmark file")->required();
    gen->add_option("--records", gen_records, "number of 100-byte records");
    gen->add_option("--size", gen_size,
                    "total size, K/M/G suffixes allowed, rounded down to whole records");
    gen->add_option("--seed", gen_seed, "key seed (default 1)");
    gen->add_flag("--verify", gen_verify, "check an existing file instead of writing");

    // simulate
    auto* sim = app.add_subcommand("simulate", "predict a machine's throughput, no hardware");
    sim->set_help_flag("--help", "print usage");
    std::string sim_preset, sim_block = "1M";
    std::vector<int> sim_disks;
    int sim_depth = 64;
    bool sim_write = false, sim_volumes = false, sim_compare = false;
    sim->add_option("--preset", sim_preset, "machine preset name")->required();
    sim->add_option("--disks", sim_disks, "disk counts to predict, comma separated")
        ->delimiter(',');
    sim->add_option("-o", sim_depth, "queue depth per stream (default 64)");
    sim->add_option("-b", sim_block, "request size (default 1M)");
    sim->add_flag("-w", sim_write, "model writes");
    sim->add_flag("--volumes", sim_volumes, "striped volumes instead of independent disks");
    sim->add_flag("--compare", sim_compare, "report independent disks versus striped volumes");

    // report
    auto* rep = app.add_subcommand("report", "surfaces and plateau summary from a sweep CSV");
    rep->set_help_flag("--help", "print usage");
    std::string rep_csv, rep_svg, rep_title, rep_mode;
    double rep_fraction = 0.95;
    rep->add_option("--in", rep_csv, "condensed CSV produced by sweep")->required();
    rep->add_option("--mode", rep_mode, "only rows with this mode (read or write)");
    rep->add_option("--svg", rep_svg, "heatmap path (default: <in>.svg)");
    rep->add_option("--title", rep_title, "heatmap title");
    rep->add_option("--plateau-fraction", rep_fraction, "plateau threshold (default 0.95)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(run))
            return cmd_run(run_target, run_write ? Mode::write : Mode::read, run_unbuffered,
                           run_duration, run_depth, run_block, run_offset, run_allow_write,
                           run_mock, run_condensed);
        if (app.got_subcommand(sweep)) {
            std::vector<Mode> modes{sweep_write ? Mode::write : Mode::read};
            if (sweep_both) modes = {Mode::read, Mode::write};
            return cmd_sweep(sweep_targets, sweep_disks, std::move(modes), sweep_unbuffered,
                             sweep_duration, sweep_out, sweep_allow_write, sweep_mock,
                             sweep_depths, sweep_blocks);
        }
        if (app.got_subcommand(gen))
            return cmd_gen(gen_path, gen_records, gen_size, gen_seed, gen_verify);
        if (app.got_subcommand(sim))
            return cmd_simulate(sim_preset, sim_disks, sim_depth, sim_block,
                                sim_write ? Mode::write : Mode::read, sim_volumes, sim_compare);
        if (app.got_subcommand(rep))
            return cmd_report(rep_csv, rep_mode, rep_svg, rep_title, rep_fraction);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 2;
}
