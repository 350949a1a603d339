#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "seqbench/svg.hpp"
#include "seqbench/sweep.hpp"

using namespace seqbench;

namespace {

SweepConfig one_sim_disk() {
    SweepConfig cfg;
    cfg.name = "sim:tyan/disk0";
    cfg.locators = {"sim:tyan/disk0"};
    return cfg;
}

ResultRow random_row(std::mt19937& rng) {
    std::uniform_int_distribution<int> small(1, 99);
    std::uniform_real_distribution<double> rate(0, 4000);
    ResultRow r;
    r.config = "cfg-" + std::to_string(small(rng));
    r.n_disks = small(rng);
    r.mode = small(rng) % 2 ? Mode::read : Mode::write;
    r.block_bytes = 65536ull * static_cast<std::uint64_t>(small(rng));
    r.depth = small(rng);
    r.duration_s = small(rng) % 3 ? 30.0 : 0.5;
    r.bytes = static_cast<std::uint64_t>(rng()) << 8;
    r.io_count = rng() % 1000000;
    r.rate_mbps = quantize_tenth(rate(rng));
    r.cpu_total_pct = quantize_tenth(rate(rng) / 40);
    r.cpu_one_proc_pct = quantize_tenth(rate(rng) / 40);
    r.backend = small(rng) % 2 ? "sim" : "real";
    r.error = small(rng) % 5 ? "" : "boom";
    return r;
}

}  // namespace

TEST_CASE("the default matrix has 140 cells") {
    const SweepMatrix m = build_default_matrix();
    CHECK(m.depths.size() == 7);
    CHECK(m.blocks.size() == 10);
    CHECK(m.depths.front() == 1);
    CHECK(m.depths.back() == 64);
    CHECK(m.blocks.front() == 65536);
    CHECK(m.blocks.back() == 31457280);
    CHECK(m.duration_s == 30.0);
    REQUIRE(m.modes.size() == 2);
    CHECK(m.modes[0] == Mode::read);
    CHECK(m.modes[1] == Mode::write);
    CHECK(m.depths.size() * m.blocks.size() * m.modes.size() == 140);
}

TEST_CASE("a matrix with unsorted or empty axes is rejected") {
    SweepMatrix m = build_default_matrix();
    m.depths = {4, 2, 1};
    CHECK_THROWS_AS(run_sweep(one_sim_disk(), m), std::invalid_argument);
    m = build_default_matrix();
    m.blocks = {65536, 65536};
    CHECK_THROWS_AS(run_sweep(one_sim_disk(), m), std::invalid_argument);
    m = build_default_matrix();
    m.modes.clear();
    CHECK_THROWS_AS(run_sweep(one_sim_disk(), m), std::invalid_argument);
}

TEST_CASE("condensed CSV round-trips byte for byte") {
    std::mt19937 rng(4242);
    std::vector<ResultRow> rows;
    for (int i = 0; i < 200; ++i) rows.push_back(random_row(rng));
    const std::string once = emit_condensed(rows);
    const std::string twice = emit_condensed(parse_condensed(once));
    CHECK(once == twice);
    const std::vector<ResultRow> back = parse_condensed(once);
    REQUIRE(back.size() == rows.size());
    CHECK(back[0].config == rows[0].config);
    CHECK(back[0].rate_mbps == rows[0].rate_mbps);
    CHECK(back[0].bytes == rows[0].bytes);
}

TEST_CASE("strings with commas or newlines cannot break the format") {
    ResultRow r;
    r.config = "a,b\nc";
    r.backend = "si,m";
    r.error = "disk\non fire, badly";
    const std::string text = emit_condensed({r});
    const std::vector<ResultRow> back = parse_condensed(text);
    REQUIRE(back.size() == 1);
    CHECK(back[0].config == "a;b;c");
    CHECK(back[0].error == "disk;on fire; badly");
    CHECK(emit_condensed(back) == text);
}

TEST_CASE("malformed CSV is rejected with a line number") {
    CHECK_THROWS_AS(parse_condensed(""), CsvFormatError);
    CHECK_THROWS_AS(parse_condensed("not,the,header\n"), CsvFormatError);
    const std::string ok = emit_condensed({ResultRow{}});
    CHECK_THROWS_AS(parse_condensed(ok + "short,row\n"), CsvFormatError);
    CHECK_THROWS_AS(parse_condensed(ok + "c,x,read,1,1,1,1,1,1,1,1,sim,\n"), CsvFormatError);
    try {
        parse_condensed(ok + "short,row\n");
        FAIL("expected a throw");
    } catch (const CsvFormatError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("a simulated sweep is deterministic down to the byte") {
    const SweepMatrix matrix = build_default_matrix();
    const std::string a = emit_condensed(run_sweep(one_sim_disk(), matrix));
    const std::string b = emit_condensed(run_sweep(one_sim_disk(), matrix));
    CHECK(a == b);
    const std::vector<ResultRow> rows = parse_condensed(a);
    REQUIRE(rows.size() == 140);
    // mode is the outermost axis: all read rows first, then all writes
    CHECK(rows.front().mode == Mode::read);
    CHECK(rows[69].mode == Mode::read);
    CHECK(rows[70].mode == Mode::write);
    CHECK(rows.back().mode == Mode::write);
}

TEST_CASE("simulated surfaces are monotone along both axes") {
    const std::vector<ResultRow> rows = run_sweep(one_sim_disk(), build_default_matrix());
    for (const ResultRow& r : rows) REQUIRE(r.error.empty());
    auto rate_at = [&](Mode mode, double depth, std::uint64_t block) {
        for (const ResultRow& r : rows)
            if (r.mode == mode && r.depth == depth && r.block_bytes == block) return r.rate_mbps;
        FAIL("missing cell");
        return 0.0;
    };
    const SweepMatrix m = build_default_matrix();
    for (Mode mode : m.modes) {
        for (std::size_t d = 0; d + 1 < m.depths.size(); ++d)
            for (std::size_t b = 0; b < m.blocks.size(); ++b)
                CHECK(rate_at(mode, m.depths[d], m.blocks[b]) <=
                      rate_at(mode, m.depths[d + 1], m.blocks[b]) + 1e-9);
        for (std::size_t d = 0; d < m.depths.size(); ++d)
            for (std::size_t b = 0; b + 1 < m.blocks.size(); ++b)
                CHECK(rate_at(mode, m.depths[d], m.blocks[b]) <=
                      rate_at(mode, m.depths[d], m.blocks[b + 1]) + 1e-9);
    }
}

TEST_CASE("plateau search scans depth first, then block") {
    const std::vector<ResultRow> rows = run_sweep(one_sim_disk(), build_default_matrix());
    const auto p = find_plateau(rows, Mode::read, 0.95);
    REQUIRE(p.has_value());
    // a single request of 8 MiB already reaches 95% of the disk rate
    CHECK(p->depth == 1.0);
    CHECK(p->block_bytes == 8388608);
    CHECK(p->rate_mbps >= 0.95 * 60.0 - 0.1);
    CHECK(find_plateau(rows, Mode::write, 0.95).has_value());
}

TEST_CASE("uniform surfaces plateau at the very first cell") {
    std::vector<ResultRow> rows;
    for (double d : {1.0, 2.0, 4.0})
        for (std::uint64_t b : {65536ull, 131072ull}) {
            ResultRow r;
            r.depth = d;
            r.block_bytes = b;
            r.rate_mbps = 50.0;
            rows.push_back(r);
        }
    const auto p = find_plateau(rows, Mode::read, 0.95);
    REQUIRE(p.has_value());
    CHECK(p->depth == 1.0);
    CHECK(p->block_bytes == 65536);
}

TEST_CASE("an impossible threshold finds no plateau") {
    const std::vector<ResultRow> rows = run_sweep(one_sim_disk(), build_default_matrix());
    CHECK(!find_plateau(rows, Mode::read, 1.01).has_value());
    CHECK(!find_plateau({}, Mode::read, 0.95).has_value());
}

TEST_CASE("errored cells are excluded from surfaces and plateaus") {
    std::vector<ResultRow> rows;
    ResultRow good;
    good.depth = 1;
    good.block_bytes = 65536;
    good.rate_mbps = 10.0;
    ResultRow bad;
    bad.depth = 2;
    bad.block_bytes = 65536;
    bad.rate_mbps = 9999.0;
    bad.error = "exploded";
    rows.push_back(good);
    rows.push_back(bad);
    const auto p = find_plateau(rows, Mode::read, 0.95);
    REQUIRE(p.has_value());
    CHECK(p->rate_mbps == 10.0);
    CHECK(emit_surface(rows, Mode::read).find("9999") == std::string::npos);
}

TEST_CASE("surface table shows blocks down and depths across") {
    const std::vector<ResultRow> rows = run_sweep(one_sim_disk(), build_default_matrix());
    const std::string table = emit_surface(rows, Mode::read);
    CHECK(table.find("block\\depth") == 0);
    CHECK(table.find("64K") != std::string::npos);
    CHECK(table.find("30M") != std::string::npos);
    CHECK(table.find("60.0") != std::string::npos);
}

TEST_CASE("a surface with holes or doubled cells is refused") {
    std::vector<ResultRow> rows = run_sweep(one_sim_disk(), build_default_matrix());
    CHECK_NOTHROW(emit_surface(rows, Mode::write));
    CHECK_THROWS_AS(emit_surface({}, Mode::read), IncompleteGridError);
    std::vector<ResultRow> holed = rows;
    holed.erase(holed.begin() + 12);  // drop one read cell, axes still intact
    CHECK_THROWS_AS(emit_surface(holed, Mode::read), IncompleteGridError);
    std::vector<ResultRow> doubled = rows;
    doubled.push_back(rows[5]);
    CHECK_THROWS_AS(emit_surface(doubled, Mode::read), IncompleteGridError);
}

TEST_CASE("a cell too large for the target reports an error row") {
    SweepConfig cfg = one_sim_disk();
    CHECK(!run_cell(cfg, Mode::read, 1, 300'000'000'000ull, 1).error.empty());  // beyond the disk
    CHECK(run_cell(cfg, Mode::read, 1, parse_size("1G"), 1).error.empty());     // fits easily
}

TEST_CASE("long and short simulated runs agree") {
    CHECK(std::abs(long_run_delta(one_sim_disk(), Mode::read, 4, 1048576, 5, 300)) < 1e-9);
}

TEST_CASE("heatmap svg is self-contained and labeled") {
    const std::vector<ResultRow> rows = run_sweep(one_sim_disk(), build_default_matrix());
    const std::string svg = render_heatmap_svg(rows, "one disk");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("one disk (read)") != std::string::npos);
    CHECK(svg.find("one disk (write)") != std::string::npos);
    CHECK(svg.find("queue depth") != std::string::npos);
    CHECK(svg.find("30M") != std::string::npos);
    CHECK(svg.find("60.0 MB/s") != std::string::npos);
    // every measurement drawn as a cell, both grids
    std::size_t cells = 0, at = 0;
    while ((at = svg.find("<rect", at)) != std::string::npos) {
        ++cells;
        at += 5;
    }
    CHECK(cells >= 140);
}

TEST_CASE("run_cell fills the fixed columns") {
    const ResultRow row = run_cell(one_sim_disk(), Mode::read, 4, 1048576, 30);
    CHECK(row.config == "sim:tyan/disk0");
    CHECK(row.n_disks == 1);
    CHECK(row.mode == Mode::read);
    CHECK(row.block_bytes == 1048576);
    CHECK(row.depth == 4);
    CHECK(row.duration_s == 30.0);
    CHECK(row.backend == "sim");
    CHECK(row.rate_mbps == 60.0);
    CHECK(row.bytes == 1716 * 1048576ull);
    CHECK(row.error.empty());
}
