#include <catch2/catch_amalgamated.hpp>

#include "seqbench/units.hpp"

using namespace seqbench;

TEST_CASE("size suffixes are binary") {
    CHECK(parse_size("64K") == 65536ull);
    CHECK(parse_size("128K") == 131072ull);
    CHECK(parse_size("1M") == 1048576ull);
    CHECK(parse_size("30M") == 31457280ull);
    CHECK(parse_size("2G") == 2147483648ull);
    CHECK(parse_size("4096") == 4096ull);
    CHECK(parse_size("1k") == 1024ull);
}

TEST_CASE("bad sizes are rejected") {
    CHECK_THROWS_AS(parse_size(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_size("12Q"), std::invalid_argument);
    CHECK_THROWS_AS(parse_size("K"), std::invalid_argument);
    CHECK_THROWS_AS(parse_size("1MB"), std::invalid_argument);
    CHECK_THROWS_AS(parse_size("abc"), std::invalid_argument);
}

TEST_CASE("format_size inverts parse_size on round values") {
    for (const char* s : {"64K", "128K", "256K", "512K", "1M", "2M", "4M", "8M", "16M", "30M",
                          "1G", "100"}) {
        INFO(s);
        CHECK(format_size(parse_size(s)) == s);
    }
    CHECK(format_size(4096) == "4K");  // whole multiples get the canonical suffix
    CHECK(format_size(100) == "100");
    CHECK(format_size(1536) == "1536");  // 1.5K is not representable, stays in bytes
}

TEST_CASE("rates are decimal megabytes per second") {
    CHECK(compute_rate_mbps(3'000'000'000ull, 30.0) == Catch::Approx(100.0).epsilon(1e-12));
    CHECK(compute_rate_mbps(1048576, 1.0) == Catch::Approx(1.048576).epsilon(1e-12));
    CHECK(compute_rate_mbps(0, 5.0) == 0.0);
}

TEST_CASE("zero or negative elapsed time is an error") {
    CHECK_THROWS_AS(compute_rate_mbps(1, 0.0), ZeroElapsedError);
    CHECK_THROWS_AS(compute_rate_mbps(1, -1.0), ZeroElapsedError);
}

TEST_CASE("mode names round-trip") {
    CHECK(mode_from_string("read") == Mode::read);
    CHECK(mode_from_string("write") == Mode::write);
    CHECK(std::string(to_string(Mode::read)) == "read");
    CHECK(std::string(to_string(Mode::write)) == "write");
    CHECK_THROWS_AS(mode_from_string("append"), std::invalid_argument);
}

TEST_CASE("quantize_tenth keeps one decimal") {
    CHECK(quantize_tenth(59.978) == Catch::Approx(60.0));
    CHECK(quantize_tenth(46.652) == Catch::Approx(46.7));
    CHECK(quantize_tenth(0.04) == Catch::Approx(0.0));
    CHECK(quantize_tenth(quantize_tenth(123.456)) == quantize_tenth(123.456));
}
