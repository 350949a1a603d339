#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace seqbench {

// Rates are decimal megabytes per second (1 MB = 10^6 bytes); block and
// cluster sizes use binary suffixes (64K = 65536, 1M = 1048576).

enum class Mode { read, write };

inline const char* to_string(Mode m) { return m == Mode::read ? "read" : "write"; }

inline Mode mode_from_string(const std::string& s) {
    if (s == "read") return Mode::read;
    if (s == "write") return Mode::write;
    throw std::invalid_argument("unknown mode: " + s);
}

enum class Buffering { os_buffered, unbuffered };

class ZeroElapsedError : public std::invalid_argument {
public:
    ZeroElapsedError() : std::invalid_argument("elapsed time must be > 0") {}
};

inline double compute_rate_mbps(std::uint64_t bytes, double elapsed_s) {
    if (!(elapsed_s > 0.0)) throw ZeroElapsedError();
    return static_cast<double>(bytes) / 1e6 / elapsed_s;
}

// "64K" -> 65536, "1M" -> 1048576, "2G" -> 2^31, bare digits -> bytes.
inline std::uint64_t parse_size(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty size");
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad size: " + text);
    }
    std::uint64_t mult = 1;
    if (pos < text.size()) {
        if (pos + 1 != text.size()) throw std::invalid_argument("bad size suffix: " + text);
        switch (std::toupper(static_cast<unsigned char>(text[pos]))) {
            case 'K': mult = 1ull << 10; break;
            case 'M': mult = 1ull << 20; break;
            case 'G': mult = 1ull << 30; break;
            default: throw std::invalid_argument("bad size suffix: " + text);
        }
    }
    return static_cast<std::uint64_t>(value) * mult;
}

inline std::string format_size(std::uint64_t bytes) {
    if (bytes >= (1ull << 30) && bytes % (1ull << 30) == 0) return std::to_string(bytes >> 30) + "G";
    if (bytes >= (1ull << 20) && bytes % (1ull << 20) == 0) return std::to_string(bytes >> 20) + "M";
    if (bytes >= (1ull << 10) && bytes % (1ull << 10) == 0) return std::to_string(bytes >> 10) + "K";
    return std::to_string(bytes);
}

// Round to one decimal; CSV rate/cpu columns carry exactly this precision.
inline double quantize_tenth(double x) { return std::round(x * 10.0) / 10.0; }

}  // namespace seqbench
