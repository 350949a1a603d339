#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqbench {

// Deterministic benchmark-file generator. Each 100-byte record carries a
// pseudo-random 10-byte key followed by a 90-byte payload derived from the
// record index alone: the index as 20 decimal digits, then a rotating digit
// run. Keys change with the seed; payloads never do, which gives readers a
// cheap way to recognize a generated file before overwriting it.
constexpr std::size_t kRecordBytes = 100;
constexpr std::size_t kKeyBytes = 10;
constexpr std::size_t kPayloadBytes = kRecordBytes - kKeyBytes;

namespace detail {

inline std::uint64_t record_state(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z | 1;  // odd, so the multiplicative step below never collapses to zero
}

}  // namespace detail

inline void fill_record(std::uint64_t seed, std::uint64_t index, unsigned char* out) {
    std::uint64_t state = detail::record_state(seed, index);
    for (std::size_t j = 0; j < kKeyBytes; ++j) {
        out[j] = static_cast<unsigned char>(state >> 56);
        state *= 6364136223846793005ull;
    }
    std::uint64_t v = index;
    for (std::size_t j = 0; j < 20; ++j) {
        out[kKeyBytes + 19 - j] = static_cast<unsigned char>('0' + v % 10);
        v /= 10;
    }
    for (std::size_t j = 20; j < kPayloadBytes; ++j)
        out[kKeyBytes + j] = static_cast<unsigned char>('0' + (index + j) % 10);
}

inline void generate_records(std::ostream& out, std::uint64_t n_records, std::uint64_t seed) {
    constexpr std::size_t kBatch = 4096;
    std::vector<unsigned char> buf(kBatch * kRecordBytes);
    std::uint64_t i = 0;
    while (i < n_records) {
        const std::size_t take =
            static_cast<std::size_t>(std::min<std::uint64_t>(kBatch, n_records - i));
        for (std::size_t r = 0; r < take; ++r) fill_record(seed, i + r, buf.data() + r * kRecordBytes);
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(take * kRecordBytes));
        i += take;
    }
    if (!out) throw std::runtime_error("short write while generating records");
}

inline void generate_file(const std::string& path, std::uint64_t n_records, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    generate_records(out, n_records, seed);
}

struct VerifyResult {
    std::uint64_t records_checked = 0;
    std::uint64_t first_bad = 0;  // index of the first mismatching record
    bool ok = true;
};

inline VerifyResult verify_records(std::istream& in, std::uint64_t n_records, std::uint64_t seed) {
    VerifyResult res;
    std::array<unsigned char, kRecordBytes> expect{};
    std::array<char, kRecordBytes> got{};
    for (std::uint64_t i = 0; i < n_records; ++i) {
        in.read(got.data(), kRecordBytes);
        if (in.gcount() != static_cast<std::streamsize>(kRecordBytes)) {
            res.ok = false;
            res.first_bad = i;
            return res;
        }
        fill_record(seed, i, expect.data());
        if (std::memcmp(got.data(), expect.data(), kRecordBytes) != 0) {
            res.ok = false;
            res.first_bad = i;
            return res;
        }
        ++res.records_checked;
    }
    return res;
}

inline VerifyResult verify_file(const std::string& path, std::uint64_t n_records,
                                std::uint64_t seed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return verify_records(in, n_records, seed);
}

// Seed-independent check: does the payload of record 0 match the generator
// pattern? Used as a safety probe before write benchmarks clobber a file.
inline bool looks_generated(std::istream& in) {
    std::array<char, kRecordBytes> got{};
    in.read(got.data(), kRecordBytes);
    if (in.gcount() != static_cast<std::streamsize>(kRecordBytes)) return false;
    for (std::size_t j = 0; j < 20; ++j)
        if (got[kKeyBytes + j] != '0') return false;
    for (std::size_t j = 20; j < kPayloadBytes; ++j)
        if (got[kKeyBytes + j] != static_cast<char>('0' + j % 10)) return false;
    return true;
}

inline bool looks_generated(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    return looks_generated(in);
}

}  // namespace seqbench
