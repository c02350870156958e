#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rbpf {

inline constexpr std::size_t kBenchInputLength = 361;
inline constexpr std::uint64_t kBenchSeed = 0x5eedf1e7;
inline constexpr std::uint64_t kBenchInputBase = 0x40000000;

// Host-side Fletcher-32: 16-bit little-endian words, odd tail zero-padded,
// both sums starting at zero and reduced modulo 65535.
std::uint32_t fletcher32_reference(std::span<const std::uint8_t> data);

// Deterministic pseudo-random benchmark input.
std::vector<std::uint8_t> bench_input(std::size_t length = kBenchInputLength,
                                      std::uint64_t seed = kBenchSeed);

// The word-array layout the checksum script expects: u64 word count, then
// the words, odd tail zero-padded.
std::vector<std::uint8_t> pack_word_region(std::span<const std::uint8_t> data);

struct BenchReport {
    std::uint64_t checksum = 0;   // computed by the script
    std::uint64_t reference = 0;  // computed by the host
    bool match = false;
    std::uint64_t iterations = 0;
    std::uint64_t instructions = 0;
    std::chrono::nanoseconds elapsed{0};
    double insns_per_second = 0.0;
    std::size_t input_bytes = 0;
    std::size_t bytecode_bytes = 0;

    std::string to_text() const;
};

// Assemble the bundled checksum script, run it over the seeded input until
// at least `min_instructions` have executed, and time it. The error string
// covers assembly/verification problems and checksum mismatches alike.
std::variant<BenchReport, std::string> run_fletcher_bench(
    std::uint64_t min_instructions = 10000000, std::size_t input_length = kBenchInputLength,
    std::uint64_t seed = kBenchSeed);

}  // namespace rbpf
