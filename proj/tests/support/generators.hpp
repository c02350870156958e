// Seeded random-input helpers shared by the property tests. Everything is
// driven by an explicit mt19937-64 so failures reproduce.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rbpf/isa.hpp"

namespace testgen {

inline std::uint64_t u64(std::mt19937_64& rng) { return rng(); }

inline std::uint64_t range(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return lo + rng() % (hi - lo + 1);
}

inline std::uint8_t reg(std::mt19937_64& rng, std::uint8_t max = 9) {
    return static_cast<std::uint8_t>(rng() % (max + 1));
}

inline std::int32_t imm32(std::mt19937_64& rng) { return static_cast<std::int32_t>(rng()); }

// Interesting 64-bit values with a bias toward boundary cases.
inline std::uint64_t spicy_u64(std::mt19937_64& rng) {
    static constexpr std::uint64_t kEdges[] = {
        0,
        1,
        0x7f,
        0x80,
        0xff,
        0x7fff,
        0x8000,
        0xffff,
        0x7fffffff,
        0x80000000,
        0xffffffff,
        0x7fffffffffffffffull,
        0x8000000000000000ull,
        0xffffffffffffffffull,
    };
    if (rng() % 2 == 0) return kEdges[rng() % std::size(kEdges)];
    return rng();
}

inline std::vector<std::uint8_t> bytes(std::mt19937_64& rng, std::size_t count) {
    std::vector<std::uint8_t> out(count);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng());
    return out;
}

// Byte stream with long repeats, the kind compression should bite on.
inline std::vector<std::uint8_t> repetitive_bytes(std::mt19937_64& rng, std::size_t count) {
    std::vector<std::uint8_t> out;
    out.reserve(count);
    while (out.size() < count) {
        if (rng() % 3 == 0 && out.size() >= 4) {
            // replay an earlier window
            const std::size_t distance = 1 + rng() % std::min<std::size_t>(out.size(), 200);
            std::size_t length = 1 + rng() % 40;
            while (length-- > 0 && out.size() < count) {
                out.push_back(out[out.size() - distance]);
            }
        } else {
            std::size_t run = 1 + rng() % 12;
            const auto value = static_cast<std::uint8_t>(rng() % 8);
            while (run-- > 0 && out.size() < count) out.push_back(value);
        }
    }
    return out;
}

// Encode one instruction straight from the field layout, bypassing the
// library encoder.
inline void raw_slot(std::vector<std::uint8_t>& out, std::uint8_t opcode, std::uint8_t dst,
                     std::uint8_t src, std::int16_t offset, std::int32_t imm) {
    out.push_back(opcode);
    out.push_back(static_cast<std::uint8_t>((src << 4) | (dst & 0x0f)));
    const auto uoff = static_cast<std::uint16_t>(offset);
    out.push_back(static_cast<std::uint8_t>(uoff & 0xff));
    out.push_back(static_cast<std::uint8_t>(uoff >> 8));
    const auto uimm = static_cast<std::uint32_t>(imm);
    out.push_back(static_cast<std::uint8_t>(uimm & 0xff));
    out.push_back(static_cast<std::uint8_t>((uimm >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((uimm >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((uimm >> 24) & 0xff));
}

}  // namespace testgen
