// Independent re-implementations used as differential-test references.
// Each is deliberately structured differently from the library code it
// checks: different decomposition, different arithmetic path.
#pragma once

#include <algorithm>
#include <array>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "rbpf/isa.hpp"
#include "rbpf/sandbox.hpp"

namespace oracle {

// Fletcher-32 in the classic deferred-modulo formulation: accumulate up to
// 359 words, then fold. Mathematically equal to folding every word.
inline std::uint32_t fletcher32(std::span<const std::uint8_t> data) {
    std::uint32_t c0 = 0;
    std::uint32_t c1 = 0;
    const std::size_t words = (data.size() + 1) / 2;
    std::size_t i = 0;
    while (i < words) {
        std::size_t block = std::min<std::size_t>(words - i, 359);
        while (block-- > 0) {
            std::uint32_t w = data[2 * i];
            if (2 * i + 1 < data.size()) w |= static_cast<std::uint32_t>(data[2 * i + 1]) << 8;
            c0 += w;
            c1 += c0;
            ++i;
        }
        c0 %= 65535;
        c1 %= 65535;
    }
    return (c1 << 16) | c0;
}

// Region policy from the definition: an access is allowed when some single
// region contains each byte of the range and grants the permission.
inline bool access_allowed(const rbpf::RegionTable& regions, std::uint64_t addr,
                           std::uint64_t size, rbpf::AccessKind kind) {
    if (size == 0) return false;
    for (const auto& region : regions) {
        bool covers = true;
        for (std::uint64_t i = 0; i < size; ++i) {
            const std::uint64_t byte = addr + i;
            if (!(byte >= region.base && byte - region.base < region.length)) {
                covers = false;
                break;
            }
        }
        if (!covers) continue;
        const bool permitted = kind == rbpf::AccessKind::Read
                                   ? rbpf::has_flag(region.flags, rbpf::AccessFlags::Read)
                                   : rbpf::has_flag(region.flags, rbpf::AccessFlags::Write);
        if (permitted) return true;
    }
    return false;
}

// --- name-dispatched evaluator for register-only programs ----------------
//
// Executes ALU instructions, endianness conversions, wide loads, forward
// jumps and exit over a register file, dispatching on mnemonic names rather
// than opcode bit patterns.

struct NaiveOutcome {
    std::array<std::uint64_t, 11> regs{};
    bool faulted = false;       // division or modulo by zero
    bool exited = false;
    std::uint64_t executed = 0;
};

inline std::uint64_t reverse_bytes(std::uint64_t value, unsigned width_bytes) {
    std::uint8_t raw[8];
    std::memcpy(raw, &value, 8);  // little-endian hosts only, like the rest of the tests
    std::reverse(raw, raw + width_bytes);
    std::uint64_t out = 0;
    std::memcpy(&out, raw, width_bytes);
    return out;
}

inline NaiveOutcome naive_execute(std::span<const rbpf::Instruction> insts,
                                  std::array<std::uint64_t, 11> regs, std::uint64_t fuel) {
    NaiveOutcome out;
    out.regs = regs;
    std::size_t pc = 0;
    while (out.executed < fuel && pc < insts.size()) {
        const rbpf::Instruction& inst = insts[pc];
        const rbpf::MnemonicInfo* info = rbpf::mnemonic_for_opcode(inst.opcode);
        if (info == nullptr) return out;  // not a program this oracle understands
        ++out.executed;
        std::string_view name = info->name;
        auto& r = out.regs;

        if (name == "exit") {
            out.exited = true;
            return out;
        }
        if (name == "lddw") {
            const auto low = static_cast<std::uint32_t>(inst.imm);
            const auto high = static_cast<std::uint32_t>(insts[pc + 1].imm);
            r[inst.dst] = (static_cast<std::uint64_t>(high) << 32) | low;
            pc += 2;
            continue;
        }
        if (name.starts_with("le") || name.starts_with("be")) {
            const unsigned width = static_cast<unsigned>(inst.imm) / 8;
            std::uint64_t v = r[inst.dst];
            if (width < 8) v &= (std::uint64_t{1} << (8 * width)) - 1;
            r[inst.dst] = inst.opcode == rbpf::op::Be ? reverse_bytes(v, width) : v;
            ++pc;
            continue;
        }

        const bool from_reg = (inst.opcode & 0x08) != 0;
        const bool wide = (inst.opcode & 0x07) == 0x07 || (inst.opcode & 0x07) == 0x05;
        const std::uint64_t rhs_raw =
            from_reg ? r[inst.src]
                     : (wide ? static_cast<std::uint64_t>(static_cast<std::int64_t>(inst.imm))
                             : static_cast<std::uint64_t>(static_cast<std::uint32_t>(inst.imm)));

        if (name.starts_with("j")) {  // conditional and unconditional jumps
            const std::uint64_t a = r[inst.dst];
            const std::uint64_t b = rhs_raw;
            const auto sa = static_cast<std::int64_t>(a);
            const auto sb = static_cast<std::int64_t>(b);
            bool take = false;
            if (name == "ja") take = true;
            else if (name == "jeq") take = a == b;
            else if (name == "jne") take = a != b;
            else if (name == "jgt") take = a > b;
            else if (name == "jge") take = a >= b;
            else if (name == "jlt") take = a < b;
            else if (name == "jle") take = a <= b;
            else if (name == "jset") take = (a & b) != 0;
            else if (name == "jsgt") take = sa > sb;
            else if (name == "jsge") take = sa >= sb;
            else if (name == "jslt") take = sa < sb;
            else if (name == "jsle") take = sa <= sb;
            else return out;  // call etc.: not supported here
            pc = take ? pc + 1 + inst.offset : pc + 1;
            continue;
        }

        const bool narrow = name.ends_with("32");
        if (narrow) name.remove_suffix(2);
        std::uint64_t a = out.regs[inst.dst];
        std::uint64_t b = rhs_raw;
        if (narrow) {
            a &= 0xffffffffu;
            b &= 0xffffffffu;
        }
        const unsigned shift_mask = narrow ? 31 : 63;
        std::uint64_t result = 0;
        if (name == "add") result = a + b;
        else if (name == "sub") result = a - b;
        else if (name == "mul") result = a * b;
        else if (name == "or") result = a | b;
        else if (name == "and") result = a & b;
        else if (name == "xor") result = a ^ b;
        else if (name == "mov") result = b;
        else if (name == "neg") result = ~a + 1;
        else if (name == "lsh") result = a << (b & shift_mask);
        else if (name == "rsh") result = a >> (b & shift_mask);
        else if (name == "div" || name == "mod") {
            if (b == 0) {
                out.faulted = true;
                return out;
            }
            result = name == "div" ? a / b : a % b;
        } else if (name == "arsh") {
            const unsigned shift = static_cast<unsigned>(b & shift_mask);
            const std::uint64_t sign_bit = narrow ? (a >> 31) & 1 : (a >> 63) & 1;
            result = a >> shift;
            if (sign_bit && shift > 0) {
                // replicate the sign bit into the vacated positions
                const unsigned width = narrow ? 32 : 64;
                result |= ((std::uint64_t{1} << shift) - 1) << (width - shift);
            }
        } else {
            return out;
        }
        if (narrow) result &= 0xffffffffu;
        out.regs[inst.dst] = result;
        ++pc;
    }
    return out;
}

}  // namespace oracle
