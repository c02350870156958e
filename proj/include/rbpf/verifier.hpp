#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rbpf/isa.hpp"

namespace rbpf {

enum class ViolationKind {
    TruncatedProgram,     // empty, or length not a multiple of the slot size
    UnknownOpcode,
    BadRegister,          // register index above r10
    BadImmediate,         // e.g. endian width other than 16/32/64
    MalformedWideLoad,    // lddw without its second slot, or a bad second slot
    JumpOutOfBounds,
    JumpIntoWideLoad,     // target is the continuation slot of a lddw
    MissingExit,
    BadFinalInstruction,  // execution could fall off the end
    FramePointerWrite,    // r10 is read-only
    UnknownBinding,       // call to an id no host function is registered under
};

const char* to_string(ViolationKind kind);

struct Violation {
    std::size_t slot = 0;
    ViolationKind kind = ViolationKind::UnknownOpcode;
    std::string message;
};

struct VerifierReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    // One line per violation: "slot <n>: <kind>: <message>".
    std::string to_string() const;
};

// A program that passed every preflight check. The interpreter only accepts
// this type, and the only way to construct one is through verify() below, so
// unchecked bytecode cannot reach execution by construction.
class VerifiedProgram {
  public:
    // One entry per slot; the second slot of a lddw stays in place (opcode 0,
    // high half in imm) so jump offsets remain slot-relative.
    const std::vector<Instruction>& instructions() const { return insts_; }
    std::size_t slot_count() const { return insts_.size(); }
    std::span<const std::uint8_t> bytes() const { return bytes_; }

  private:
    VerifiedProgram(std::vector<Instruction> insts, std::vector<std::uint8_t> bytes)
        : insts_(std::move(insts)), bytes_(std::move(bytes)) {}

    friend std::variant<VerifiedProgram, VerifierReport> verify(
        std::span<const std::uint8_t> bytes, std::span<const std::uint32_t> binding_ids);

    std::vector<Instruction> insts_;
    std::vector<std::uint8_t> bytes_;
};

// Run every check and collect all violations rather than stopping at the
// first, so a rejected script yields one complete report.
std::variant<VerifiedProgram, VerifierReport> verify(std::span<const std::uint8_t> bytes,
                                                     std::span<const std::uint32_t> binding_ids);

}  // namespace rbpf
