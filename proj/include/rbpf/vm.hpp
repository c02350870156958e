#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "rbpf/bindings.hpp"
#include "rbpf/memory.hpp"
#include "rbpf/verifier.hpp"

namespace rbpf {

inline constexpr std::uint64_t kDefaultFuel = 100000;
inline constexpr std::uint64_t kStackSize = 512;
inline constexpr std::uint64_t kDefaultStackBase = 0x10000000;
inline constexpr std::size_t kRegisterCount = 11;  // r0..r10

enum class FaultKind {
    MemoryAccessDenied,
    DivisionByZero,
    JumpOutOfBounds,   // defense in depth; the verifier rejects these statically
    UnknownBinding,    // likewise
    BadInstruction,
    StackUnavailable,  // the fixed stack window could not be mapped
};

const char* to_string(FaultKind kind);

struct Fault {
    FaultKind kind = FaultKind::BadInstruction;
    std::size_t pc = 0;
    std::string message;
    std::optional<AccessViolation> violation;
};

enum class ExecStatus { Ok, Fault, FuelExhausted };

const char* to_string(ExecStatus status);

struct ExecOutcome {
    ExecStatus status = ExecStatus::Ok;
    std::uint64_t r0 = 0;
    std::uint64_t executed = 0;  // instructions retired (a wide load counts once)
    std::array<std::uint64_t, kRegisterCount> registers{};
    std::optional<Fault> fault;
};

struct ExecOptions {
    std::uint64_t fuel = kDefaultFuel;
    std::uint64_t stack_base = kDefaultStackBase;
};

// Debug hook: called before each instruction with the current register file.
struct StepObserver {
    virtual ~StepObserver() = default;
    virtual void on_step(std::size_t pc, const Instruction& inst,
                         std::span<const std::uint64_t, kRegisterCount> regs) = 0;
};

// Run a verified program to completion, fault or fuel exhaustion.
//
// Register conventions: everything starts at zero except r1 = context_arg and
// r10 = one past the top of the fixed 512-byte stack. r10 is read-only; host
// calls take arguments in r1..r5, return in r0, and leave r1..r5 untouched.
// `ctx.memory` must be set; a "stack" region is mapped there on first use.
ExecOutcome execute(const VerifiedProgram& program, HostContext& ctx, const BindingTable& bindings,
                    std::uint64_t context_arg = 0, const ExecOptions& options = {},
                    StepObserver* observer = nullptr);

}  // namespace rbpf
