#include "rbpf/verifier.hpp"

#include <algorithm>
#include <cstdio>

namespace rbpf {

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::TruncatedProgram: return "truncated-program";
        case ViolationKind::UnknownOpcode: return "unknown-opcode";
        case ViolationKind::BadRegister: return "bad-register";
        case ViolationKind::BadImmediate: return "bad-immediate";
        case ViolationKind::MalformedWideLoad: return "malformed-wide-load";
        case ViolationKind::JumpOutOfBounds: return "jump-out-of-bounds";
        case ViolationKind::JumpIntoWideLoad: return "jump-into-wide-load";
        case ViolationKind::MissingExit: return "missing-exit";
        case ViolationKind::BadFinalInstruction: return "bad-final-instruction";
        case ViolationKind::FramePointerWrite: return "frame-pointer-write";
        case ViolationKind::UnknownBinding: return "unknown-binding";
    }
    return "?";
}

std::string VerifierReport::to_string() const {
    std::string out;
    for (const auto& v : violations) {
        out += "slot " + std::to_string(v.slot) + ": " + rbpf::to_string(v.kind) + ": " +
               v.message + "\n";
    }
    return out;
}

namespace {

struct RawSlot {
    std::uint8_t opcode = 0;
    std::uint8_t dst = 0;
    std::uint8_t src = 0;
    std::int16_t offset = 0;
    std::int32_t imm = 0;
    bool usable = false;       // passed per-slot decoding checks
    bool continuation = false;  // second slot of a lddw
};

RawSlot raw_decode(std::span<const std::uint8_t> slot) {
    RawSlot out;
    out.opcode = slot[0];
    out.dst = slot[1] & 0x0f;
    out.src = slot[1] >> 4;
    out.offset = static_cast<std::int16_t>(static_cast<std::uint16_t>(slot[2]) |
                                           (static_cast<std::uint16_t>(slot[3]) << 8));
    out.imm = static_cast<std::int32_t>(
        static_cast<std::uint32_t>(slot[4]) | (static_cast<std::uint32_t>(slot[5]) << 8) |
        (static_cast<std::uint32_t>(slot[6]) << 16) | (static_cast<std::uint32_t>(slot[7]) << 24));
    return out;
}

std::string hexbyte(std::uint8_t b) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "0x%02x", b);
    return buf;
}

bool writes_register(std::uint8_t opcode) {
    switch (classify(opcode)) {
        case OpcodeClass::Alu64:
        case OpcodeClass::Alu32:
        case OpcodeClass::LoadReg:
        case OpcodeClass::WideLoad:
            return true;
        default:
            return false;
    }
}

}  // namespace

std::variant<VerifiedProgram, VerifierReport> verify(std::span<const std::uint8_t> bytes,
                                                     std::span<const std::uint32_t> binding_ids) {
    VerifierReport report;
    auto flag = [&report](std::size_t slot, ViolationKind kind, std::string message) {
        report.violations.push_back({slot, kind, std::move(message)});
    };

    if (bytes.empty()) {
        flag(0, ViolationKind::TruncatedProgram, "empty program");
        return report;
    }
    if (bytes.size() % kSlotSize != 0) {
        flag(bytes.size() / kSlotSize, ViolationKind::TruncatedProgram,
             "program length " + std::to_string(bytes.size()) + " is not a multiple of 8");
        return report;
    }

    const std::size_t n = bytes.size() / kSlotSize;
    std::vector<RawSlot> slots(n);
    for (std::size_t i = 0; i < n; ++i) {
        slots[i] = raw_decode(bytes.subspan(i * kSlotSize, kSlotSize));
    }

    // Wide-load pairing first: it decides which slots are continuations and
    // therefore exempt from per-slot opcode checks.
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i].continuation || slots[i].opcode != op::Lddw) continue;
        if (i + 1 == n) {
            flag(i, ViolationKind::MalformedWideLoad, "lddw is missing its second slot");
            continue;
        }
        RawSlot& high = slots[i + 1];
        high.continuation = true;
        if (high.opcode != op::LddwHigh || high.dst != 0 || high.src != 0 || high.offset != 0) {
            flag(i + 1, ViolationKind::MalformedWideLoad, "malformed lddw continuation slot");
        }
    }

    // Per-slot checks.
    for (std::size_t i = 0; i < n; ++i) {
        RawSlot& slot = slots[i];
        if (slot.continuation) {
            slot.usable = true;
            continue;
        }
        if (!opcode_supported(slot.opcode)) {
            flag(i, ViolationKind::UnknownOpcode, "unknown opcode " + hexbyte(slot.opcode));
            continue;
        }
        slot.usable = true;
        if (slot.dst > kMaxRegister || slot.src > kMaxRegister) {
            flag(i, ViolationKind::BadRegister, "register index out of range");
        }
        if ((slot.opcode == op::Le || slot.opcode == op::Be) && slot.imm != 16 &&
            slot.imm != 32 && slot.imm != 64) {
            flag(i, ViolationKind::BadImmediate, "endian width must be 16, 32 or 64");
        }
        if (slot.dst == kMaxRegister && writes_register(slot.opcode)) {
            flag(i, ViolationKind::FramePointerWrite, "r10 is read-only");
        }
        if (slot.opcode == op::Call) {
            const auto id = static_cast<std::uint32_t>(slot.imm);
            const bool known =
                std::find(binding_ids.begin(), binding_ids.end(), id) != binding_ids.end();
            if (!known) {
                flag(i, ViolationKind::UnknownBinding,
                     "no host function bound to id " + std::to_string(id));
            }
        }
    }

    // Jump targets, measured in slots relative to the following instruction.
    for (std::size_t i = 0; i < n; ++i) {
        const RawSlot& slot = slots[i];
        if (!slot.usable || slot.continuation || !is_jump(slot.opcode)) continue;
        const std::int64_t target = static_cast<std::int64_t>(i) + 1 + slot.offset;
        if (target < 0 || target >= static_cast<std::int64_t>(n)) {
            flag(i, ViolationKind::JumpOutOfBounds,
                 "jump target " + std::to_string(target) + " outside [0, " + std::to_string(n) +
                     ")");
        } else if (slots[static_cast<std::size_t>(target)].continuation) {
            flag(i, ViolationKind::JumpIntoWideLoad,
                 "jump target " + std::to_string(target) + " is the middle of a wide load");
        }
    }

    // Termination: at least one exit, and no falling off the end.
    bool has_exit = false;
    for (const RawSlot& slot : slots) {
        if (!slot.continuation && slot.opcode == op::Exit) has_exit = true;
    }
    if (!has_exit) flag(0, ViolationKind::MissingExit, "program never exits");
    const RawSlot& last = slots[n - 1];
    const bool last_ok =
        !last.continuation && (last.opcode == op::Exit || last.opcode == op::Ja);
    if (!last_ok) {
        flag(n - 1, ViolationKind::BadFinalInstruction,
             "final instruction must be exit or an unconditional jump");
    }

    if (!report.ok()) {
        std::stable_sort(report.violations.begin(), report.violations.end(),
                         [](const Violation& a, const Violation& b) { return a.slot < b.slot; });
        return report;
    }

    // All checks passed; decode_program cannot fail now.
    auto decoded = decode_program(bytes);
    return VerifiedProgram(std::get<std::vector<Instruction>>(std::move(decoded)),
                           std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
}

}  // namespace rbpf
