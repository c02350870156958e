#include "rbpf/vm.hpp"

#include <cstdio>

namespace rbpf {

const char* to_string(FaultKind kind) {
    switch (kind) {
        case FaultKind::MemoryAccessDenied: return "memory-access-denied";
        case FaultKind::DivisionByZero: return "division-by-zero";
        case FaultKind::JumpOutOfBounds: return "jump-out-of-bounds";
        case FaultKind::UnknownBinding: return "unknown-binding";
        case FaultKind::BadInstruction: return "bad-instruction";
        case FaultKind::StackUnavailable: return "stack-unavailable";
    }
    return "?";
}

const char* to_string(ExecStatus status) {
    switch (status) {
        case ExecStatus::Ok: return "ok";
        case ExecStatus::Fault: return "fault";
        case ExecStatus::FuelExhausted: return "fuel-exhausted";
    }
    return "?";
}

namespace {

std::uint16_t bswap16(std::uint16_t v) { return static_cast<std::uint16_t>((v >> 8) | (v << 8)); }

std::uint32_t bswap32(std::uint32_t v) {
    return (v >> 24) | ((v >> 8) & 0x0000ff00u) | ((v << 8) & 0x00ff0000u) | (v << 24);
}

std::uint64_t bswap64(std::uint64_t v) {
    return (static_cast<std::uint64_t>(bswap32(static_cast<std::uint32_t>(v))) << 32) |
           bswap32(static_cast<std::uint32_t>(v >> 32));
}

std::string hex_addr(std::uint64_t addr) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(addr));
    return buf;
}

std::string describe(const AccessViolation& v) {
    return std::string(to_string(v.kind)) + " of " + std::to_string(v.size) + " bytes at " +
           hex_addr(v.addr) + " denied: " + to_string(v.reason);
}

}  // namespace

ExecOutcome execute(const VerifiedProgram& program, HostContext& ctx, const BindingTable& bindings,
                    std::uint64_t context_arg, const ExecOptions& options, StepObserver* observer) {
    ExecOutcome out;
    std::array<std::uint64_t, kRegisterCount> regs{};
    std::size_t pc = 0;
    std::uint64_t executed = 0;

    auto finish = [&](ExecStatus status) -> ExecOutcome& {
        out.status = status;
        out.r0 = regs[0];
        out.executed = executed;
        out.registers = regs;
        return out;
    };
    auto fault = [&](FaultKind kind, std::string message,
                     std::optional<AccessViolation> violation = std::nullopt) -> ExecOutcome& {
        out.fault = Fault{kind, pc, std::move(message), violation};
        return finish(ExecStatus::Fault);
    };

    GuestMemory* mem = ctx.memory;
    if (mem == nullptr) {
        return fault(FaultKind::StackUnavailable, "no guest memory attached to the context");
    }
    const MemoryRegion* stack = mem->find_region("stack");
    if (stack == nullptr) {
        if (!mem->map_region({options.stack_base, kStackSize, AccessFlags::ReadWrite, "stack"})) {
            return fault(FaultKind::StackUnavailable,
                         "could not map the stack at " + hex_addr(options.stack_base));
        }
        stack = mem->find_region("stack");
    }
    regs[1] = context_arg;
    regs[10] = stack->base + stack->length;  // grows downward from one past the top

    const auto& insts = program.instructions();
    const std::size_t n = insts.size();

    while (true) {
        if (executed == options.fuel) return finish(ExecStatus::FuelExhausted);
        if (pc >= n) return fault(FaultKind::JumpOutOfBounds, "pc ran past the end of the program");
        const Instruction& inst = insts[pc];
        if (observer != nullptr) observer->on_step(pc, inst, regs);
        ++executed;

        const std::uint8_t cls = inst.opcode & op::kClassMask;
        const std::uint8_t aop = inst.opcode & op::kAluOpMask;
        const bool reg_form = (inst.opcode & op::kSrcReg) != 0;

        switch (cls) {
            case op::kClsAlu64: {
                const std::uint64_t a = regs[inst.dst];
                const std::uint64_t b =
                    reg_form ? regs[inst.src]
                             : static_cast<std::uint64_t>(static_cast<std::int64_t>(inst.imm));
                std::uint64_t r = 0;
                switch (aop) {
                    case 0x00: r = a + b; break;
                    case 0x10: r = a - b; break;
                    case 0x20: r = a * b; break;
                    case 0x30:
                        if (b == 0) return fault(FaultKind::DivisionByZero, "div by zero");
                        r = a / b;
                        break;
                    case 0x40: r = a | b; break;
                    case 0x50: r = a & b; break;
                    case 0x60: r = a << (b & 63); break;
                    case 0x70: r = a >> (b & 63); break;
                    case 0x80: r = 0 - a; break;
                    case 0x90:
                        if (b == 0) return fault(FaultKind::DivisionByZero, "mod by zero");
                        r = a % b;
                        break;
                    case 0xa0: r = a ^ b; break;
                    case 0xb0: r = b; break;
                    case 0xc0:
                        r = static_cast<std::uint64_t>(static_cast<std::int64_t>(a) >> (b & 63));
                        break;
                    default:
                        return fault(FaultKind::BadInstruction, format_instruction(inst));
                }
                regs[inst.dst] = r;
                ++pc;
                break;
            }
            case op::kClsAlu32: {
                if (aop == 0xd0) {  // le/be; the width travels in imm
                    std::uint64_t v = regs[inst.dst];
                    const bool to_be = inst.opcode == op::Be;
                    switch (inst.imm) {
                        case 16:
                            v = to_be ? bswap16(static_cast<std::uint16_t>(v))
                                      : static_cast<std::uint16_t>(v);
                            break;
                        case 32:
                            v = to_be ? bswap32(static_cast<std::uint32_t>(v))
                                      : static_cast<std::uint32_t>(v);
                            break;
                        default:
                            if (to_be) v = bswap64(v);
                            break;
                    }
                    regs[inst.dst] = v;
                    ++pc;
                    break;
                }
                const auto a = static_cast<std::uint32_t>(regs[inst.dst]);
                const auto b = reg_form ? static_cast<std::uint32_t>(regs[inst.src])
                                        : static_cast<std::uint32_t>(inst.imm);
                std::uint32_t r = 0;
                switch (aop) {
                    case 0x00: r = a + b; break;
                    case 0x10: r = a - b; break;
                    case 0x20: r = a * b; break;
                    case 0x30:
                        if (b == 0) return fault(FaultKind::DivisionByZero, "div by zero");
                        r = a / b;
                        break;
                    case 0x40: r = a | b; break;
                    case 0x50: r = a & b; break;
                    case 0x60: r = a << (b & 31); break;
                    case 0x70: r = a >> (b & 31); break;
                    case 0x80: r = 0 - a; break;
                    case 0x90:
                        if (b == 0) return fault(FaultKind::DivisionByZero, "mod by zero");
                        r = a % b;
                        break;
                    case 0xa0: r = a ^ b; break;
                    case 0xb0: r = b; break;
                    case 0xc0:
                        r = static_cast<std::uint32_t>(static_cast<std::int32_t>(a) >> (b & 31));
                        break;
                    default:
                        return fault(FaultKind::BadInstruction, format_instruction(inst));
                }
                regs[inst.dst] = r;  // zero-extends
                ++pc;
                break;
            }
            case op::kClsLd: {
                if (inst.opcode != op::Lddw || pc + 1 >= n) {
                    return fault(FaultKind::BadInstruction, format_instruction(inst));
                }
                const auto low = static_cast<std::uint32_t>(inst.imm);
                const auto high = static_cast<std::uint32_t>(insts[pc + 1].imm);
                regs[inst.dst] = low | (static_cast<std::uint64_t>(high) << 32);
                pc += 2;  // one instruction in two slots
                break;
            }
            case op::kClsLdx: {
                const std::uint64_t addr = regs[inst.src] + static_cast<std::int64_t>(inst.offset);
                const unsigned width = memory_access_width(inst.opcode);
                auto loaded = mem->load(addr, width);
                if (auto* violation = std::get_if<AccessViolation>(&loaded)) {
                    return fault(FaultKind::MemoryAccessDenied, describe(*violation), *violation);
                }
                regs[inst.dst] = std::get<std::uint64_t>(loaded);
                ++pc;
                break;
            }
            case op::kClsSt:
            case op::kClsStx: {
                const std::uint64_t addr = regs[inst.dst] + static_cast<std::int64_t>(inst.offset);
                const unsigned width = memory_access_width(inst.opcode);
                const std::uint64_t value =
                    cls == op::kClsStx
                        ? regs[inst.src]
                        : static_cast<std::uint64_t>(static_cast<std::int64_t>(inst.imm));
                if (auto violation = mem->store(addr, width, value)) {
                    return fault(FaultKind::MemoryAccessDenied, describe(*violation), *violation);
                }
                ++pc;
                break;
            }
            case op::kClsJmp: {
                if (inst.opcode == op::Exit) return finish(ExecStatus::Ok);
                if (inst.opcode == op::Call) {
                    const auto id = static_cast<std::uint32_t>(inst.imm);
                    const HostFn* fn = bindings.find(id);
                    if (fn == nullptr) {
                        return fault(FaultKind::UnknownBinding,
                                     "no host function bound to id " + std::to_string(id));
                    }
                    HostResult result = (*fn)(ctx, regs[1], regs[2], regs[3], regs[4], regs[5]);
                    if (auto* hf = std::get_if<HostFault>(&result)) {
                        const std::string* name = bindings.name_of(id);
                        return fault(FaultKind::MemoryAccessDenied,
                                     "host function " + (name ? *name : std::to_string(id)) +
                                         ": " + describe(hf->violation),
                                     hf->violation);
                    }
                    regs[0] = std::get<std::uint64_t>(result);
                    ++pc;
                    break;
                }
                const std::uint64_t a = regs[inst.dst];
                const std::uint64_t b =
                    reg_form ? regs[inst.src]
                             : static_cast<std::uint64_t>(static_cast<std::int64_t>(inst.imm));
                const auto sa = static_cast<std::int64_t>(a);
                const auto sb = static_cast<std::int64_t>(b);
                bool taken = false;
                switch (aop >> 4) {
                    case 0x0: taken = true; break;  // ja
                    case 0x1: taken = a == b; break;
                    case 0x2: taken = a > b; break;
                    case 0x3: taken = a >= b; break;
                    case 0x4: taken = (a & b) != 0; break;
                    case 0x5: taken = a != b; break;
                    case 0x6: taken = sa > sb; break;
                    case 0x7: taken = sa >= sb; break;
                    case 0xa: taken = a < b; break;
                    case 0xb: taken = a <= b; break;
                    case 0xc: taken = sa < sb; break;
                    case 0xd: taken = sa <= sb; break;
                    default:
                        return fault(FaultKind::BadInstruction, format_instruction(inst));
                }
                if (!taken) {
                    ++pc;
                    break;
                }
                const std::int64_t target = static_cast<std::int64_t>(pc) + 1 + inst.offset;
                if (target < 0 || target >= static_cast<std::int64_t>(n)) {
                    return fault(FaultKind::JumpOutOfBounds,
                                 "jump target " + std::to_string(target) + " out of bounds");
                }
                pc = static_cast<std::size_t>(target);
                break;
            }
            default:
                return fault(FaultKind::BadInstruction, format_instruction(inst));
        }
    }
}

}  // namespace rbpf
