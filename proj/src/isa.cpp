#include "rbpf/isa.hpp"

#include <cstdio>

namespace rbpf {

namespace {

constexpr MnemonicInfo kMnemonics[] = {
    // 64-bit ALU
    {"add", OperandShape::AluBinary, 0x07, 0x0f},
    {"sub", OperandShape::AluBinary, 0x17, 0x1f},
    {"mul", OperandShape::AluBinary, 0x27, 0x2f},
    {"div", OperandShape::AluBinary, 0x37, 0x3f},
    {"or", OperandShape::AluBinary, 0x47, 0x4f},
    {"and", OperandShape::AluBinary, 0x57, 0x5f},
    {"lsh", OperandShape::AluBinary, 0x67, 0x6f},
    {"rsh", OperandShape::AluBinary, 0x77, 0x7f},
    {"neg", OperandShape::AluUnary, 0x87, 0xff},
    {"mod", OperandShape::AluBinary, 0x97, 0x9f},
    {"xor", OperandShape::AluBinary, 0xa7, 0xaf},
    {"mov", OperandShape::AluBinary, 0xb7, 0xbf},
    {"arsh", OperandShape::AluBinary, 0xc7, 0xcf},
    // 32-bit ALU (operates on the low word, zero-extends the destination)
    {"add32", OperandShape::AluBinary, 0x04, 0x0c},
    {"sub32", OperandShape::AluBinary, 0x14, 0x1c},
    {"mul32", OperandShape::AluBinary, 0x24, 0x2c},
    {"div32", OperandShape::AluBinary, 0x34, 0x3c},
    {"or32", OperandShape::AluBinary, 0x44, 0x4c},
    {"and32", OperandShape::AluBinary, 0x54, 0x5c},
    {"lsh32", OperandShape::AluBinary, 0x64, 0x6c},
    {"rsh32", OperandShape::AluBinary, 0x74, 0x7c},
    {"neg32", OperandShape::AluUnary, 0x84, 0xff},
    {"mod32", OperandShape::AluBinary, 0x94, 0x9c},
    {"xor32", OperandShape::AluBinary, 0xa4, 0xac},
    {"mov32", OperandShape::AluBinary, 0xb4, 0xbc},
    {"arsh32", OperandShape::AluBinary, 0xc4, 0xcc},
    // Endianness conversion; width travels in the immediate
    {"le16", OperandShape::Endian, op::Le, 0xff},
    {"le32", OperandShape::Endian, op::Le, 0xff},
    {"le64", OperandShape::Endian, op::Le, 0xff},
    {"be16", OperandShape::Endian, op::Be, 0xff},
    {"be32", OperandShape::Endian, op::Be, 0xff},
    {"be64", OperandShape::Endian, op::Be, 0xff},
    // Memory
    {"lddw", OperandShape::WideLoad, op::Lddw, 0xff},
    {"ldxw", OperandShape::LoadReg, 0xff, 0x61},
    {"ldxh", OperandShape::LoadReg, 0xff, 0x69},
    {"ldxb", OperandShape::LoadReg, 0xff, 0x71},
    {"ldxdw", OperandShape::LoadReg, 0xff, 0x79},
    {"stw", OperandShape::StoreImm, 0x62, 0xff},
    {"sth", OperandShape::StoreImm, 0x6a, 0xff},
    {"stb", OperandShape::StoreImm, 0x72, 0xff},
    {"stdw", OperandShape::StoreImm, 0x7a, 0xff},
    {"stxw", OperandShape::StoreReg, 0xff, 0x63},
    {"stxh", OperandShape::StoreReg, 0xff, 0x6b},
    {"stxb", OperandShape::StoreReg, 0xff, 0x73},
    {"stxdw", OperandShape::StoreReg, 0xff, 0x7b},
    // Jumps (offsets are slot-relative to the next instruction)
    {"ja", OperandShape::JumpUncond, op::Ja, 0xff},
    {"jeq", OperandShape::JumpCond, 0x15, 0x1d},
    {"jgt", OperandShape::JumpCond, 0x25, 0x2d},
    {"jge", OperandShape::JumpCond, 0x35, 0x3d},
    {"jset", OperandShape::JumpCond, 0x45, 0x4d},
    {"jne", OperandShape::JumpCond, 0x55, 0x5d},
    {"jsgt", OperandShape::JumpCond, 0x65, 0x6d},
    {"jsge", OperandShape::JumpCond, 0x75, 0x7d},
    {"jlt", OperandShape::JumpCond, 0xa5, 0xad},
    {"jle", OperandShape::JumpCond, 0xb5, 0xbd},
    {"jslt", OperandShape::JumpCond, 0xc5, 0xcd},
    {"jsle", OperandShape::JumpCond, 0xd5, 0xdd},
    {"call", OperandShape::Call, op::Call, 0xff},
    {"exit", OperandShape::Exit, op::Exit, 0xff},
};

std::string hexbyte(std::uint8_t b) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "0x%02x", b);
    return buf;
}

bool valid_endian_width(std::int32_t imm) { return imm == 16 || imm == 32 || imm == 64; }

// Offset part of a memory operand: "+4", "-8" or "" for zero.
std::string offset_suffix(std::int16_t off) {
    if (off == 0) return "";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%+d", off);
    return buf;
}

std::string jump_target(std::int16_t off) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%+d", off);
    return buf;
}

}  // namespace

std::span<const MnemonicInfo> mnemonic_table() { return kMnemonics; }

const MnemonicInfo* mnemonic_for_opcode(std::uint8_t opcode) {
    if (!opcode_supported(opcode)) return nullptr;  // keeps 0xff placeholders from matching
    for (const auto& m : kMnemonics) {
        if (m.opcode_imm == opcode || m.opcode_reg == opcode) return &m;
    }
    return nullptr;
}

OpcodeClass classify(std::uint8_t opcode) {
    const std::uint8_t cls = opcode & op::kClassMask;
    const std::uint8_t aop = opcode & op::kAluOpMask;
    const bool src_is_reg = (opcode & op::kSrcReg) != 0;
    switch (cls) {
        case op::kClsLd:
            return opcode == op::Lddw ? OpcodeClass::WideLoad : OpcodeClass::Unknown;
        case op::kClsLdx:
            // Only the plain register-indirect mode (bits 5-7 == 011).
            return (opcode & 0xe0) == 0x60 ? OpcodeClass::LoadReg : OpcodeClass::Unknown;
        case op::kClsSt:
            return (opcode & 0xe0) == 0x60 ? OpcodeClass::StoreImm : OpcodeClass::Unknown;
        case op::kClsStx:
            return (opcode & 0xe0) == 0x60 ? OpcodeClass::StoreReg : OpcodeClass::Unknown;
        case op::kClsAlu32:
            if (aop == 0x80) return src_is_reg ? OpcodeClass::Unknown : OpcodeClass::Alu32;  // neg32
            if (aop == 0xd0) return OpcodeClass::Alu32;  // le/be
            if (aop <= 0xc0) return OpcodeClass::Alu32;
            return OpcodeClass::Unknown;
        case op::kClsAlu64:
            if (aop == 0x80) return src_is_reg ? OpcodeClass::Unknown : OpcodeClass::Alu64;  // neg
            if (aop <= 0xc0) return OpcodeClass::Alu64;
            return OpcodeClass::Unknown;
        case op::kClsJmp:
            switch (aop >> 4) {
                case 0x0: return src_is_reg ? OpcodeClass::Unknown : OpcodeClass::Jump;  // ja
                case 0x8: return opcode == op::Call ? OpcodeClass::Call : OpcodeClass::Unknown;
                case 0x9: return opcode == op::Exit ? OpcodeClass::Exit : OpcodeClass::Unknown;
                case 0xe:
                case 0xf: return OpcodeClass::Unknown;
                default: return OpcodeClass::Jump;
            }
        default:
            return OpcodeClass::Unknown;
    }
}

bool opcode_supported(std::uint8_t opcode) { return classify(opcode) != OpcodeClass::Unknown; }

unsigned memory_access_width(std::uint8_t opcode) {
    switch (opcode & op::kSizeMask) {
        case op::kSizeB: return 1;
        case op::kSizeH: return 2;
        case op::kSizeW: return 4;
        default: return 8;
    }
}

bool is_jump(std::uint8_t opcode) {
    if ((opcode & op::kClassMask) != op::kClsJmp) return false;
    const std::uint8_t nib = opcode >> 4;
    return classify(opcode) == OpcodeClass::Jump && nib != 0x8 && nib != 0x9;
}

bool is_conditional_jump(std::uint8_t opcode) { return is_jump(opcode) && opcode != op::Ja; }

std::variant<Instruction, DecodeError> decode(std::span<const std::uint8_t> slot) {
    if (slot.size() != kSlotSize) {
        return DecodeError{0, "expected an 8-byte slot, got " + std::to_string(slot.size())};
    }
    Instruction inst;
    inst.opcode = slot[0];
    inst.dst = slot[1] & 0x0f;
    inst.src = slot[1] >> 4;
    inst.offset = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(slot[2]) | (static_cast<std::uint16_t>(slot[3]) << 8));
    inst.imm = static_cast<std::int32_t>(
        static_cast<std::uint32_t>(slot[4]) | (static_cast<std::uint32_t>(slot[5]) << 8) |
        (static_cast<std::uint32_t>(slot[6]) << 16) | (static_cast<std::uint32_t>(slot[7]) << 24));

    if (!opcode_supported(inst.opcode)) {
        return DecodeError{0, "unknown opcode " + hexbyte(inst.opcode)};
    }
    if (inst.dst > kMaxRegister || inst.src > kMaxRegister) {
        return DecodeError{0, "register index out of range in " + hexbyte(inst.opcode)};
    }
    if ((inst.opcode == op::Le || inst.opcode == op::Be) && !valid_endian_width(inst.imm)) {
        return DecodeError{0, "endian width must be 16, 32 or 64"};
    }
    return inst;
}

std::variant<std::vector<Instruction>, DecodeError> decode_program(
    std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) return DecodeError{0, "empty program"};
    if (bytes.size() % kSlotSize != 0) {
        return DecodeError{bytes.size() / kSlotSize, "truncated slot (program length must be a multiple of 8)"};
    }
    const std::size_t slot_count = bytes.size() / kSlotSize;
    std::vector<Instruction> insts;
    insts.reserve(slot_count);
    bool expect_high = false;
    for (std::size_t i = 0; i < slot_count; ++i) {
        const auto slot = bytes.subspan(i * kSlotSize, kSlotSize);
        if (expect_high) {
            if (slot[0] != op::LddwHigh || (slot[1] != 0) || slot[2] != 0 || slot[3] != 0) {
                return DecodeError{i, "malformed lddw continuation slot"};
            }
            Instruction high;
            high.imm = static_cast<std::int32_t>(
                static_cast<std::uint32_t>(slot[4]) | (static_cast<std::uint32_t>(slot[5]) << 8) |
                (static_cast<std::uint32_t>(slot[6]) << 16) |
                (static_cast<std::uint32_t>(slot[7]) << 24));
            insts.push_back(high);
            expect_high = false;
            continue;
        }
        auto result = decode(slot);
        if (auto* err = std::get_if<DecodeError>(&result)) {
            return DecodeError{i, err->message};
        }
        const Instruction inst = std::get<Instruction>(result);
        if (inst.opcode == op::Lddw) {
            if (i + 1 == slot_count) {
                return DecodeError{i, "lddw at end of program is missing its second slot"};
            }
            expect_high = true;
        }
        insts.push_back(inst);
    }
    return insts;
}

std::variant<std::array<std::uint8_t, kSlotSize>, EncodeError> encode(const Instruction& inst) {
    const bool continuation =
        inst.opcode == op::LddwHigh && inst.dst == 0 && inst.src == 0 && inst.offset == 0;
    if (!continuation && !opcode_supported(inst.opcode)) {
        return EncodeError{"unsupported opcode " + hexbyte(inst.opcode)};
    }
    if (inst.dst > kMaxRegister) {
        return EncodeError{"destination register r" + std::to_string(inst.dst) + " out of range"};
    }
    if (inst.src > kMaxRegister) {
        return EncodeError{"source register r" + std::to_string(inst.src) + " out of range"};
    }
    if ((inst.opcode == op::Le || inst.opcode == op::Be) && !valid_endian_width(inst.imm)) {
        return EncodeError{"endian width must be 16, 32 or 64"};
    }
    std::array<std::uint8_t, kSlotSize> out{};
    out[0] = inst.opcode;
    out[1] = static_cast<std::uint8_t>((inst.src << 4) | inst.dst);
    out[2] = static_cast<std::uint8_t>(inst.offset & 0xff);
    out[3] = static_cast<std::uint8_t>((inst.offset >> 8) & 0xff);
    const auto imm = static_cast<std::uint32_t>(inst.imm);
    out[4] = static_cast<std::uint8_t>(imm & 0xff);
    out[5] = static_cast<std::uint8_t>((imm >> 8) & 0xff);
    out[6] = static_cast<std::uint8_t>((imm >> 16) & 0xff);
    out[7] = static_cast<std::uint8_t>((imm >> 24) & 0xff);
    return out;
}

std::string format_instruction(const Instruction& inst) {
    const MnemonicInfo* m = mnemonic_for_opcode(inst.opcode);
    if (m == nullptr) return "<unknown " + hexbyte(inst.opcode) + ">";
    const bool reg_form = m->opcode_reg == inst.opcode && m->opcode_reg != 0xff;
    const std::string dst = "r" + std::to_string(inst.dst);
    const std::string src = "r" + std::to_string(inst.src);
    char buf[64];
    switch (m->shape) {
        case OperandShape::AluBinary:
            if (reg_form) return std::string(m->name) + " " + dst + ", " + src;
            return std::string(m->name) + " " + dst + ", " + std::to_string(inst.imm);
        case OperandShape::AluUnary:
            return std::string(m->name) + " " + dst;
        case OperandShape::Endian: {
            const char* base = inst.opcode == op::Le ? "le" : "be";
            return std::string(base) + std::to_string(inst.imm) + " " + dst;
        }
        case OperandShape::LoadReg:
            return std::string(m->name) + " " + dst + ", [" + src + offset_suffix(inst.offset) + "]";
        case OperandShape::StoreImm:
            return std::string(m->name) + " [" + dst + offset_suffix(inst.offset) + "], " +
                   std::to_string(inst.imm);
        case OperandShape::StoreReg:
            return std::string(m->name) + " [" + dst + offset_suffix(inst.offset) + "], " + src;
        case OperandShape::JumpUncond:
            return "ja " + jump_target(inst.offset);
        case OperandShape::JumpCond:
            if (reg_form) {
                return std::string(m->name) + " " + dst + ", " + src + ", " + jump_target(inst.offset);
            }
            return std::string(m->name) + " " + dst + ", " + std::to_string(inst.imm) + ", " +
                   jump_target(inst.offset);
        case OperandShape::Call:
            return "call " + std::to_string(static_cast<std::uint32_t>(inst.imm));
        case OperandShape::Exit:
            return "exit";
        case OperandShape::WideLoad:
            // Low half only; disassemble() pairs the slots and prints the full value.
            std::snprintf(buf, sizeof(buf), "lddw %s, 0x%x", dst.c_str(),
                          static_cast<std::uint32_t>(inst.imm));
            return buf;
    }
    return "<unreachable>";
}

std::variant<std::vector<std::string>, DecodeError> disassemble(
    std::span<const std::uint8_t> bytes) {
    auto decoded = decode_program(bytes);
    if (auto* err = std::get_if<DecodeError>(&decoded)) return *err;
    const auto& insts = std::get<std::vector<Instruction>>(decoded);
    std::vector<std::string> lines;
    lines.reserve(insts.size());
    for (std::size_t i = 0; i < insts.size(); ++i) {
        const Instruction& inst = insts[i];
        if (inst.opcode == op::Lddw) {
            const std::uint64_t value =
                static_cast<std::uint32_t>(inst.imm) |
                (static_cast<std::uint64_t>(static_cast<std::uint32_t>(insts[i + 1].imm)) << 32);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "lddw r%u, 0x%llx", inst.dst,
                          static_cast<unsigned long long>(value));
            lines.emplace_back(buf);
            ++i;  // continuation slot consumed
            continue;
        }
        lines.push_back(format_instruction(inst));
    }
    return lines;
}

}  // namespace rbpf
