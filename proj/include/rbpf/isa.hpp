// Instruction set definitions and bit-exact encode/decode/disassembly for the
// eBPF-compatible subset executed by this VM.
//
// Wire format: flat little-endian 8-byte slots. Byte 0 is the opcode, byte 1
// packs dst (low nibble) and src (high nibble), bytes 2-3 are a signed 16-bit
// offset, bytes 4-7 a signed 32-bit immediate. The wide load `lddw` occupies
// two consecutive slots; the second slot has opcode 0 and carries the high 32
// immediate bits.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rbpf {

inline constexpr std::size_t kSlotSize = 8;
inline constexpr std::uint8_t kMaxRegister = 10;

struct Instruction {
    std::uint8_t opcode = 0;
    std::uint8_t dst = 0;
    std::uint8_t src = 0;
    std::int16_t offset = 0;
    std::int32_t imm = 0;

    bool operator==(const Instruction&) const = default;
};

// Instruction classes over the supported subset. `lddw` gets its own class
// since it is the only two-slot instruction.
enum class OpcodeClass {
    Alu64,
    Alu32,
    WideLoad,  // lddw
    LoadReg,   // ldx{b,h,w,dw}
    StoreImm,  // st{b,h,w,dw}
    StoreReg,  // stx{b,h,w,dw}
    Jump,      // ja and all conditional jumps
    Call,
    Exit,
    Unknown,
};

namespace op {
// Opcode byte layout: class in bits 0-2, source flag in bit 3 (ALU/JMP),
// operation in bits 4-7. Memory opcodes use size bits 3-4 and mode bits 5-7.
inline constexpr std::uint8_t kClassMask = 0x07;
inline constexpr std::uint8_t kClsLd = 0x00;
inline constexpr std::uint8_t kClsLdx = 0x01;
inline constexpr std::uint8_t kClsSt = 0x02;
inline constexpr std::uint8_t kClsStx = 0x03;
inline constexpr std::uint8_t kClsAlu32 = 0x04;
inline constexpr std::uint8_t kClsJmp = 0x05;
inline constexpr std::uint8_t kClsAlu64 = 0x07;

inline constexpr std::uint8_t kSrcImm = 0x00;
inline constexpr std::uint8_t kSrcReg = 0x08;

inline constexpr std::uint8_t kSizeMask = 0x18;
inline constexpr std::uint8_t kSizeW = 0x00;
inline constexpr std::uint8_t kSizeH = 0x08;
inline constexpr std::uint8_t kSizeB = 0x10;
inline constexpr std::uint8_t kSizeDw = 0x18;

inline constexpr std::uint8_t kAluOpMask = 0xf0;

inline constexpr std::uint8_t Lddw = 0x18;
inline constexpr std::uint8_t LddwHigh = 0x00;  // second slot of lddw
inline constexpr std::uint8_t Ja = 0x05;
inline constexpr std::uint8_t Call = 0x85;
inline constexpr std::uint8_t Exit = 0x95;
inline constexpr std::uint8_t Le = 0xd4;  // imm selects width 16/32/64
inline constexpr std::uint8_t Be = 0xdc;
}  // namespace op

OpcodeClass classify(std::uint8_t opcode);
bool opcode_supported(std::uint8_t opcode);

// Width in bytes of a memory opcode (1, 2, 4 or 8).
unsigned memory_access_width(std::uint8_t opcode);

// True for conditional jumps and `ja` (not call/exit).
bool is_jump(std::uint8_t opcode);
bool is_conditional_jump(std::uint8_t opcode);

struct DecodeError {
    std::size_t slot = 0;  // slot index of the first failing instruction
    std::string message;
};

struct EncodeError {
    std::string message;
};

// Decodes one 8-byte little-endian slot. The all-zero slot (the high half of
// an lddw) is not a complete instruction on its own and decodes as an error;
// decode_program() handles the pairing.
std::variant<Instruction, DecodeError> decode(std::span<const std::uint8_t> slot);

// Decodes a whole program, one Instruction per slot. The second slot of every
// lddw is kept in place (opcode 0, imm = high bits) so jump offsets stay
// slot-relative. Errors carry the offending slot index.
std::variant<std::vector<Instruction>, DecodeError> decode_program(
    std::span<const std::uint8_t> bytes);

std::variant<std::array<std::uint8_t, kSlotSize>, EncodeError> encode(const Instruction& inst);

// Renders one line per instruction; lddw consumes two slots and yields a
// single line. Every line round-trips through the assembler.
std::variant<std::vector<std::string>, DecodeError> disassemble(
    std::span<const std::uint8_t> bytes);

std::string format_instruction(const Instruction& inst);

// Mnemonic table shared by the disassembler and the assembler.
enum class OperandShape {
    AluBinary,   // add r1, r2 / add r1, 42
    AluUnary,    // neg r1
    Endian,      // le16 r1 (width in imm)
    LoadReg,     // ldxw r1, [r2+4]
    StoreImm,    // stw [r1+4], 42
    StoreReg,    // stxw [r1+4], r2
    WideLoad,    // lddw r1, 0x...
    JumpUncond,  // ja +3
    JumpCond,    // jeq r1, r2, +3
    Call,        // call 3 / call name
    Exit,
};

struct MnemonicInfo {
    const char* name;
    OperandShape shape;
    std::uint8_t opcode_imm;  // imm-operand form, 0xff if none
    std::uint8_t opcode_reg;  // reg-operand form, 0xff if none
};

std::span<const MnemonicInfo> mnemonic_table();
const MnemonicInfo* mnemonic_for_opcode(std::uint8_t opcode);

}  // namespace rbpf
