#include "rbpf/assembler.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include "rbpf/isa.hpp"

namespace rbpf {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_label_name(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s.front())) && s.front() != '_') return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

// Accepts decimal and 0x-hex, with an optional sign; yields the 64-bit
// two's-complement bit pattern.
bool parse_number(std::string_view text, std::uint64_t& bits) {
    text = trim(text);
    if (text.empty()) return false;
    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) return false;
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        base = 16;
        text.remove_prefix(2);
    }
    std::uint64_t magnitude = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), magnitude, base);
    if (ec != std::errc() || ptr != text.data() + text.size()) return false;
    bits = negative ? 0 - magnitude : magnitude;
    return true;
}

bool parse_register(std::string_view text, std::uint8_t& reg) {
    text = trim(text);
    if (text.size() < 2 || text.size() > 3 || text[0] != 'r') return false;
    std::uint64_t n = 0;
    if (!parse_number(text.substr(1), n)) return false;
    if (n > kMaxRegister) return false;
    reg = static_cast<std::uint8_t>(n);
    return true;
}

bool fits_imm32(std::uint64_t bits) {
    const auto s = static_cast<std::int64_t>(bits);
    return (s >= INT32_MIN && s <= INT32_MAX) || bits <= UINT32_MAX;
}

bool fits_offset16(std::uint64_t bits) {
    const auto s = static_cast<std::int64_t>(bits);
    return s >= INT16_MIN && s <= INT16_MAX;
}

// "[r3+8]", "[r10-16]", "[r1]"
bool parse_mem_operand(std::string_view text, std::uint8_t& reg, std::int16_t& offset) {
    text = trim(text);
    if (text.size() < 4 || text.front() != '[' || text.back() != ']') return false;
    std::string_view inner = trim(text.substr(1, text.size() - 2));
    std::size_t split = inner.find_first_of("+-", 1);  // skip a sign directly after 'r'? none
    std::string_view reg_part = inner;
    std::string_view off_part;
    if (split != std::string_view::npos) {
        reg_part = trim(inner.substr(0, split));
        off_part = trim(inner.substr(split));  // keeps the sign
    }
    if (!parse_register(reg_part, reg)) return false;
    offset = 0;
    if (!off_part.empty()) {
        std::uint64_t bits = 0;
        if (!parse_number(off_part, bits) || !fits_offset16(bits)) return false;
        offset = static_cast<std::int16_t>(bits);
    }
    return true;
}

struct SourceInst {
    std::size_t line = 0;
    std::size_t slot = 0;  // index of the first slot this instruction occupies
    std::string mnemonic;
    std::vector<std::string> operands;
};

std::vector<std::string> split_operands(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view piece = trim(text.substr(start, comma - start));
        if (!piece.empty()) out.emplace_back(piece);
        start = comma + 1;
    }
    return out;
}

const MnemonicInfo* lookup_mnemonic(std::string_view name) {
    for (const auto& m : mnemonic_table()) {
        if (name == m.name) return &m;
    }
    return nullptr;
}

}  // namespace

std::variant<std::vector<std::uint8_t>, AsmError> assemble(std::string_view source,
                                                           const BindingTable* bindings) {
    std::vector<SourceInst> insts;
    std::map<std::string, std::size_t, std::less<>> labels;  // name -> slot index
    std::size_t slot = 0;

    // Pass 1: collect instructions and label positions.
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= source.size()) {
        std::size_t end = source.find('\n', begin);
        if (end == std::string_view::npos) end = source.size();
        ++line_no;
        std::string_view line = source.substr(begin, end - begin);
        begin = end + 1;

        if (const std::size_t comment = line.find(';'); comment != std::string_view::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);

        // Leading labels, possibly several, possibly alone on the line.
        while (true) {
            const std::size_t colon = line.find(':');
            if (colon == std::string_view::npos) break;
            const std::string_view name = trim(line.substr(0, colon));
            if (!is_label_name(name)) {
                return AsmError{line_no, "bad label name '" + std::string(name) + "'"};
            }
            if (!labels.emplace(std::string(name), slot).second) {
                return AsmError{line_no, "duplicate label '" + std::string(name) + "'"};
            }
            line = trim(line.substr(colon + 1));
        }
        if (line.empty()) continue;

        SourceInst inst;
        inst.line = line_no;
        inst.slot = slot;
        const std::size_t space = line.find_first_of(" \t");
        inst.mnemonic = std::string(line.substr(0, space));
        if (space != std::string_view::npos) {
            inst.operands = split_operands(trim(line.substr(space)));
        }
        const MnemonicInfo* info = lookup_mnemonic(inst.mnemonic);
        if (info == nullptr) {
            return AsmError{line_no, "unknown mnemonic '" + inst.mnemonic + "'"};
        }
        slot += info->shape == OperandShape::WideLoad ? 2 : 1;
        insts.push_back(std::move(inst));
    }
    const std::size_t total_slots = slot;

    // Pass 2: encode.
    std::vector<std::uint8_t> bytes;
    bytes.reserve(total_slots * kSlotSize);
    auto emit = [&bytes](const Instruction& inst) -> std::string {
        auto encoded = encode(inst);
        if (auto* err = std::get_if<EncodeError>(&encoded)) return err->message;
        const auto& slot_bytes = std::get<std::array<std::uint8_t, kSlotSize>>(encoded);
        bytes.insert(bytes.end(), slot_bytes.begin(), slot_bytes.end());
        return {};
    };

    for (const SourceInst& src : insts) {
        const MnemonicInfo* info = lookup_mnemonic(src.mnemonic);
        const auto operand_error = [&src](std::string expect) {
            return AsmError{src.line, src.mnemonic + " expects " + std::move(expect)};
        };
        auto resolve_target = [&](std::string_view text, std::int16_t& offset) -> bool {
            text = trim(text);
            std::uint64_t bits = 0;
            if (parse_number(text, bits)) {
                if (!fits_offset16(bits)) return false;
                offset = static_cast<std::int16_t>(bits);
                return true;
            }
            const auto it = labels.find(text);
            if (it == labels.end()) return false;
            const std::int64_t rel = static_cast<std::int64_t>(it->second) -
                                     (static_cast<std::int64_t>(src.slot) + 1);
            if (rel < INT16_MIN || rel > INT16_MAX) return false;
            offset = static_cast<std::int16_t>(rel);
            return true;
        };

        Instruction out;
        std::string encode_message;
        switch (info->shape) {
            case OperandShape::AluBinary: {
                if (src.operands.size() != 2) return operand_error("'rD, rS' or 'rD, imm'");
                if (!parse_register(src.operands[0], out.dst)) {
                    return operand_error("a destination register");
                }
                if (parse_register(src.operands[1], out.src)) {
                    out.opcode = info->opcode_reg;
                } else {
                    std::uint64_t bits = 0;
                    if (!parse_number(src.operands[1], bits) || !fits_imm32(bits)) {
                        return operand_error("a register or a 32-bit immediate");
                    }
                    out.opcode = info->opcode_imm;
                    out.imm = static_cast<std::int32_t>(static_cast<std::uint32_t>(bits));
                }
                encode_message = emit(out);
                break;
            }
            case OperandShape::AluUnary: {
                if (src.operands.size() != 1 || !parse_register(src.operands[0], out.dst)) {
                    return operand_error("a single register");
                }
                out.opcode = info->opcode_imm;
                encode_message = emit(out);
                break;
            }
            case OperandShape::Endian: {
                if (src.operands.size() != 1 || !parse_register(src.operands[0], out.dst)) {
                    return operand_error("a single register");
                }
                out.opcode = info->opcode_imm;
                // Width is part of the mnemonic: le16/le32/le64, be16/...
                out.imm = std::stoi(std::string(std::string_view(src.mnemonic).substr(2)));
                encode_message = emit(out);
                break;
            }
            case OperandShape::WideLoad: {
                if (src.operands.size() != 2 || !parse_register(src.operands[0], out.dst)) {
                    return operand_error("'rD, imm64'");
                }
                std::uint64_t bits = 0;
                if (!parse_number(src.operands[1], bits)) {
                    return operand_error("a 64-bit immediate");
                }
                out.opcode = op::Lddw;
                out.imm = static_cast<std::int32_t>(static_cast<std::uint32_t>(bits));
                encode_message = emit(out);
                if (encode_message.empty()) {
                    Instruction high;
                    high.imm = static_cast<std::int32_t>(static_cast<std::uint32_t>(bits >> 32));
                    encode_message = emit(high);
                }
                break;
            }
            case OperandShape::LoadReg: {
                if (src.operands.size() != 2 || !parse_register(src.operands[0], out.dst) ||
                    !parse_mem_operand(src.operands[1], out.src, out.offset)) {
                    return operand_error("'rD, [rS+off]'");
                }
                out.opcode = info->opcode_reg;
                encode_message = emit(out);
                break;
            }
            case OperandShape::StoreImm: {
                std::uint64_t bits = 0;
                if (src.operands.size() != 2 ||
                    !parse_mem_operand(src.operands[0], out.dst, out.offset) ||
                    !parse_number(src.operands[1], bits) || !fits_imm32(bits)) {
                    return operand_error("'[rD+off], imm'");
                }
                out.opcode = info->opcode_imm;
                out.imm = static_cast<std::int32_t>(static_cast<std::uint32_t>(bits));
                encode_message = emit(out);
                break;
            }
            case OperandShape::StoreReg: {
                if (src.operands.size() != 2 ||
                    !parse_mem_operand(src.operands[0], out.dst, out.offset) ||
                    !parse_register(src.operands[1], out.src)) {
                    return operand_error("'[rD+off], rS'");
                }
                out.opcode = info->opcode_reg;
                encode_message = emit(out);
                break;
            }
            case OperandShape::JumpUncond: {
                if (src.operands.size() != 1 || !resolve_target(src.operands[0], out.offset)) {
                    return operand_error("a label or slot offset");
                }
                out.opcode = info->opcode_imm;
                encode_message = emit(out);
                break;
            }
            case OperandShape::JumpCond: {
                if (src.operands.size() != 3 || !parse_register(src.operands[0], out.dst)) {
                    return operand_error("'rD, rS|imm, target'");
                }
                if (!resolve_target(src.operands[2], out.offset)) {
                    return AsmError{src.line, "unknown jump target '" + src.operands[2] + "'"};
                }
                if (parse_register(src.operands[1], out.src)) {
                    out.opcode = info->opcode_reg;
                } else {
                    std::uint64_t bits = 0;
                    if (!parse_number(src.operands[1], bits) || !fits_imm32(bits)) {
                        return operand_error("a register or a 32-bit immediate");
                    }
                    out.opcode = info->opcode_imm;
                    out.imm = static_cast<std::int32_t>(static_cast<std::uint32_t>(bits));
                }
                encode_message = emit(out);
                break;
            }
            case OperandShape::Call: {
                if (src.operands.size() != 1) return operand_error("a host function id or name");
                out.opcode = op::Call;
                std::uint64_t bits = 0;
                if (parse_number(src.operands[0], bits)) {
                    if (!fits_imm32(bits)) return operand_error("a 32-bit host function id");
                    out.imm = static_cast<std::int32_t>(static_cast<std::uint32_t>(bits));
                } else {
                    bool found = false;
                    if (bindings != nullptr) {
                        for (const auto& [id, name] : bindings->entries()) {
                            if (name == src.operands[0]) {
                                out.imm = static_cast<std::int32_t>(id);
                                found = true;
                                break;
                            }
                        }
                    }
                    if (!found) {
                        return AsmError{src.line,
                                        "unknown host function '" + src.operands[0] + "'"};
                    }
                }
                encode_message = emit(out);
                break;
            }
            case OperandShape::Exit: {
                if (!src.operands.empty()) return operand_error("no operands");
                out.opcode = op::Exit;
                encode_message = emit(out);
                break;
            }
        }
        if (!encode_message.empty()) return AsmError{src.line, encode_message};
    }
    return bytes;
}

}  // namespace rbpf
