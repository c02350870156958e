#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rbpf/bindings.hpp"

namespace rbpf {

struct AsmError {
    std::size_t line = 0;  // 1-based source line
    std::string message;
};

// Two-pass assembler for the textual form the disassembler emits, plus
// labels and named host calls:
//
//   loop: ldxh r5, [r1+0]      ; comment
//         add r3, r5
//         jne r2, 0, loop
//         call fmt_s16_dfp     ; or: call 7
//         lddw r1, 0x1122334455667788
//         exit
//
// Jump targets are labels or explicit +N/-N slot offsets. When `bindings`
// is given, `call` accepts registered names; numeric ids always work.
std::variant<std::vector<std::uint8_t>, AsmError> assemble(std::string_view source,
                                                           const BindingTable* bindings = nullptr);

}  // namespace rbpf
