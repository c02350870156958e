#include "rbpf/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "rbpf/assembler.hpp"
#include "rbpf/corpus.hpp"
#include "rbpf/vm.hpp"

namespace rbpf {

std::uint32_t fletcher32_reference(std::span<const std::uint8_t> data) {
    std::uint32_t low = 0;
    std::uint32_t high = 0;
    for (std::size_t i = 0; i < data.size(); i += 2) {
        const std::uint32_t word =
            data[i] | (i + 1 < data.size() ? static_cast<std::uint32_t>(data[i + 1]) << 8 : 0);
        low = (low + word) % 65535;
        high = (high + low) % 65535;
    }
    return (high << 16) | low;
}

std::vector<std::uint8_t> bench_input(std::size_t length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> out(length);
    for (auto& byte : out) byte = static_cast<std::uint8_t>(rng());
    return out;
}

std::vector<std::uint8_t> pack_word_region(std::span<const std::uint8_t> data) {
    const std::uint64_t words = (data.size() + 1) / 2;
    std::vector<std::uint8_t> out(8 + words * 2, 0);
    for (unsigned i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(words >> (8 * i));
    std::copy(data.begin(), data.end(), out.begin() + 8);
    return out;
}

std::string BenchReport::to_text() const {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "checksum    0x%08llx (%s)\n"
                  "iterations  %llu over %zu input bytes\n"
                  "bytecode    %zu bytes\n"
                  "executed    %llu instructions in %.3f ms\n"
                  "throughput  %.0f instructions/s\n",
                  static_cast<unsigned long long>(checksum), match ? "matches host" : "MISMATCH",
                  static_cast<unsigned long long>(iterations), input_bytes, bytecode_bytes,
                  static_cast<unsigned long long>(instructions),
                  std::chrono::duration<double, std::milli>(elapsed).count(), insns_per_second);
    return buf;
}

std::variant<BenchReport, std::string> run_fletcher_bench(std::uint64_t min_instructions,
                                                          std::size_t input_length,
                                                          std::uint64_t seed) {
    const BindingTable bindings = default_bindings();
    auto assembled = assemble(corpus::source("fletcher32"), &bindings);
    if (auto* err = std::get_if<AsmError>(&assembled)) {
        return "checksum script line " + std::to_string(err->line) + ": " + err->message;
    }
    const auto& bytecode = std::get<std::vector<std::uint8_t>>(assembled);
    const auto ids = bindings.ids();
    auto verified = verify(bytecode, ids);
    if (auto* report = std::get_if<VerifierReport>(&verified)) {
        return "checksum script rejected:\n" + report->to_string();
    }
    const auto& program = std::get<VerifiedProgram>(verified);

    const std::vector<std::uint8_t> input = bench_input(input_length, seed);
    const std::uint32_t reference = fletcher32_reference(input);
    const std::vector<std::uint8_t> packed = pack_word_region(input);

    BenchReport report;
    report.reference = reference;
    report.input_bytes = input.size();
    report.bytecode_bytes = bytecode.size();

    // One region set reused across iterations; each run needs fuel for
    // roughly nine instructions per input word.
    GuestMemory memory;
    if (!memory.map_region({kBenchInputBase, packed.size(), AccessFlags::Read, "input"}, packed)) {
        return "could not map the benchmark input region";
    }
    HostContext ctx;
    ctx.memory = &memory;
    ExecOptions options;
    options.fuel = 64 + 16 * static_cast<std::uint64_t>((input.size() + 1) / 2);

    const auto start = std::chrono::steady_clock::now();
    do {
        const ExecOutcome outcome = execute(program, ctx, bindings, kBenchInputBase, options);
        if (outcome.status != ExecStatus::Ok) {
            return std::string("checksum script did not finish: ") + to_string(outcome.status);
        }
        if (report.iterations == 0) report.checksum = outcome.r0;
        if (outcome.r0 != report.checksum) return "checksum changed between iterations";
        report.instructions += outcome.executed;
        ++report.iterations;
    } while (report.instructions < min_instructions);
    report.elapsed = std::chrono::steady_clock::now() - start;

    report.match = report.checksum == reference;
    if (!report.match) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "checksum mismatch: script 0x%llx, host 0x%llx",
                      static_cast<unsigned long long>(report.checksum),
                      static_cast<unsigned long long>(report.reference));
        return std::string(buf);
    }
    const double seconds = std::chrono::duration<double>(report.elapsed).count();
    report.insns_per_second = seconds > 0 ? static_cast<double>(report.instructions) / seconds : 0;
    return report;
}

}  // namespace rbpf
