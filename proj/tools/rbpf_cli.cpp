// Command-line front end: assemble, inspect, verify, run and benchmark
// scripts, plus a simulated device to exercise the host bindings.
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbpf/assembler.hpp"
#include "rbpf/bench.hpp"
#include "rbpf/compress.hpp"
#include "rbpf/corpus.hpp"
#include "rbpf/devicesim.hpp"
#include "rbpf/isa.hpp"
#include "rbpf/vm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;  // verification / format / assembly problems
constexpr int kExitRuntime = 2;   // the script ran and failed
constexpr int kExitUsage = 64;

bool read_file(const std::string& path, std::vector<std::uint8_t>& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return true;
}

bool read_text(const std::string& path, std::string& out) {
    std::ifstream in(path);
    if (!in) return false;
    out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return true;
}

bool write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    return static_cast<bool>(out);
}

// Scripts may arrive raw or in the compressed container; unify here.
bool load_bytecode(const std::string& path, std::vector<std::uint8_t>& out, std::string& error) {
    std::vector<std::uint8_t> blob;
    if (!read_file(path, blob)) {
        error = "could not read '" + path + "'";
        return false;
    }
    if (rbpf::is_compressed_container(blob)) {
        auto unpacked = rbpf::decompress(blob);
        if (auto* err = std::get_if<rbpf::FormatError>(&unpacked)) {
            error = err->message;
            return false;
        }
        out = std::get<std::vector<std::uint8_t>>(std::move(unpacked));
        return true;
    }
    out = std::move(blob);
    return true;
}

std::string coap_code_text(std::uint8_t code) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u.%02u", code >> 5, code & 0x1f);
    return buf;
}

std::string printable_or_hex(std::span<const std::uint8_t> bytes) {
    bool printable = true;
    for (std::uint8_t b : bytes) {
        if (b < 0x20 || b > 0x7e) {
            printable = false;
            break;
        }
    }
    if (printable) return '"' + std::string(bytes.begin(), bytes.end()) + '"';
    std::string out = "0x";
    char buf[4];
    for (std::uint8_t b : bytes) {
        std::snprintf(buf, sizeof(buf), "%02x", b);
        out += buf;
    }
    return out;
}

// "temp=1234e-2" -> name temp, value 1234, scale -2
bool parse_sensor_spec(const std::string& spec, std::string& name, rbpf::SensorReading& reading) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) return false;
    name = spec.substr(0, eq);
    const std::string rest = spec.substr(eq + 1);
    const auto e = rest.find('e', rest.front() == '-' ? 1 : 0);
    try {
        const long value = std::stol(rest.substr(0, e));
        long scale = 0;
        if (e != std::string::npos) scale = std::stol(rest.substr(e + 1));
        if (value < INT16_MIN || value > INT16_MAX || scale < INT8_MIN || scale > INT8_MAX) {
            return false;
        }
        reading.value = static_cast<std::int16_t>(value);
        reading.scale = static_cast<std::int8_t>(scale);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

int cmd_asm(const std::string& input, const std::string& output, bool pack,
            unsigned window_bits, unsigned lookahead_bits) {
    std::string source;
    if (input == "-") {
        source.assign(std::istreambuf_iterator<char>(std::cin),
                      std::istreambuf_iterator<char>());
    } else if (!read_text(input, source)) {
        std::cerr << "error: could not read '" << input << "'\n";
        return kExitRejected;
    }
    const rbpf::BindingTable bindings = rbpf::default_bindings();
    auto assembled = rbpf::assemble(source, &bindings);
    if (auto* err = std::get_if<rbpf::AsmError>(&assembled)) {
        std::cerr << input << ":" << err->line << ": " << err->message << "\n";
        return kExitRejected;
    }
    std::vector<std::uint8_t> bytes = std::get<std::vector<std::uint8_t>>(std::move(assembled));
    const std::size_t raw_size = bytes.size();
    if (pack) {
        bytes = rbpf::compress(bytes, {static_cast<std::uint8_t>(window_bits),
                                       static_cast<std::uint8_t>(lookahead_bits)});
    }
    if (!write_file(output, bytes)) {
        std::cerr << "error: could not write '" << output << "'\n";
        return kExitRejected;
    }
    std::cout << raw_size << " bytes (" << raw_size / rbpf::kSlotSize << " slots)";
    if (pack) std::cout << ", packed to " << bytes.size() << " bytes";
    std::cout << " -> " << output << "\n";
    return kExitOk;
}

int cmd_disasm(const std::string& input) {
    std::vector<std::uint8_t> bytes;
    std::string error;
    if (!load_bytecode(input, bytes, error)) {
        std::cerr << "error: " << error << "\n";
        return kExitRejected;
    }
    auto lines = rbpf::disassemble(bytes);
    if (auto* err = std::get_if<rbpf::DecodeError>(&lines)) {
        std::cerr << "slot " << err->slot << ": " << err->message << "\n";
        return kExitRejected;
    }
    for (const std::string& line : std::get<std::vector<std::string>>(lines)) {
        std::cout << line << "\n";
    }
    return kExitOk;
}

int cmd_verify(const std::string& input, bool as_json) {
    std::vector<std::uint8_t> bytes;
    std::string error;
    if (!load_bytecode(input, bytes, error)) {
        std::cerr << "error: " << error << "\n";
        return kExitRejected;
    }
    const rbpf::BindingTable bindings = rbpf::default_bindings();
    const auto ids = bindings.ids();
    auto result = rbpf::verify(bytes, ids);
    if (auto* report = std::get_if<rbpf::VerifierReport>(&result)) {
        if (as_json) {
            nlohmann::json j;
            j["ok"] = false;
            j["violations"] = nlohmann::json::array();
            for (const auto& v : report->violations) {
                j["violations"].push_back(
                    {{"slot", v.slot}, {"kind", rbpf::to_string(v.kind)}, {"message", v.message}});
            }
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << report->to_string();
        }
        return kExitRejected;
    }
    const auto& program = std::get<rbpf::VerifiedProgram>(result);
    if (as_json) {
        nlohmann::json j;
        j["ok"] = true;
        j["slots"] = program.slot_count();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "ok: " << program.slot_count() << " slots\n";
    }
    return kExitOk;
}

int cmd_run(const std::string& input, std::uint64_t fuel, std::uint64_t arg, bool as_json) {
    std::vector<std::uint8_t> bytes;
    std::string error;
    if (!load_bytecode(input, bytes, error)) {
        std::cerr << "error: " << error << "\n";
        return kExitRejected;
    }
    const rbpf::BindingTable bindings = rbpf::default_bindings();
    const auto ids = bindings.ids();
    auto result = rbpf::verify(bytes, ids);
    if (auto* report = std::get_if<rbpf::VerifierReport>(&result)) {
        std::cerr << report->to_string();
        return kExitRejected;
    }
    const auto& program = std::get<rbpf::VerifiedProgram>(result);

    // Standalone runs get a stack, a store and a scratch response session,
    // so every binding is callable; there are no sensors.
    rbpf::GuestMemory memory;
    rbpf::KeyValueStore store;
    std::vector<rbpf::SimulatedSensor> sensors;
    rbpf::CoapSession session;
    rbpf::HostContext ctx;
    ctx.memory = &memory;
    ctx.store = &store;
    ctx.sensors = &sensors;
    ctx.coap = &session;

    rbpf::ExecOptions options;
    options.fuel = fuel;
    const auto start = std::chrono::steady_clock::now();
    const rbpf::ExecOutcome outcome = rbpf::execute(program, ctx, bindings, arg, options);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const auto micros =
        std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count();

    if (as_json) {
        nlohmann::json j;
        j["r0"] = static_cast<std::int64_t>(outcome.r0);
        j["status"] = rbpf::to_string(outcome.status);
        j["insns"] = outcome.executed;
        j["time_us"] = micros;
        if (outcome.fault) {
            j["fault"] = {{"kind", rbpf::to_string(outcome.fault->kind)},
                          {"pc", outcome.fault->pc},
                          {"message", outcome.fault->message}};
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "r0=" << static_cast<std::int64_t>(outcome.r0)
                  << " status=" << rbpf::to_string(outcome.status) << " insns=" << outcome.executed
                  << " time=" << micros << "us\n";
        if (outcome.fault) {
            std::cout << "fault at slot " << outcome.fault->pc << ": " << outcome.fault->message
                      << "\n";
        }
    }
    return outcome.status == rbpf::ExecStatus::Ok ? kExitOk : kExitRuntime;
}

int cmd_device(const std::string& install_path, const std::string& event_name,
               const std::string& selector, const std::vector<std::string>& sensor_specs,
               unsigned triggers, const std::string& packet_path, bool as_json) {
    rbpf::EventType event{};
    if (!rbpf::event_type_from_string(event_name, event)) {
        std::cerr << "error: unknown event type '" << event_name << "'\n";
        return kExitUsage;
    }
    std::vector<std::uint8_t> blob;
    if (!read_file(install_path, blob)) {
        std::cerr << "error: could not read '" << install_path << "'\n";
        return kExitRejected;
    }
    std::vector<std::uint8_t> packet;
    if (!packet_path.empty() && !read_file(packet_path, packet)) {
        std::cerr << "error: could not read '" << packet_path << "'\n";
        return kExitRejected;
    }

    rbpf::Device device;
    for (std::size_t i = 0; i < sensor_specs.size(); ++i) {
        std::string name;
        rbpf::SensorReading reading;
        if (!parse_sensor_spec(sensor_specs[i], name, reading)) {
            std::cerr << "error: bad sensor spec '" << sensor_specs[i]
                      << "' (want name=VALUE or name=VALUEeSCALE)\n";
            return kExitUsage;
        }
        device.set_sensor(i + 1, name, reading);
    }

    auto installed = device.install(event, selector, blob);
    if (auto* err = std::get_if<rbpf::InstallError>(&installed)) {
        std::cerr << "install failed: " << err->message;
        if (!err->message.empty() && err->message.back() != '\n') std::cerr << "\n";
        return kExitRejected;
    }
    const std::uint32_t id = std::get<std::uint32_t>(installed);
    const rbpf::ScriptInfo info = device.installed().back();

    nlohmann::json j;
    if (as_json) {
        j["script_id"] = id;
        j["bytecode_bytes"] = info.bytecode_bytes;
        j["was_compressed"] = info.was_compressed;
        j["replies"] = nlohmann::json::array();
    } else {
        std::cout << "installed script " << id << " (" << info.bytecode_bytes << " bytes";
        if (info.was_compressed) std::cout << ", unpacked from " << info.blob_bytes;
        std::cout << ") for " << rbpf::to_string(event) << " '" << selector << "'\n";
    }

    bool all_ok = true;
    for (unsigned i = 0; i < triggers; ++i) {
        if (event == rbpf::EventType::CoapRequest) {
            const rbpf::CoapReply reply = device.trigger_coap(selector);
            all_ok = all_ok && reply.ok;
            if (as_json) {
                nlohmann::json r;
                r["code"] = coap_code_text(reply.code);
                r["ok"] = reply.ok;
                r["r0"] = reply.r0;
                r["insns"] = reply.executed;
                r["payload"] = std::string(reply.payload.begin(), reply.payload.end());
                if (!reply.ok) r["detail"] = reply.detail;
                j["replies"].push_back(r);
            } else {
                std::cout << "reply: code " << coap_code_text(reply.code) << ", payload "
                          << printable_or_hex(reply.payload) << " (r0=" << reply.r0 << ", "
                          << reply.executed << " insns)";
                if (!reply.ok) std::cout << " -- " << reply.detail;
                std::cout << "\n";
            }
        } else {
            const rbpf::RunResult result = event == rbpf::EventType::Timer
                                               ? device.trigger_timer(selector)
                                               : device.trigger_packet(selector, packet);
            all_ok = all_ok && result.ok;
            if (as_json) {
                nlohmann::json r;
                r["ok"] = result.ok;
                r["r0"] = result.r0;
                r["status"] = rbpf::to_string(result.status);
                r["insns"] = result.executed;
                if (!result.ok) r["detail"] = result.detail;
                j["replies"].push_back(r);
            } else {
                std::cout << "r0=" << result.r0 << " status=" << rbpf::to_string(result.status)
                          << " insns=" << result.executed;
                if (!result.ok) std::cout << " -- " << result.detail;
                std::cout << "\n";
            }
        }
    }
    if (as_json) std::cout << j.dump(2) << "\n";
    return all_ok ? kExitOk : kExitRuntime;
}

int cmd_compress(const std::string& input, const std::string& output, unsigned window_bits,
                 unsigned lookahead_bits) {
    std::vector<std::uint8_t> bytes;
    if (!read_file(input, bytes)) {
        std::cerr << "error: could not read '" << input << "'\n";
        return kExitRejected;
    }
    const std::vector<std::uint8_t> packed =
        rbpf::compress(bytes, {static_cast<std::uint8_t>(window_bits),
                               static_cast<std::uint8_t>(lookahead_bits)});
    if (!write_file(output, packed)) {
        std::cerr << "error: could not write '" << output << "'\n";
        return kExitRejected;
    }
    const double ratio =
        bytes.empty() ? 0.0 : 100.0 * static_cast<double>(packed.size()) / bytes.size();
    std::printf("%zu -> %zu bytes (%.1f%%)\n", bytes.size(), packed.size(), ratio);
    return kExitOk;
}

int cmd_decompress(const std::string& input, const std::string& output) {
    std::vector<std::uint8_t> bytes;
    if (!read_file(input, bytes)) {
        std::cerr << "error: could not read '" << input << "'\n";
        return kExitRejected;
    }
    auto unpacked = rbpf::decompress(bytes);
    if (auto* err = std::get_if<rbpf::FormatError>(&unpacked)) {
        std::cerr << "error: " << err->message << "\n";
        return kExitRejected;
    }
    const auto& out = std::get<std::vector<std::uint8_t>>(unpacked);
    if (!write_file(output, out)) {
        std::cerr << "error: could not write '" << output << "'\n";
        return kExitRejected;
    }
    std::cout << bytes.size() << " -> " << out.size() << " bytes\n";
    return kExitOk;
}

int cmd_bench(std::uint64_t min_insns, std::size_t input_bytes, std::uint64_t seed, bool as_json) {
    auto result = rbpf::run_fletcher_bench(min_insns, input_bytes, seed);
    if (auto* err = std::get_if<std::string>(&result)) {
        std::cerr << "bench failed: " << *err << "\n";
        return kExitRuntime;
    }
    const rbpf::BenchReport& report = std::get<rbpf::BenchReport>(result);
    if (as_json) {
        nlohmann::json j;
        j["checksum"] = report.checksum;
        j["match"] = report.match;
        j["iterations"] = report.iterations;
        j["instructions"] = report.instructions;
        j["elapsed_ns"] = report.elapsed.count();
        j["insns_per_second"] = report.insns_per_second;
        j["input_bytes"] = report.input_bytes;
        j["bytecode_bytes"] = report.bytecode_bytes;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << report.to_text();
    }
    return kExitOk;
}

int cmd_store(const std::vector<std::string>& set_global,
              const std::vector<std::string>& set_local,
              const std::vector<std::string>& get_global,
              const std::vector<std::string>& get_local, std::size_t capacity, bool list) {
    rbpf::KeyValueStore store(capacity);
    auto parse_kv = [](const std::string& spec, std::uint32_t& key, std::int64_t& value) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) return false;
        try {
            key = static_cast<std::uint32_t>(std::stoul(spec.substr(0, eq)));
            value = std::stoll(spec.substr(eq + 1));
            return true;
        } catch (const std::exception&) {
            return false;
        }
    };
    auto parse_scoped = [](const std::string& spec, std::uint32_t& sid, std::string& rest) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos) return false;
        try {
            sid = static_cast<std::uint32_t>(std::stoul(spec.substr(0, colon)));
            rest = spec.substr(colon + 1);
            return true;
        } catch (const std::exception&) {
            return false;
        }
    };

    for (const std::string& spec : set_global) {
        std::uint32_t key = 0;
        std::int64_t value = 0;
        if (!parse_kv(spec, key, value)) {
            std::cerr << "error: bad --set '" << spec << "' (want KEY=VALUE)\n";
            return kExitUsage;
        }
        std::cout << "set " << key << "=" << value << ": "
                  << (store.store_global(key, value) ? "ok" : "full") << "\n";
    }
    for (const std::string& spec : set_local) {
        std::uint32_t sid = 0;
        std::string rest;
        std::uint32_t key = 0;
        std::int64_t value = 0;
        if (!parse_scoped(spec, sid, rest) || !parse_kv(rest, key, value)) {
            std::cerr << "error: bad --set-local '" << spec << "' (want SCRIPT:KEY=VALUE)\n";
            return kExitUsage;
        }
        std::cout << "set " << sid << ":" << key << "=" << value << ": "
                  << (store.store_local(sid, key, value) ? "ok" : "full") << "\n";
    }
    for (const std::string& spec : get_global) {
        try {
            const auto key = static_cast<std::uint32_t>(std::stoul(spec));
            const auto value = store.fetch_global(key);
            std::cout << "get " << key << ": "
                      << (value ? std::to_string(*value) : std::string("absent")) << "\n";
        } catch (const std::exception&) {
            std::cerr << "error: bad --get '" << spec << "'\n";
            return kExitUsage;
        }
    }
    for (const std::string& spec : get_local) {
        std::uint32_t sid = 0;
        std::string rest;
        if (!parse_scoped(spec, sid, rest)) {
            std::cerr << "error: bad --get-local '" << spec << "' (want SCRIPT:KEY)\n";
            return kExitUsage;
        }
        try {
            const auto key = static_cast<std::uint32_t>(std::stoul(rest));
            const auto value = store.fetch_local(sid, key);
            std::cout << "get " << sid << ":" << key << ": "
                      << (value ? std::to_string(*value) : std::string("absent")) << "\n";
        } catch (const std::exception&) {
            std::cerr << "error: bad --get-local '" << spec << "'\n";
            return kExitUsage;
        }
    }
    if (list) {
        for (const auto& [key, value] : store.global_entries()) {
            std::cout << "global " << key << "=" << value << "\n";
        }
    }
    return kExitOk;
}

int cmd_corpus(const std::string& name) {
    if (name.empty()) {
        for (const auto& entry : rbpf::corpus::entries()) {
            std::cout << entry.name << "\n";
        }
        return kExitOk;
    }
    const std::string_view source = rbpf::corpus::source(name);
    if (source.empty()) {
        std::cerr << "error: no bundled script named '" << name << "'\n";
        return kExitRejected;
    }
    std::cout << source;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sandboxed script VM tool"};
    app.require_subcommand(1);

    // asm
    std::string asm_input, asm_output = "out.bin";
    bool asm_pack = false;
    unsigned asm_window = 8, asm_lookahead = 4;
    auto* asm_cmd = app.add_subcommand("asm", "assemble a script");
    asm_cmd->add_option("input", asm_input, "assembly source ('-' for stdin)")->required();
    asm_cmd->add_option("-o,--output", asm_output, "output file");
    asm_cmd->add_flag("--pack", asm_pack, "wrap the result in the compressed container");
    asm_cmd->add_option("--window-bits", asm_window, "compression window bits (4-16)");
    asm_cmd->add_option("--lookahead-bits", asm_lookahead, "compression length chunk bits (2-8)");

    // disasm
    std::string disasm_input;
    auto* disasm_cmd = app.add_subcommand("disasm", "disassemble bytecode");
    disasm_cmd->add_option("input", disasm_input, "bytecode or container file")->required();

    // verify
    std::string verify_input;
    bool verify_json = false;
    auto* verify_cmd = app.add_subcommand("verify", "run the preflight checks");
    verify_cmd->add_option("input", verify_input, "bytecode or container file")->required();
    verify_cmd->add_flag("--json", verify_json, "machine-readable output");

    // run
    std::string run_input;
    std::uint64_t run_fuel = rbpf::kDefaultFuel;
    std::uint64_t run_arg = 0;
    bool run_json = false;
    auto* run_cmd = app.add_subcommand("run", "verify and execute a script");
    run_cmd->add_option("input", run_input, "bytecode or container file")->required();
    run_cmd->add_option("--fuel", run_fuel, "instruction budget");
    run_cmd->add_option("--arg", run_arg, "context argument placed in r1");
    run_cmd->add_flag("--json", run_json, "machine-readable output");

    // device
    std::string dev_install, dev_event = "coap", dev_selector = "/sense", dev_packet;
    std::vector<std::string> dev_sensors;
    unsigned dev_triggers = 1;
    bool dev_json = false;
    auto* dev_cmd = app.add_subcommand("device", "install a script on a simulated device");
    dev_cmd->add_option("--install", dev_install, "script to install (raw or container)")
        ->required();
    dev_cmd->add_option("--event", dev_event, "event type: coap, timer or packet");
    dev_cmd->add_option("--selector", dev_selector, "event selector, e.g. a resource path");
    dev_cmd->add_option("--sensor", dev_sensors,
                        "simulated sensor as name=VALUE or name=VALUEeSCALE (repeatable)");
    dev_cmd->add_option("--triggers", dev_triggers, "how many times to fire the event");
    dev_cmd->add_option("--packet", dev_packet, "payload file for packet events");
    dev_cmd->add_flag("--json", dev_json, "machine-readable output");

    // compress / decompress
    std::string comp_input, comp_output = "out.rbf";
    unsigned comp_window = 8, comp_lookahead = 4;
    auto* comp_cmd = app.add_subcommand("compress", "pack a file into the script container");
    comp_cmd->add_option("input", comp_input, "input file")->required();
    comp_cmd->add_option("-o,--output", comp_output, "output file");
    comp_cmd->add_option("--window-bits", comp_window, "window bits (4-16)");
    comp_cmd->add_option("--lookahead-bits", comp_lookahead, "length chunk bits (2-8)");

    std::string decomp_input, decomp_output = "out.bin";
    auto* decomp_cmd = app.add_subcommand("decompress", "unpack a script container");
    decomp_cmd->add_option("input", decomp_input, "container file")->required();
    decomp_cmd->add_option("-o,--output", decomp_output, "output file");

    // bench
    std::uint64_t bench_min = 10000000;
    std::size_t bench_bytes = rbpf::kBenchInputLength;
    std::uint64_t bench_seed = rbpf::kBenchSeed;
    bool bench_json = false;
    auto* bench_cmd = app.add_subcommand("bench", "checksum throughput benchmark");
    bench_cmd->add_option("--min-insns", bench_min, "minimum instructions to execute");
    bench_cmd->add_option("--input-bytes", bench_bytes, "benchmark input size");
    bench_cmd->add_option("--seed", bench_seed, "input generator seed");
    bench_cmd->add_flag("--json", bench_json, "machine-readable output");

    // store
    std::vector<std::string> store_set, store_set_local, store_get, store_get_local;
    std::size_t store_capacity = rbpf::KeyValueStore::kDefaultCapacity;
    bool store_list = false;
    auto* store_cmd = app.add_subcommand("store", "exercise the key-value store");
    store_cmd->add_option("--set", store_set, "KEY=VALUE in the shared namespace (repeatable)");
    store_cmd->add_option("--set-local", store_set_local, "SCRIPT:KEY=VALUE (repeatable)");
    store_cmd->add_option("--get", store_get, "KEY to read back (repeatable)");
    store_cmd->add_option("--get-local", store_get_local, "SCRIPT:KEY to read back (repeatable)");
    store_cmd->add_option("--capacity", store_capacity, "per-namespace capacity");
    store_cmd->add_flag("--list", store_list, "print the shared namespace at the end");

    // bindings
    auto* bindings_cmd = app.add_subcommand("bindings", "list the host functions scripts can call");

    // corpus
    std::string corpus_name;
    auto* corpus_cmd = app.add_subcommand("corpus", "print a bundled example script");
    corpus_cmd->add_option("name", corpus_name, "script name; omit to list all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (asm_cmd->parsed()) return cmd_asm(asm_input, asm_output, asm_pack, asm_window, asm_lookahead);
    if (disasm_cmd->parsed()) return cmd_disasm(disasm_input);
    if (verify_cmd->parsed()) return cmd_verify(verify_input, verify_json);
    if (run_cmd->parsed()) return cmd_run(run_input, run_fuel, run_arg, run_json);
    if (dev_cmd->parsed()) {
        return cmd_device(dev_install, dev_event, dev_selector, dev_sensors, dev_triggers,
                          dev_packet, dev_json);
    }
    if (comp_cmd->parsed()) return cmd_compress(comp_input, comp_output, comp_window, comp_lookahead);
    if (decomp_cmd->parsed()) return cmd_decompress(decomp_input, decomp_output);
    if (bench_cmd->parsed()) return cmd_bench(bench_min, bench_bytes, bench_seed, bench_json);
    if (store_cmd->parsed()) {
        return cmd_store(store_set, store_set_local, store_get, store_get_local, store_capacity,
                         store_list);
    }
    if (bindings_cmd->parsed()) {
        std::cout << rbpf::bindings_listing(rbpf::default_bindings());
        return kExitOk;
    }
    if (corpus_cmd->parsed()) return cmd_corpus(corpus_name);
    return kExitUsage;
}
