#include "rbpf/devicesim.hpp"

#include <algorithm>

#include "rbpf/compress.hpp"

namespace rbpf {

const char* to_string(EventType type) {
    switch (type) {
        case EventType::CoapRequest: return "coap";
        case EventType::Timer: return "timer";
        case EventType::PacketHook: return "packet";
    }
    return "?";
}

bool event_type_from_string(std::string_view text, EventType& out) {
    if (text == "coap") {
        out = EventType::CoapRequest;
    } else if (text == "timer") {
        out = EventType::Timer;
    } else if (text == "packet") {
        out = EventType::PacketHook;
    } else {
        return false;
    }
    return true;
}

std::variant<std::uint32_t, InstallError> Device::install(EventType event, std::string selector,
                                                          std::span<const std::uint8_t> blob) {
    std::vector<std::uint8_t> bytecode;
    const bool was_compressed = is_compressed_container(blob);
    if (was_compressed) {
        auto unpacked = decompress(blob);
        if (auto* err = std::get_if<FormatError>(&unpacked)) {
            return InstallError{"could not unpack the script: " + err->message};
        }
        bytecode = std::get<std::vector<std::uint8_t>>(std::move(unpacked));
    } else {
        bytecode.assign(blob.begin(), blob.end());
    }

    const auto ids = bindings_.ids();
    auto verified = verify(bytecode, ids);
    if (auto* report = std::get_if<VerifierReport>(&verified)) {
        return InstallError{"script rejected:\n" + report->to_string()};
    }
    const std::uint32_t id = next_id_++;
    scripts_.push_back(Installed{id, event, std::move(selector),
                                 std::get<VerifiedProgram>(std::move(verified)), blob.size(),
                                 was_compressed});
    return id;
}

bool Device::uninstall(std::uint32_t script_id) {
    const auto it = std::find_if(scripts_.begin(), scripts_.end(),
                                 [script_id](const Installed& s) { return s.id == script_id; });
    if (it == scripts_.end()) return false;
    scripts_.erase(it);
    return true;
}

std::vector<ScriptInfo> Device::installed() const {
    std::vector<ScriptInfo> out;
    out.reserve(scripts_.size());
    for (const Installed& s : scripts_) {
        out.push_back({s.id, s.event, s.selector, s.program.bytes().size(), s.blob_bytes,
                       s.was_compressed});
    }
    return out;
}

void Device::set_sensor(std::size_t index, std::string name, SensorReading reading) {
    if (index == 0) return;  // sensor handles are 1-based
    if (sensors_.size() < index) sensors_.resize(index);
    sensors_[index - 1] = SimulatedSensor{std::move(name), reading};
}

const Device::Installed* Device::find(EventType event, std::string_view selector) const {
    for (const Installed& s : scripts_) {
        if (s.event == event && s.selector == selector) return &s;
    }
    return nullptr;
}

CoapReply Device::trigger_coap(std::string_view selector) {
    CoapReply reply;
    const Installed* script = find(EventType::CoapRequest, selector);
    if (script == nullptr) {
        reply.code = kCoapCodeNotFound;
        reply.detail = "no handler installed for '" + std::string(selector) + "'";
        return reply;
    }

    // Fresh request state every time: the context tells the script where the
    // response buffer is and how big it may get.
    GuestMemory memory;
    std::uint8_t ctx_bytes[16] = {};
    for (unsigned i = 0; i < 8; ++i) {
        ctx_bytes[i] = static_cast<std::uint8_t>(kCoapPduBase >> (8 * i));
        ctx_bytes[8 + i] = static_cast<std::uint8_t>(kCoapPduCapacity >> (8 * i));
    }
    memory.map_region({kCoapCtxBase, sizeof(ctx_bytes), AccessFlags::Read, "ctx"}, ctx_bytes);
    memory.map_region({kCoapPduBase, kCoapPduCapacity, AccessFlags::ReadWrite, "pdu"});

    CoapSession session;
    HostContext ctx;
    ctx.memory = &memory;
    ctx.store = &store_;
    ctx.script_id = script->id;
    ctx.sensors = &sensors_;
    ctx.coap = &session;

    const ExecOutcome outcome = execute(script->program, ctx, bindings_, kCoapCtxBase);
    reply.status = outcome.status;
    reply.r0 = static_cast<std::int64_t>(outcome.r0);
    reply.executed = outcome.executed;

    if (outcome.status != ExecStatus::Ok) {
        reply.code = kCoapCodeInternalError;
        reply.detail = outcome.fault ? outcome.fault->message : to_string(outcome.status);
        return reply;
    }
    if (reply.r0 <= 0) {
        reply.code = kCoapCodeInternalError;
        reply.detail = "handler returned " + std::to_string(reply.r0);
        return reply;
    }
    if (reply.r0 > static_cast<std::int64_t>(kCoapPduCapacity)) {
        reply.code = kCoapCodeInternalError;
        reply.detail = "handler reported an oversized response";
        return reply;
    }

    const auto pdu = memory.region_bytes("pdu");
    reply.ok = true;
    reply.code = pdu[0];
    const auto total = static_cast<std::size_t>(reply.r0);
    if (total > kCoapHeaderSize) {
        reply.payload.assign(pdu.begin() + kCoapHeaderSize, pdu.begin() + total);
    }
    return reply;
}

RunResult Device::run_simple(const Installed& script, GuestMemory& memory,
                             std::uint64_t context_arg) {
    CoapSession session;  // inert for non-request events, but keeps bindings callable
    HostContext ctx;
    ctx.memory = &memory;
    ctx.store = &store_;
    ctx.script_id = script.id;
    ctx.sensors = &sensors_;
    ctx.coap = &session;

    const ExecOutcome outcome = execute(script.program, ctx, bindings_, context_arg);
    RunResult result;
    result.status = outcome.status;
    result.r0 = static_cast<std::int64_t>(outcome.r0);
    result.executed = outcome.executed;
    if (outcome.status != ExecStatus::Ok) {
        result.detail = outcome.fault ? outcome.fault->message : to_string(outcome.status);
    } else if (result.r0 < 0) {
        result.detail = "handler returned " + std::to_string(result.r0);
    } else {
        result.ok = true;
    }
    return result;
}

RunResult Device::trigger_timer(std::string_view selector) {
    const Installed* script = find(EventType::Timer, selector);
    if (script == nullptr) {
        return {false, ExecStatus::Ok, 0, 0, "no handler installed for '" + std::string(selector) + "'"};
    }
    GuestMemory memory;
    return run_simple(*script, memory, 0);
}

RunResult Device::trigger_packet(std::string_view selector, std::span<const std::uint8_t> packet) {
    const Installed* script = find(EventType::PacketHook, selector);
    if (script == nullptr) {
        return {false, ExecStatus::Ok, 0, 0, "no handler installed for '" + std::string(selector) + "'"};
    }
    GuestMemory memory;
    std::vector<std::uint8_t> framed(8 + packet.size());
    const std::uint64_t length = packet.size();
    for (unsigned i = 0; i < 8; ++i) framed[i] = static_cast<std::uint8_t>(length >> (8 * i));
    std::copy(packet.begin(), packet.end(), framed.begin() + 8);
    memory.map_region({kPacketBase, framed.size(), AccessFlags::Read, "packet"}, framed);
    return run_simple(*script, memory, kPacketBase);
}

}  // namespace rbpf
