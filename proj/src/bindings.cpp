#include "rbpf/bindings.hpp"

#include <algorithm>

namespace rbpf {

bool BindingTable::register_binding(std::uint32_t id, std::string name, HostFn fn) {
    return entries_.emplace(id, Entry{std::move(name), std::move(fn)}).second;
}

const HostFn* BindingTable::find(std::uint32_t id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second.fn;
}

const std::string* BindingTable::name_of(std::uint32_t id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second.name;
}

std::vector<std::uint32_t> BindingTable::ids() const {
    std::vector<std::uint32_t> out;
    out.reserve(entries_.size());
    for (const auto& [id, entry] : entries_) out.push_back(id);
    return out;
}

std::vector<std::pair<std::uint32_t, std::string>> BindingTable::entries() const {
    std::vector<std::pair<std::uint32_t, std::string>> out;
    out.reserve(entries_.size());
    for (const auto& [id, entry] : entries_) out.emplace_back(id, entry.name);
    return out;
}

std::string format_s16_dfp(std::int16_t value, std::int8_t scale) {
    if (scale >= 0) {
        std::string out = std::to_string(value);
        out.append(static_cast<std::size_t>(scale), '0');
        return out;
    }
    const std::size_t frac = static_cast<std::size_t>(-static_cast<int>(scale));
    const bool negative = value < 0;
    const std::uint32_t magnitude = negative ? static_cast<std::uint32_t>(-static_cast<std::int32_t>(value))
                                             : static_cast<std::uint32_t>(value);
    std::string digits = std::to_string(magnitude);
    if (digits.size() <= frac) {
        digits.insert(0, frac - digits.size() + 1, '0');
    }
    std::string out = negative ? "-" : "";
    out += digits.substr(0, digits.size() - frac);
    out += '.';
    out += digits.substr(digits.size() - frac);
    return out;
}

namespace {

// Forward a memory denial to the interpreter as a host fault.
std::optional<HostResult> guard(std::optional<AccessViolation> violation) {
    if (violation) return HostResult{HostFault{*violation}};
    return std::nullopt;
}

HostResult saul_reg_find_nth(HostContext& ctx, std::uint64_t index, std::uint64_t, std::uint64_t,
                             std::uint64_t, std::uint64_t) {
    if (ctx.sensors == nullptr) return kHostOk;  // handle 0: nothing found
    if (index == 0 || index > ctx.sensors->size()) return kHostOk;
    return index;  // 1-based handle
}

HostResult saul_reg_read(HostContext& ctx, std::uint64_t handle, std::uint64_t dest, std::uint64_t,
                         std::uint64_t, std::uint64_t) {
    if (ctx.memory == nullptr || ctx.sensors == nullptr) return kHostErrInval;
    if (handle == 0 || handle > ctx.sensors->size()) return kHostErrInval;
    const SensorReading reading = (*ctx.sensors)[handle - 1].reading;
    // Same layout every script sees: s16 value, s8 scale, zero padding.
    std::uint8_t bytes[8] = {};
    bytes[0] = static_cast<std::uint8_t>(reading.value & 0xff);
    bytes[1] = static_cast<std::uint8_t>((reading.value >> 8) & 0xff);
    bytes[2] = static_cast<std::uint8_t>(reading.scale);
    if (auto fault = guard(ctx.memory->write_bytes(dest, bytes))) return *fault;
    return kHostOk;
}

HostResult gcoap_resp_init(HostContext& ctx, std::uint64_t pdu, std::uint64_t capacity,
                           std::uint64_t code, std::uint64_t, std::uint64_t) {
    if (ctx.memory == nullptr || ctx.coap == nullptr) return kHostErrInval;
    if (ctx.coap->stage != CoapStage::Idle) return kHostErrInval;
    if (capacity < kCoapHeaderSize) return kHostErrNoSpace;
    if (auto fault = guard(ctx.memory->store(pdu, 1, code & 0xff))) return *fault;
    ctx.coap->pdu_addr = pdu;
    ctx.coap->pdu_capacity = capacity;
    ctx.coap->stage = CoapStage::Initialized;
    return kHostOk;
}

HostResult coap_add_format(HostContext& ctx, std::uint64_t format, std::uint64_t, std::uint64_t,
                           std::uint64_t, std::uint64_t) {
    if (ctx.memory == nullptr || ctx.coap == nullptr) return kHostErrInval;
    if (ctx.coap->stage != CoapStage::Initialized) return kHostErrInval;
    if (auto fault = guard(ctx.memory->store(ctx.coap->pdu_addr + 1, 1, format & 0xff))) {
        return *fault;
    }
    ctx.coap->stage = CoapStage::Formatted;
    return kHostOk;
}

HostResult coap_opt_finish(HostContext& ctx, std::uint64_t, std::uint64_t, std::uint64_t,
                           std::uint64_t, std::uint64_t) {
    if (ctx.memory == nullptr || ctx.coap == nullptr) return kHostErrInval;
    if (ctx.coap->stage != CoapStage::Formatted) return kHostErrInval;
    if (auto fault = guard(ctx.memory->store(ctx.coap->pdu_addr + 2, 1, kCoapPayloadMarker))) {
        return *fault;
    }
    ctx.coap->stage = CoapStage::Finished;
    return kCoapHeaderSize;  // offset of the payload the script writes next
}

HostResult coap_get_pdu(HostContext& ctx, std::uint64_t, std::uint64_t, std::uint64_t,
                        std::uint64_t, std::uint64_t) {
    if (ctx.coap == nullptr || ctx.coap->stage == CoapStage::Idle) return std::uint64_t{0};
    return ctx.coap->pdu_addr;
}

HostResult fmt_s16_dfp(HostContext& ctx, std::uint64_t dest, std::uint64_t value,
                       std::uint64_t scale, std::uint64_t, std::uint64_t) {
    if (ctx.memory == nullptr) return kHostErrInval;
    const std::string text = format_s16_dfp(static_cast<std::int16_t>(value & 0xffff),
                                            static_cast<std::int8_t>(scale & 0xff));
    const auto bytes =
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()),
                                      text.size());
    if (auto fault = guard(ctx.memory->write_bytes(dest, bytes))) return *fault;
    return text.size();
}

HostResult store_local(HostContext& ctx, std::uint64_t key, std::uint64_t value, std::uint64_t,
                       std::uint64_t, std::uint64_t) {
    if (ctx.store == nullptr) return kHostErrInval;
    const bool ok = ctx.store->store_local(ctx.script_id, static_cast<std::uint32_t>(key),
                                           static_cast<std::int64_t>(value));
    return ok ? kHostOk : kHostErrNoSpace;
}

HostResult store_global(HostContext& ctx, std::uint64_t key, std::uint64_t value, std::uint64_t,
                        std::uint64_t, std::uint64_t) {
    if (ctx.store == nullptr) return kHostErrInval;
    const bool ok =
        ctx.store->store_global(static_cast<std::uint32_t>(key), static_cast<std::int64_t>(value));
    return ok ? kHostOk : kHostErrNoSpace;
}

// Fetches write the value (or 0) to an 8-byte slot at `dest` and return a
// presence flag, so scripts can tell "absent" from "stored zero".
HostResult fetch_common(HostContext& ctx, std::optional<std::int64_t> found, std::uint64_t dest) {
    if (ctx.memory == nullptr) return kHostErrInval;
    const std::uint64_t value = static_cast<std::uint64_t>(found.value_or(0));
    if (auto fault = guard(ctx.memory->store(dest, 8, value))) return *fault;
    return found.has_value() ? std::uint64_t{1} : std::uint64_t{0};
}

HostResult fetch_local(HostContext& ctx, std::uint64_t key, std::uint64_t dest, std::uint64_t,
                       std::uint64_t, std::uint64_t) {
    if (ctx.store == nullptr) return kHostErrInval;
    return fetch_common(ctx, ctx.store->fetch_local(ctx.script_id, static_cast<std::uint32_t>(key)),
                        dest);
}

HostResult fetch_global(HostContext& ctx, std::uint64_t key, std::uint64_t dest, std::uint64_t,
                        std::uint64_t, std::uint64_t) {
    if (ctx.store == nullptr) return kHostErrInval;
    return fetch_common(ctx, ctx.store->fetch_global(static_cast<std::uint32_t>(key)), dest);
}

}  // namespace

std::string bindings_listing(const BindingTable& table) {
    std::string out;
    for (const auto& [id, name] : table.entries()) {
        out += std::to_string(id) + " " + name + "\n";
    }
    return out;
}

BindingTable default_bindings() {
    BindingTable table;
    table.register_binding(binding_id::kSaulRegFindNth, "saul_reg_find_nth", saul_reg_find_nth);
    table.register_binding(binding_id::kSaulRegRead, "saul_reg_read", saul_reg_read);
    table.register_binding(binding_id::kGcoapRespInit, "gcoap_resp_init", gcoap_resp_init);
    table.register_binding(binding_id::kCoapAddFormat, "coap_add_format", coap_add_format);
    table.register_binding(binding_id::kCoapOptFinish, "coap_opt_finish", coap_opt_finish);
    table.register_binding(binding_id::kCoapGetPdu, "coap_get_pdu", coap_get_pdu);
    table.register_binding(binding_id::kFmtS16Dfp, "fmt_s16_dfp", fmt_s16_dfp);
    table.register_binding(binding_id::kStoreLocal, "store_local", store_local);
    table.register_binding(binding_id::kFetchLocal, "fetch_local", fetch_local);
    table.register_binding(binding_id::kStoreGlobal, "store_global", store_global);
    table.register_binding(binding_id::kFetchGlobal, "fetch_global", fetch_global);
    return table;
}

}  // namespace rbpf
