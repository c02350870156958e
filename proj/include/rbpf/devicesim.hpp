#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rbpf/bindings.hpp"
#include "rbpf/store.hpp"
#include "rbpf/verifier.hpp"
#include "rbpf/vm.hpp"

namespace rbpf {

// Events a script can be attached to.
enum class EventType { CoapRequest, Timer, PacketHook };

const char* to_string(EventType type);
bool event_type_from_string(std::string_view text, EventType& out);

// Fixed guest address map for event handlers. The stack lives at
// kDefaultStackBase (see vm.hpp).
inline constexpr std::uint64_t kCoapCtxBase = 0x20000000;   // 16B RO: pdu addr, capacity
inline constexpr std::uint64_t kCoapPduBase = 0x30000000;   // response buffer, RW
inline constexpr std::uint64_t kCoapPduCapacity = 128;
inline constexpr std::uint64_t kPacketBase = 0x50000000;    // u64 length + payload, RO

inline constexpr std::uint8_t kCoapCodeContent = 0x45;        // 2.05
inline constexpr std::uint8_t kCoapCodeNotFound = 0x84;       // 4.04, no handler installed
inline constexpr std::uint8_t kCoapCodeInternalError = 0xa0;  // 5.00, handler failed

struct InstallError {
    std::string message;
};

struct ScriptInfo {
    std::uint32_t id = 0;
    EventType event = EventType::CoapRequest;
    std::string selector;
    std::size_t bytecode_bytes = 0;
    std::size_t blob_bytes = 0;  // as received, before any decompression
    bool was_compressed = false;
};

struct CoapReply {
    bool ok = false;
    std::uint8_t code = kCoapCodeInternalError;
    std::vector<std::uint8_t> payload;
    ExecStatus status = ExecStatus::Ok;
    std::int64_t r0 = 0;
    std::uint64_t executed = 0;
    std::string detail;  // set when !ok
};

struct RunResult {
    bool ok = false;
    ExecStatus status = ExecStatus::Ok;
    std::int64_t r0 = 0;
    std::uint64_t executed = 0;
    std::string detail;
};

// A simulated sensor node: install scripts for events, poke events, read
// replies. Deterministic by construction; nothing here depends on wall
// clock or randomness.
class Device {
  public:
    Device() : bindings_(default_bindings()) {}

    // Accepts raw bytecode or a compressed container (sniffed by magic).
    // The returned id is stable for the lifetime of the device.
    std::variant<std::uint32_t, InstallError> install(EventType event, std::string selector,
                                                      std::span<const std::uint8_t> blob);
    bool uninstall(std::uint32_t script_id);
    std::vector<ScriptInfo> installed() const;

    // 1-based slot, mirroring how scripts address sensors. Grows the list
    // as needed.
    void set_sensor(std::size_t index, std::string name, SensorReading reading);
    void clear_sensors() { sensors_.clear(); }

    // Run the handler installed for (CoapRequest, selector) and assemble its
    // response. A missing handler yields 4.04, a failing one 5.00.
    CoapReply trigger_coap(std::string_view selector);
    RunResult trigger_timer(std::string_view selector);
    RunResult trigger_packet(std::string_view selector, std::span<const std::uint8_t> packet);

    KeyValueStore& store() { return store_; }
    const BindingTable& bindings() const { return bindings_; }

  private:
    struct Installed {
        std::uint32_t id;
        EventType event;
        std::string selector;
        VerifiedProgram program;
        std::size_t blob_bytes;
        bool was_compressed;
    };

    const Installed* find(EventType event, std::string_view selector) const;
    RunResult run_simple(const Installed& script, GuestMemory& memory, std::uint64_t context_arg);

    BindingTable bindings_;
    KeyValueStore store_;
    std::vector<SimulatedSensor> sensors_;
    std::vector<Installed> scripts_;
    std::uint32_t next_id_ = 1;
};

}  // namespace rbpf
