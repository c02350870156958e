#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rbpf/memory.hpp"
#include "rbpf/store.hpp"

namespace rbpf {

// Host functions never abort the host; they either return a value in r0 or
// report a memory-policy violation, which the interpreter turns into a fault.
struct HostFault {
    AccessViolation violation;
};
using HostResult = std::variant<std::uint64_t, HostFault>;

// Result conventions shared by all bindings: 0 success, -1 invalid argument /
// handle / call order, -2 out of capacity. Producers of data return
// non-negative payload sizes or handles instead of 0.
inline constexpr std::uint64_t kHostOk = 0;
inline constexpr std::uint64_t kHostErrInval = static_cast<std::uint64_t>(-1);
inline constexpr std::uint64_t kHostErrNoSpace = static_cast<std::uint64_t>(-2);

// Minimal response PDU shared with scripts: byte 0 response code, byte 1
// content format, byte 2 payload marker 0xff, payload from byte 3. The
// session enforces the assembly order init -> format -> finish.
enum class CoapStage { Idle, Initialized, Formatted, Finished };

inline constexpr std::uint64_t kCoapHeaderSize = 3;
inline constexpr std::uint8_t kCoapPayloadMarker = 0xff;

struct CoapSession {
    CoapStage stage = CoapStage::Idle;
    std::uint64_t pdu_addr = 0;
    std::uint64_t pdu_capacity = 0;
};

struct SensorReading {
    std::int16_t value = 0;
    std::int8_t scale = 0;
};

struct SimulatedSensor {
    std::string name;
    SensorReading reading;
};

// Everything a host function may touch. Bindings see the guest only through
// `memory`, so the region policy applies to them exactly as it does to
// bytecode.
struct HostContext {
    GuestMemory* memory = nullptr;
    KeyValueStore* store = nullptr;
    std::uint32_t script_id = 0;
    std::vector<SimulatedSensor>* sensors = nullptr;
    CoapSession* coap = nullptr;
};

using HostFn =
    std::function<HostResult(HostContext&, std::uint64_t, std::uint64_t, std::uint64_t,
                             std::uint64_t, std::uint64_t)>;

class BindingTable {
  public:
    // False when the id is already taken.
    bool register_binding(std::uint32_t id, std::string name, HostFn fn);

    const HostFn* find(std::uint32_t id) const;
    const std::string* name_of(std::uint32_t id) const;
    std::vector<std::uint32_t> ids() const;
    std::vector<std::pair<std::uint32_t, std::string>> entries() const;  // sorted by id

  private:
    struct Entry {
        std::string name;
        HostFn fn;
    };
    std::map<std::uint32_t, Entry> entries_;
};

// Stable ids of the stock bindings. Scripts are compiled against these, so
// they must never be renumbered.
namespace binding_id {
inline constexpr std::uint32_t kSaulRegFindNth = 1;
inline constexpr std::uint32_t kSaulRegRead = 2;
inline constexpr std::uint32_t kGcoapRespInit = 3;
inline constexpr std::uint32_t kCoapAddFormat = 4;
inline constexpr std::uint32_t kCoapOptFinish = 5;
inline constexpr std::uint32_t kCoapGetPdu = 6;
inline constexpr std::uint32_t kFmtS16Dfp = 7;
inline constexpr std::uint32_t kStoreLocal = 8;
inline constexpr std::uint32_t kFetchLocal = 9;
inline constexpr std::uint32_t kStoreGlobal = 10;
inline constexpr std::uint32_t kFetchGlobal = 11;
}  // namespace binding_id

// The stock table with all eleven bindings registered.
BindingTable default_bindings();

// Stable text listing, one "<id> <name>" per line; bindings.txt in the
// repository root is this output for the stock table.
std::string bindings_listing(const BindingTable& table);

// Decimal fixed-point rendering of a sensor value: scale >= 0 appends that
// many zeros, scale < 0 shifts the decimal point left. (7, 2) -> "700",
// (1234, -2) -> "12.34", (5, -3) -> "0.005".
std::string format_s16_dfp(std::int16_t value, std::int8_t scale);

}  // namespace rbpf
