#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rbpf {

// Permission bits attached to a guest memory region.
enum class AccessFlags : std::uint8_t {
    None = 0,
    Read = 1,
    Write = 2,
    ReadWrite = 3,
};

constexpr AccessFlags operator|(AccessFlags a, AccessFlags b) {
    return static_cast<AccessFlags>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}

constexpr bool has_flag(AccessFlags flags, AccessFlags bit) {
    return (static_cast<std::uint8_t>(flags) & static_cast<std::uint8_t>(bit)) != 0;
}

// One contiguous window of guest address space. `base` is a guest virtual
// address; nothing here implies host memory layout.
struct MemoryRegion {
    std::uint64_t base = 0;
    std::uint64_t length = 0;
    AccessFlags flags = AccessFlags::None;
    std::string label;

    // True when [addr, addr+size) lies entirely inside this region.
    // Written region-relative so it cannot overflow for any addr/size.
    bool contains(std::uint64_t addr, std::uint64_t size) const {
        if (addr < base || size == 0) return false;
        const std::uint64_t off = addr - base;
        return off < length && size <= length - off;
    }

    bool contains_byte(std::uint64_t addr) const { return contains(addr, 1); }
};

using RegionTable = std::vector<MemoryRegion>;

enum class AccessKind { Read, Write };

enum class DenyReason {
    OutOfRegion,       // at least one byte is outside every region
    WriteToReadOnly,   // a single region covers the range but is not writable
    ReadDenied,        // a single region covers the range but is not readable
    StraddlesRegions,  // every byte is mapped, but no single region covers the range
};

struct AccessDecision {
    bool allowed = false;
    DenyReason reason = DenyReason::OutOfRegion;  // meaningful only when denied
    const MemoryRegion* region = nullptr;         // the granting region when allowed
};

const char* to_string(AccessKind kind);
const char* to_string(DenyReason reason);

// Policy core used by the interpreter and by host functions alike. An access
// is allowed only when one region contains the whole range with the right
// permission; ranges spanning adjacent regions are rejected.
AccessDecision check_access(const RegionTable& regions, std::uint64_t addr, std::uint64_t size,
                            AccessKind kind);

}  // namespace rbpf
