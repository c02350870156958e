#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "rbpf/sandbox.hpp"

namespace rbpf {

// A denied guest access, with enough detail for fault reports.
struct AccessViolation {
    std::uint64_t addr = 0;
    std::uint64_t size = 0;
    AccessKind kind = AccessKind::Read;
    DenyReason reason = DenyReason::OutOfRegion;
};

// One policy consultation, surfaced through the trace hook.
struct AccessRecord {
    std::uint64_t addr = 0;
    std::uint64_t size = 0;
    AccessKind kind = AccessKind::Read;
    bool allowed = false;
};

// Guest address space: a set of non-overlapping regions, each backed by host
// memory owned here. Every load/store funnels through the region policy;
// there is no unchecked path, and `policy_checks()` counts consultations so
// tests can prove that.
class GuestMemory {
  public:
    // Returns false (and maps nothing) when the region is empty or overlaps
    // an existing one. Initial contents are copied to the region start; the
    // remainder is zero-filled.
    bool map_region(const MemoryRegion& desc, std::span<const std::uint8_t> init = {});

    // Little-endian, zero-extending load of 1/2/4/8 bytes.
    std::variant<std::uint64_t, AccessViolation> load(std::uint64_t addr, unsigned size);
    // Little-endian store of the low `size` bytes of `value`.
    std::optional<AccessViolation> store(std::uint64_t addr, unsigned size, std::uint64_t value);

    // Bulk transfers used by host functions; checked as one range.
    std::optional<AccessViolation> read_bytes(std::uint64_t addr, std::span<std::uint8_t> out);
    std::optional<AccessViolation> write_bytes(std::uint64_t addr,
                                               std::span<const std::uint8_t> in);

    const RegionTable& regions() const { return table_; }
    const MemoryRegion* find_region(std::string_view label) const;
    // Host-side window into a region's backing store (tests, device harness).
    std::span<std::uint8_t> region_bytes(std::string_view label);
    std::span<const std::uint8_t> region_bytes(std::string_view label) const;

    std::uint64_t policy_checks() const { return checks_; }
    void set_trace(std::function<void(const AccessRecord&)> hook) { trace_ = std::move(hook); }

  private:
    AccessDecision checked(std::uint64_t addr, std::uint64_t size, AccessKind kind);
    std::span<std::uint8_t> backing_for(const MemoryRegion* region, std::uint64_t addr,
                                        std::uint64_t size);

    RegionTable table_;
    std::vector<std::vector<std::uint8_t>> backing_;  // parallel to table_
    std::uint64_t checks_ = 0;
    std::function<void(const AccessRecord&)> trace_;
};

}  // namespace rbpf
