#include "rbpf/sandbox.hpp"

namespace rbpf {

const char* to_string(AccessKind kind) {
    return kind == AccessKind::Read ? "read" : "write";
}

const char* to_string(DenyReason reason) {
    switch (reason) {
        case DenyReason::OutOfRegion: return "out of region";
        case DenyReason::WriteToReadOnly: return "write to read-only region";
        case DenyReason::ReadDenied: return "read from write-only region";
        case DenyReason::StraddlesRegions: return "access straddles regions";
    }
    return "?";
}

namespace {

bool permits(const MemoryRegion& region, AccessKind kind) {
    return kind == AccessKind::Read ? has_flag(region.flags, AccessFlags::Read)
                                    : has_flag(region.flags, AccessFlags::Write);
}

}  // namespace

AccessDecision check_access(const RegionTable& regions, std::uint64_t addr, std::uint64_t size,
                            AccessKind kind) {
    if (size == 0) return {false, DenyReason::OutOfRegion, nullptr};

    const MemoryRegion* covering_wrong_perm = nullptr;
    for (const auto& region : regions) {
        if (!region.contains(addr, size)) continue;
        if (permits(region, kind)) return {true, DenyReason::OutOfRegion, &region};
        covering_wrong_perm = &region;
    }
    if (covering_wrong_perm != nullptr) {
        const DenyReason reason =
            kind == AccessKind::Write ? DenyReason::WriteToReadOnly : DenyReason::ReadDenied;
        return {false, reason, covering_wrong_perm};
    }

    // No single region covers the range. Distinguish "unmapped byte" from
    // "spans several mapped regions" for the diagnostics.
    for (std::uint64_t i = 0; i < size; ++i) {
        const std::uint64_t byte = addr + i;  // wraparound leaves the byte unmapped anyway
        bool mapped = false;
        for (const auto& region : regions) {
            if (region.contains_byte(byte)) {
                mapped = true;
                break;
            }
        }
        if (!mapped) return {false, DenyReason::OutOfRegion, nullptr};
    }
    return {false, DenyReason::StraddlesRegions, nullptr};
}

}  // namespace rbpf
