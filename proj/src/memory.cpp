#include "rbpf/memory.hpp"

#include <algorithm>
#include <cstring>

namespace rbpf {

namespace {

bool ranges_overlap(const MemoryRegion& a, const MemoryRegion& b) {
    // Both regions are known non-empty and non-wrapping by map_region.
    return a.base < b.base + b.length && b.base < a.base + a.length;
}

}  // namespace

bool GuestMemory::map_region(const MemoryRegion& desc, std::span<const std::uint8_t> init) {
    if (desc.length == 0 || init.size() > desc.length) return false;
    if (desc.base + desc.length < desc.base) return false;  // wraps the address space
    for (const auto& existing : table_) {
        if (ranges_overlap(existing, desc)) return false;
    }
    std::vector<std::uint8_t> data(desc.length, 0);
    std::copy(init.begin(), init.end(), data.begin());
    table_.push_back(desc);
    backing_.push_back(std::move(data));
    return true;
}

AccessDecision GuestMemory::checked(std::uint64_t addr, std::uint64_t size, AccessKind kind) {
    ++checks_;
    AccessDecision decision = check_access(table_, addr, size, kind);
    if (trace_) trace_(AccessRecord{addr, size, kind, decision.allowed});
    return decision;
}

std::span<std::uint8_t> GuestMemory::backing_for(const MemoryRegion* region, std::uint64_t addr,
                                                 std::uint64_t size) {
    const std::size_t index = static_cast<std::size_t>(region - table_.data());
    return std::span<std::uint8_t>(backing_[index]).subspan(addr - region->base, size);
}

std::variant<std::uint64_t, AccessViolation> GuestMemory::load(std::uint64_t addr, unsigned size) {
    AccessDecision decision = checked(addr, size, AccessKind::Read);
    if (!decision.allowed) return AccessViolation{addr, size, AccessKind::Read, decision.reason};
    const auto bytes = backing_for(decision.region, addr, size);
    std::uint64_t value = 0;
    for (unsigned i = 0; i < size; ++i) {
        value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return value;
}

std::optional<AccessViolation> GuestMemory::store(std::uint64_t addr, unsigned size,
                                                  std::uint64_t value) {
    AccessDecision decision = checked(addr, size, AccessKind::Write);
    if (!decision.allowed) return AccessViolation{addr, size, AccessKind::Write, decision.reason};
    auto bytes = backing_for(decision.region, addr, size);
    for (unsigned i = 0; i < size; ++i) {
        bytes[i] = static_cast<std::uint8_t>(value >> (8 * i));
    }
    return std::nullopt;
}

std::optional<AccessViolation> GuestMemory::read_bytes(std::uint64_t addr,
                                                       std::span<std::uint8_t> out) {
    AccessDecision decision = checked(addr, out.size(), AccessKind::Read);
    if (!decision.allowed) {
        return AccessViolation{addr, out.size(), AccessKind::Read, decision.reason};
    }
    const auto bytes = backing_for(decision.region, addr, out.size());
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return std::nullopt;
}

std::optional<AccessViolation> GuestMemory::write_bytes(std::uint64_t addr,
                                                        std::span<const std::uint8_t> in) {
    AccessDecision decision = checked(addr, in.size(), AccessKind::Write);
    if (!decision.allowed) {
        return AccessViolation{addr, in.size(), AccessKind::Write, decision.reason};
    }
    auto bytes = backing_for(decision.region, addr, in.size());
    std::copy(in.begin(), in.end(), bytes.begin());
    return std::nullopt;
}

const MemoryRegion* GuestMemory::find_region(std::string_view label) const {
    for (const auto& region : table_) {
        if (region.label == label) return &region;
    }
    return nullptr;
}

std::span<std::uint8_t> GuestMemory::region_bytes(std::string_view label) {
    for (std::size_t i = 0; i < table_.size(); ++i) {
        if (table_[i].label == label) return backing_[i];
    }
    return {};
}

std::span<const std::uint8_t> GuestMemory::region_bytes(std::string_view label) const {
    for (std::size_t i = 0; i < table_.size(); ++i) {
        if (table_[i].label == label) return backing_[i];
    }
    return {};
}

}  // namespace rbpf
