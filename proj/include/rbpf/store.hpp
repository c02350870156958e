#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rbpf {

// Small persistent key-value store shared between script runs. Scripts get a
// private namespace keyed by their id plus one namespace shared by everyone.
// Capacity is bounded per namespace so a misbehaving script cannot grow the
// host heap without limit; overwriting an existing key never counts against
// the limit.
class KeyValueStore {
  public:
    static constexpr std::size_t kDefaultCapacity = 64;

    explicit KeyValueStore(std::size_t capacity_per_namespace = kDefaultCapacity)
        : capacity_(capacity_per_namespace) {}

    // Return false when the namespace is full and `key` is new.
    bool store_global(std::uint32_t key, std::int64_t value);
    bool store_local(std::uint32_t script_id, std::uint32_t key, std::int64_t value);

    std::optional<std::int64_t> fetch_global(std::uint32_t key) const;
    std::optional<std::int64_t> fetch_local(std::uint32_t script_id, std::uint32_t key) const;

    std::size_t global_size() const;
    std::size_t local_size(std::uint32_t script_id) const;
    std::size_t capacity() const { return capacity_; }

    void erase_local(std::uint32_t script_id);
    void clear();

    // Sorted copies for diagnostics and the CLI `store` command.
    std::vector<std::pair<std::uint32_t, std::int64_t>> global_entries() const;
    std::vector<std::pair<std::uint32_t, std::int64_t>> local_entries(std::uint32_t script_id) const;

  private:
    using Namespace = std::unordered_map<std::uint32_t, std::int64_t>;

    bool store_in(Namespace& ns, std::uint32_t key, std::int64_t value);

    std::size_t capacity_;
    mutable std::mutex mutex_;
    Namespace global_;
    std::unordered_map<std::uint32_t, Namespace> locals_;
};

}  // namespace rbpf
