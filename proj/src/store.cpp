#include "rbpf/store.hpp"

#include <algorithm>

namespace rbpf {

bool KeyValueStore::store_in(Namespace& ns, std::uint32_t key, std::int64_t value) {
    auto it = ns.find(key);
    if (it != ns.end()) {
        it->second = value;
        return true;
    }
    if (ns.size() >= capacity_) return false;
    ns.emplace(key, value);
    return true;
}

bool KeyValueStore::store_global(std::uint32_t key, std::int64_t value) {
    std::lock_guard lock(mutex_);
    return store_in(global_, key, value);
}

bool KeyValueStore::store_local(std::uint32_t script_id, std::uint32_t key, std::int64_t value) {
    std::lock_guard lock(mutex_);
    return store_in(locals_[script_id], key, value);
}

std::optional<std::int64_t> KeyValueStore::fetch_global(std::uint32_t key) const {
    std::lock_guard lock(mutex_);
    auto it = global_.find(key);
    if (it == global_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::int64_t> KeyValueStore::fetch_local(std::uint32_t script_id,
                                                       std::uint32_t key) const {
    std::lock_guard lock(mutex_);
    auto ns = locals_.find(script_id);
    if (ns == locals_.end()) return std::nullopt;
    auto it = ns->second.find(key);
    if (it == ns->second.end()) return std::nullopt;
    return it->second;
}

std::size_t KeyValueStore::global_size() const {
    std::lock_guard lock(mutex_);
    return global_.size();
}

std::size_t KeyValueStore::local_size(std::uint32_t script_id) const {
    std::lock_guard lock(mutex_);
    auto ns = locals_.find(script_id);
    return ns == locals_.end() ? 0 : ns->second.size();
}

void KeyValueStore::erase_local(std::uint32_t script_id) {
    std::lock_guard lock(mutex_);
    locals_.erase(script_id);
}

void KeyValueStore::clear() {
    std::lock_guard lock(mutex_);
    global_.clear();
    locals_.clear();
}

namespace {

std::vector<std::pair<std::uint32_t, std::int64_t>> sorted_entries(
    const std::unordered_map<std::uint32_t, std::int64_t>& ns) {
    std::vector<std::pair<std::uint32_t, std::int64_t>> out(ns.begin(), ns.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<std::pair<std::uint32_t, std::int64_t>> KeyValueStore::global_entries() const {
    std::lock_guard lock(mutex_);
    return sorted_entries(global_);
}

std::vector<std::pair<std::uint32_t, std::int64_t>> KeyValueStore::local_entries(
    std::uint32_t script_id) const {
    std::lock_guard lock(mutex_);
    auto ns = locals_.find(script_id);
    if (ns == locals_.end()) return {};
    return sorted_entries(ns->second);
}

}  // namespace rbpf
