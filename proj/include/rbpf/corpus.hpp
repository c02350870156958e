#pragma once

#include <span>
#include <string_view>

namespace rbpf::corpus {

// Example scripts shipped with the tree (see programs/), embedded as
// assembly text at build time. Assemble against default_bindings().
struct Entry {
    std::string_view name;
    std::string_view source;
};

std::span<const Entry> entries();

// Empty view when the name is unknown.
std::string_view source(std::string_view name);

}  // namespace rbpf::corpus
