#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "rbpf/compress.hpp"
#include "support/generators.hpp"

using namespace rbpf;

namespace {

std::vector<std::uint8_t> unpack_ok(std::span<const std::uint8_t> container) {
    auto result = decompress(container);
    REQUIRE(std::holds_alternative<std::vector<std::uint8_t>>(result));
    return std::get<std::vector<std::uint8_t>>(result);
}

std::string unpack_error(std::vector<std::uint8_t> container) {
    auto result = decompress(container);
    REQUIRE(std::holds_alternative<FormatError>(result));
    return std::get<FormatError>(result).message;
}

std::vector<std::uint8_t> container_with(std::uint32_t original, std::uint8_t window,
                                         std::uint8_t lookahead,
                                         std::vector<std::uint8_t> payload) {
    std::vector<std::uint8_t> out = {'R', 'B', 'F', '1'};
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(original >> (8 * i)));
    out.push_back(window);
    out.push_back(lookahead);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

}  // namespace

TEST_CASE("empty input freezes to a bare header") {
    const auto packed = compress({});
    const std::vector<std::uint8_t> expected = {'R', 'B', 'F', '1', 0, 0, 0, 0, 8, 4};
    CHECK(packed == expected);
    CHECK(unpack_ok(packed).empty());
}

TEST_CASE("worked example: aaaa") {
    // literal 'a', then a self-overlapping match (distance 1, length 3):
    //   1 01100001 | 0 00000000 0001   -> b0 80 04 after MSB-first packing
    const std::vector<std::uint8_t> input = {'a', 'a', 'a', 'a'};
    const auto packed = compress(input);
    const std::vector<std::uint8_t> expected = {'R', 'B', 'F', '1', 4,    0,   0,
                                                0,   8,   4,   0xb0, 0x80, 0x04};
    CHECK(packed == expected);
    CHECK(unpack_ok(packed) == input);
}

TEST_CASE("short inputs fall back to literals") {
    const std::vector<std::uint8_t> input = {'x'};
    const auto packed = compress(input);
    REQUIRE(packed.size() == kCompressHeaderSize + 2);  // 9 bits -> 2 bytes
    CHECK(unpack_ok(packed) == input);
}

TEST_CASE("options are clamped into the supported window") {
    const std::vector<std::uint8_t> input = {1, 2, 3};
    auto wide = compress(input, {.window_bits = 99, .lookahead_bits = 99});
    CHECK(wide[8] == 16);
    CHECK(wide[9] == 8);
    auto narrow = compress(input, {.window_bits = 1, .lookahead_bits = 1});
    CHECK(narrow[8] == 4);
    CHECK(narrow[9] == 2);
    CHECK(unpack_ok(wide) == input);
    CHECK(unpack_ok(narrow) == input);
}

TEST_CASE("bytecode-shaped input shrinks hard") {
    // 64 exit instructions: 512 bytes, almost all zero
    std::vector<std::uint8_t> input(512, 0);
    for (std::size_t i = 0; i < input.size(); i += 8) input[i] = 0x95;
    const auto packed = compress(input);
    CHECK(packed.size() < input.size() / 10);
    CHECK(unpack_ok(packed) == input);
}

TEST_CASE("long runs use the length extension ladder") {
    // lookahead of 2 bits caps each chunk at 3, so a 5000-byte run needs
    // many continuation chunks
    std::vector<std::uint8_t> input(5000, 0xee);
    const auto packed = compress(input, {.window_bits = 8, .lookahead_bits = 2});
    CHECK(packed.size() < 600);
    CHECK(unpack_ok(packed) == input);
}

TEST_CASE("round-trips are lossless" * doctest::description("property")) {
    std::mt19937_64 rng(0xc0de);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t length = rng() % 2048;
        const std::vector<std::uint8_t> input = (trial % 2 == 0)
                                                    ? testgen::bytes(rng, length)
                                                    : testgen::repetitive_bytes(rng, length);
        CompressOptions options;
        options.window_bits = static_cast<std::uint8_t>(4 + rng() % 13);
        options.lookahead_bits = static_cast<std::uint8_t>(2 + rng() % 7);
        const auto packed = compress(input, options);
        CAPTURE(trial);
        CAPTURE(length);
        REQUIRE(unpack_ok(packed) == input);
        REQUIRE(is_compressed_container(packed));
    }
}

TEST_CASE("container sniffing") {
    CHECK(is_compressed_container(compress({})));
    const std::vector<std::uint8_t> exit_slot = {0x95, 0, 0, 0, 0, 0, 0, 0};
    CHECK_FALSE(is_compressed_container(exit_slot));
    CHECK_FALSE(is_compressed_container({}));
    const std::vector<std::uint8_t> partial = {'R', 'B'};
    CHECK_FALSE(is_compressed_container(partial));
}

TEST_CASE("malformed containers are rejected with a reason") {
    CHECK(unpack_error({'R', 'B', 'F', '1', 0}).find("header") != std::string::npos);

    auto bad_magic = compress({});
    bad_magic[3] = '2';
    CHECK(unpack_error(bad_magic).find("magic") != std::string::npos);

    CHECK(unpack_error(container_with(1, 3, 4, {0x00})).find("parameters") != std::string::npos);
    CHECK(unpack_error(container_with(1, 17, 4, {0x00})).find("parameters") != std::string::npos);
    CHECK(unpack_error(container_with(1, 8, 1, {0x00})).find("parameters") != std::string::npos);
    CHECK(unpack_error(container_with(1, 8, 9, {0x00})).find("parameters") != std::string::npos);

    // declared length but no bits to decode
    CHECK(unpack_error(container_with(4, 8, 4, {})).find("end") != std::string::npos);
    // a healthy container truncated mid-stream
    std::vector<std::uint8_t> input(100, 7);
    auto packed = compress(input);
    packed.resize(packed.size() - 1);
    auto truncated = decompress(packed);
    CHECK(std::holds_alternative<FormatError>(truncated));

    // match flag first: any distance points before the start of output
    CHECK(unpack_error(container_with(4, 8, 2, {0x00, 0x00})).find("start") !=
          std::string::npos);
    // literal 'a' then a 3-byte match against a 3-byte declared length
    CHECK(unpack_error(container_with(3, 8, 2, {0xb0, 0x80, 0x10})).find("length") !=
          std::string::npos);
}

TEST_CASE("chunked feeding matches one-shot compression") {
    std::mt19937_64 rng(0xfeed);
    const auto input = testgen::repetitive_bytes(rng, 3000);
    Compressor chunked({.window_bits = 10, .lookahead_bits = 4});
    std::size_t at = 0;
    while (at < input.size()) {
        const std::size_t n = std::min<std::size_t>(1 + rng() % 257, input.size() - at);
        chunked.feed(std::span(input).subspan(at, n));
        at += n;
        CHECK(chunked.pending() == at);
    }
    CHECK(chunked.finish() ==
          compress(input, {.window_bits = 10, .lookahead_bits = 4}));
}
