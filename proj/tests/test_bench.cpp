#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "rbpf/bench.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rbpf;

TEST_CASE("checksum of 'abcde' is the classic value") {
    const std::uint8_t abcde[] = {'a', 'b', 'c', 'd', 'e'};
    CHECK(fletcher32_reference(abcde) == 0xf04fc729u);
    CHECK(oracle::fletcher32(abcde) == 0xf04fc729u);
}

TEST_CASE("edge inputs") {
    CHECK(fletcher32_reference({}) == 0);
    const std::uint8_t one[] = {0x01};
    CHECK(fletcher32_reference(one) == 0x00010001u);  // "\x01\x00" as one word
    const std::uint8_t pad[] = {0x01, 0x00};
    CHECK(fletcher32_reference(pad) == fletcher32_reference(one));  // explicit pad, same sum
    // 65535 congruences: a word of 0xffff contributes zero to both sums
    const std::uint8_t ffff[] = {0xff, 0xff};
    CHECK(fletcher32_reference(ffff) == 0);
}

TEST_CASE("per-word folding equals block-deferred folding" * doctest::description("property")) {
    std::mt19937_64 rng(0xf1e7c4e4);
    for (int trial = 0; trial < 600; ++trial) {
        // lengths around the 359-word block boundary matter most
        std::size_t length = rng() % 3 == 0 ? 700 + rng() % 80 : rng() % 2000;
        const auto data = testgen::bytes(rng, length);
        CAPTURE(length);
        REQUIRE(fletcher32_reference(data) == oracle::fletcher32(data));
    }
}

TEST_CASE("the benchmark input is deterministic") {
    const auto a = bench_input();
    const auto b = bench_input();
    CHECK(a == b);
    CHECK(a.size() == kBenchInputLength);
    CHECK(bench_input(64, 1) != bench_input(64, 2));
}

TEST_CASE("word region layout: count then padded little-endian words") {
    const std::uint8_t data[] = {0xaa, 0xbb, 0xcc};
    const auto region = pack_word_region(data);
    REQUIRE(region.size() == 8 + 4);  // two words, odd byte padded
    CHECK(region[0] == 2);            // word count, little-endian u64
    for (int i = 1; i < 8; ++i) CHECK(region[i] == 0);
    CHECK(region[8] == 0xaa);
    CHECK(region[9] == 0xbb);
    CHECK(region[10] == 0xcc);
    CHECK(region[11] == 0x00);

    CHECK(pack_word_region({}).size() == 8);
}

TEST_CASE("a short measured run matches the host checksum") {
    auto result = run_fletcher_bench(1, 32, 99);
    REQUIRE(std::holds_alternative<BenchReport>(result));
    const auto& report = std::get<BenchReport>(result);
    CHECK(report.match);
    CHECK(report.checksum == report.reference);
    CHECK(report.checksum == fletcher32_reference(bench_input(32, 99)));
    CHECK(report.iterations >= 1);
    CHECK(report.instructions > 0);
    CHECK(report.input_bytes == 32);
    CHECK(report.bytecode_bytes > 0);
    CHECK(report.elapsed.count() > 0);

    // the instruction floor is respected
    auto longer = run_fletcher_bench(50000, 32, 99);
    REQUIRE(std::holds_alternative<BenchReport>(longer));
    CHECK(std::get<BenchReport>(longer).instructions >= 50000);
}

TEST_CASE("report text carries the headline numbers") {
    auto result = run_fletcher_bench(1, 16, 7);
    REQUIRE(std::holds_alternative<BenchReport>(result));
    const auto text = std::get<BenchReport>(result).to_text();
    CHECK(text.find("checksum") != std::string::npos);
    CHECK(text.find("instructions/s") != std::string::npos);
    CHECK(text.find("matches host") != std::string::npos);
}
