#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "rbpf/assembler.hpp"
#include "rbpf/compress.hpp"
#include "rbpf/corpus.hpp"
#include "rbpf/devicesim.hpp"

using namespace rbpf;

namespace {

std::vector<std::uint8_t> build(const std::string& source) {
    const BindingTable table = default_bindings();
    auto result = assemble(source, &table);
    REQUIRE(std::holds_alternative<std::vector<std::uint8_t>>(result));
    return std::get<std::vector<std::uint8_t>>(result);
}

std::uint32_t install_ok(Device& device, EventType event, const std::string& selector,
                         std::span<const std::uint8_t> blob) {
    auto result = device.install(event, selector, blob);
    if (auto* err = std::get_if<InstallError>(&result)) FAIL(err->message);
    return std::get<std::uint32_t>(result);
}

const std::string kSensorSource{corpus::source("sensor_response")};

}  // namespace

TEST_CASE("the sensor handler answers 2.05 with formatted text") {
    Device device;
    device.set_sensor(1, "temp", {1234, -2});
    install_ok(device, EventType::CoapRequest, "/temp", build(kSensorSource));

    auto reply = device.trigger_coap("/temp");
    CHECK(reply.ok);
    CHECK(reply.code == kCoapCodeContent);
    CHECK(std::string(reply.payload.begin(), reply.payload.end()) == "12.34");
    CHECK(reply.r0 == 8);  // payload offset 3 + five characters

    // deterministic across repeated triggers
    for (int i = 0; i < 5; ++i) {
        auto again = device.trigger_coap("/temp");
        CHECK(again.code == reply.code);
        CHECK(again.payload == reply.payload);
        CHECK(again.executed == reply.executed);
    }
}

TEST_CASE("missing handlers answer 4.04") {
    Device device;
    auto reply = device.trigger_coap("/nothing");
    CHECK_FALSE(reply.ok);
    CHECK(reply.code == kCoapCodeNotFound);
    CHECK(reply.payload.empty());
}

TEST_CASE("failing handlers answer 5.00") {
    Device device;  // no sensors attached
    install_ok(device, EventType::CoapRequest, "/temp", build(kSensorSource));
    auto reply = device.trigger_coap("/temp");
    CHECK_FALSE(reply.ok);
    CHECK(reply.code == kCoapCodeInternalError);
    CHECK(reply.r0 < 0);
    CHECK(reply.status == ExecStatus::Ok);  // the script ran; it reported failure

    // a faulting script also maps to 5.00, with the fault spelled out
    Device crasher;
    install_ok(crasher, EventType::CoapRequest, "/bad",
               build("ldxdw r0, [r0+0]\nexit"));  // null dereference
    auto fault = crasher.trigger_coap("/bad");
    CHECK_FALSE(fault.ok);
    CHECK(fault.code == kCoapCodeInternalError);
    CHECK(fault.status == ExecStatus::Fault);
    CHECK_FALSE(fault.detail.empty());

    // an oversized payload claim cannot leak past the buffer
    Device liar;
    install_ok(liar, EventType::CoapRequest, "/big",
               build("mov r0, 4096\nexit"));
    auto big = liar.trigger_coap("/big");
    CHECK_FALSE(big.ok);
    CHECK(big.code == kCoapCodeInternalError);
}

TEST_CASE("handlers read the request context to find the buffer") {
    // the context block is [pdu address, capacity]; echo the capacity back
    Device device;
    install_ok(device, EventType::CoapRequest, "/cap",
               build("ldxdw r6, [r1+0]\n"    // pdu address
                     "ldxdw r7, [r1+8]\n"    // capacity
                     "mov r1, r6\n"
                     "mov r2, r7\n"
                     "mov r3, 0x45\n"
                     "call gcoap_resp_init\n"
                     "call coap_add_format\n"
                     "call coap_opt_finish\n"
                     "mov r0, r7\n"          // claim the whole capacity
                     "exit\n"));
    auto reply = device.trigger_coap("/cap");
    CHECK(reply.ok);
    CHECK(reply.code == kCoapCodeContent);
    CHECK(reply.payload.size() == kCoapPduCapacity - kCoapHeaderSize);
}

TEST_CASE("compressed blobs install transparently") {
    Device device;
    device.set_sensor(1, "temp", {-55, -1});
    const auto raw = build(kSensorSource);
    const auto packed = compress(raw);
    REQUIRE(packed.size() < raw.size());
    install_ok(device, EventType::CoapRequest, "/temp", packed);

    const auto scripts = device.installed();
    REQUIRE(scripts.size() == 1);
    CHECK(scripts[0].was_compressed);
    CHECK(scripts[0].blob_bytes == packed.size());
    CHECK(scripts[0].bytecode_bytes == raw.size());

    auto reply = device.trigger_coap("/temp");
    CHECK(reply.ok);
    CHECK(std::string(reply.payload.begin(), reply.payload.end()) == "-5.5");
}

TEST_CASE("broken blobs are refused at install time") {
    Device device;
    // verifier rejection: no exit
    const std::vector<std::uint8_t> no_exit = {0xb7, 0, 0, 0, 0, 0, 0, 0};
    auto rejected = device.install(EventType::CoapRequest, "/x", no_exit);
    REQUIRE(std::holds_alternative<InstallError>(rejected));
    CHECK(std::get<InstallError>(rejected).message.find("missing-exit") != std::string::npos);

    // corrupt container: bad stream
    auto packed = compress(build("mov r0, 1\nexit"));
    packed.resize(packed.size() - 1);
    auto truncated = device.install(EventType::CoapRequest, "/y", packed);
    CHECK(std::holds_alternative<InstallError>(truncated));

    CHECK(device.installed().empty());
}

TEST_CASE("script ids are stable and never reused") {
    Device device;
    const auto blob = build("mov r0, 1\nexit");
    const auto a = install_ok(device, EventType::Timer, "a", blob);
    const auto b = install_ok(device, EventType::Timer, "b", blob);
    CHECK(a == 1);
    CHECK(b == 2);
    CHECK(device.uninstall(a));
    CHECK_FALSE(device.uninstall(a));  // already gone
    const auto c = install_ok(device, EventType::Timer, "c", blob);
    CHECK(c == 3);  // the freed id is not recycled
    const auto scripts = device.installed();
    REQUIRE(scripts.size() == 2);
    CHECK(scripts[0].id == 2);
    CHECK(scripts[1].id == 3);
}

TEST_CASE("timer scripts keep state between firings") {
    Device device;
    const auto counter = build(std::string(corpus::source("counter")));
    install_ok(device, EventType::Timer, "tick", counter);
    for (std::int64_t expect = 1; expect <= 4; ++expect) {
        auto result = device.trigger_timer("tick");
        CHECK(result.ok);
        CHECK(result.r0 == expect);
    }
    // a second device starts fresh
    Device other;
    install_ok(other, EventType::Timer, "tick", counter);
    CHECK(other.trigger_timer("tick").r0 == 1);
}

TEST_CASE("uninstalled timers report failure") {
    Device device;
    auto result = device.trigger_timer("tick");
    CHECK_FALSE(result.ok);
    CHECK_FALSE(result.detail.empty());
}

TEST_CASE("each script sees its own local namespace") {
    Device device;
    const auto writer_a = build("mov r1, 9\nmov r2, 100\ncall store_local\nmov r0, 0\nexit");
    const auto reader = build(
        "mov r1, 9\n"
        "mov r2, r10\n"
        "sub r2, 8\n"
        "call fetch_local\n"
        "exit\n");  // r0 = presence flag
    install_ok(device, EventType::Timer, "w", writer_a);
    install_ok(device, EventType::Timer, "r", reader);
    CHECK(device.trigger_timer("w").ok);
    // the reader is a different script id: the writer's key is invisible
    CHECK(device.trigger_timer("r").r0 == 0);
}

TEST_CASE("packet hooks see length-prefixed packet bytes") {
    Device device;
    // sum the first and last payload byte
    install_ok(device, EventType::PacketHook, "sniff",
               build("ldxdw r2, [r1+0]\n"      // length
                     "ldxb r3, [r1+8]\n"       // first byte
                     "mov r4, r1\n"
                     "add r4, r2\n"
                     "ldxb r5, [r4+7]\n"       // last byte
                     "mov r0, r3\n"
                     "add r0, r5\n"
                     "exit\n"));
    const std::vector<std::uint8_t> packet = {0x10, 0x22, 0x33, 0x40};
    auto result = device.trigger_packet("sniff", packet);
    CHECK(result.ok);
    CHECK(result.r0 == 0x50);

    // reading past the packet faults instead of leaking device memory
    Device strict;
    install_ok(strict, EventType::PacketHook, "sniff",
               build("ldxb r0, [r1+100]\nexit"));
    auto oob = strict.trigger_packet("sniff", packet);
    CHECK_FALSE(oob.ok);
    CHECK(oob.status == ExecStatus::Fault);
}

TEST_CASE("selectors dispatch independently per event type") {
    Device device;
    device.set_sensor(1, "temp", {21, 0});
    install_ok(device, EventType::CoapRequest, "/a", build("mov r0, -1\nexit"));
    install_ok(device, EventType::Timer, "/a", build("mov r0, 7\nexit"));
    // the coap handler under /a fails; the timer under the same selector works
    CHECK(device.trigger_coap("/a").code == kCoapCodeInternalError);
    CHECK(device.trigger_timer("/a").r0 == 7);
    // replacing a selector works by uninstall + reinstall
    const auto scripts = device.installed();
    CHECK(scripts.size() == 2);
}

TEST_CASE("event names round-trip") {
    EventType type;
    CHECK(event_type_from_string("coap", type));
    CHECK(type == EventType::CoapRequest);
    CHECK(event_type_from_string("timer", type));
    CHECK(type == EventType::Timer);
    CHECK(event_type_from_string("packet", type));
    CHECK(type == EventType::PacketHook);
    CHECK_FALSE(event_type_from_string("bogus", type));
    CHECK(std::string(to_string(EventType::CoapRequest)) == "coap");
    CHECK(std::string(to_string(EventType::Timer)) == "timer");
    CHECK(std::string(to_string(EventType::PacketHook)) == "packet");
}
