#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rbpf {

// Container layout: "RBF1", u32 original length (LE), u8 window bits,
// u8 lookahead bits, then the LZSS bitstream. The stream is MSB-first; a
// 1 flag bit precedes an 8-bit literal, a 0 flag bit precedes a match of
// (distance-1) in `window_bits` bits followed by the match length minus two,
// in chunks of `lookahead_bits` bits where a maximal chunk means "more
// follows". Matches may overlap their own output.
inline constexpr std::uint8_t kCompressMagic[4] = {'R', 'B', 'F', '1'};
inline constexpr std::size_t kCompressHeaderSize = 10;
inline constexpr unsigned kMinMatch = 2;

struct CompressOptions {
    // Constrained to [4, 16] and [2, 8]; out-of-range values are clamped.
    std::uint8_t window_bits = 8;
    std::uint8_t lookahead_bits = 4;
};

struct FormatError {
    std::string message;
};

std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input,
                                   CompressOptions options = {});

std::variant<std::vector<std::uint8_t>, FormatError> decompress(
    std::span<const std::uint8_t> container);

// True when `blob` starts with the container magic.
bool is_compressed_container(std::span<const std::uint8_t> blob);

// Buffering front-end for callers that receive a script in pieces (e.g. one
// CoAP block at a time). Encoding happens in finish(), over the whole input.
class Compressor {
  public:
    explicit Compressor(CompressOptions options = {}) : options_(options) {}

    void feed(std::span<const std::uint8_t> chunk) {
        buffer_.insert(buffer_.end(), chunk.begin(), chunk.end());
    }

    std::vector<std::uint8_t> finish() { return compress(buffer_, options_); }

    std::size_t pending() const { return buffer_.size(); }

  private:
    CompressOptions options_;
    std::vector<std::uint8_t> buffer_;
};

}  // namespace rbpf
