#include "rbpf/compress.hpp"

#include <algorithm>

namespace rbpf {

namespace {

std::uint8_t clamp_u8(std::uint8_t v, std::uint8_t lo, std::uint8_t hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

CompressOptions clamp_options(CompressOptions options) {
    options.window_bits = clamp_u8(options.window_bits, 4, 16);
    options.lookahead_bits = clamp_u8(options.lookahead_bits, 2, 8);
    return options;
}

class BitWriter {
  public:
    void put(std::uint32_t value, unsigned bits) {
        for (unsigned i = bits; i-- > 0;) {
            pending_ = static_cast<std::uint8_t>((pending_ << 1) | ((value >> i) & 1));
            if (++filled_ == 8) {
                out_.push_back(pending_);
                pending_ = 0;
                filled_ = 0;
            }
        }
    }

    std::vector<std::uint8_t> finish() {
        if (filled_ > 0) {
            out_.push_back(static_cast<std::uint8_t>(pending_ << (8 - filled_)));
            pending_ = 0;
            filled_ = 0;
        }
        return std::move(out_);
    }

  private:
    std::vector<std::uint8_t> out_;
    std::uint8_t pending_ = 0;
    unsigned filled_ = 0;
};

class BitReader {
  public:
    explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

    // Returns false when the stream is exhausted.
    bool get(unsigned bits, std::uint32_t& value) {
        value = 0;
        for (unsigned i = 0; i < bits; ++i) {
            if (byte_ >= data_.size()) return false;
            value = (value << 1) | ((data_[byte_] >> (7 - bit_)) & 1);
            if (++bit_ == 8) {
                bit_ = 0;
                ++byte_;
            }
        }
        return true;
    }

  private:
    std::span<const std::uint8_t> data_;
    std::size_t byte_ = 0;
    unsigned bit_ = 0;
};

// Bits needed to encode a match of `length`, for the cost comparison against
// 9 bits per literal.
unsigned match_cost_bits(unsigned length, const CompressOptions& options) {
    const unsigned max_chunk = (1u << options.lookahead_bits) - 1;
    const unsigned chunks = (length - kMinMatch) / max_chunk + 1;
    return 1 + options.window_bits + chunks * options.lookahead_bits;
}

struct Match {
    unsigned length = 0;
    unsigned distance = 0;
};

Match longest_match(std::span<const std::uint8_t> input, std::size_t pos, unsigned window) {
    Match best;
    const std::size_t start = pos > window ? pos - window : 0;
    const std::size_t remaining = input.size() - pos;
    for (std::size_t candidate = start; candidate < pos; ++candidate) {
        unsigned length = 0;
        // Comparing against already-emitted text; self-overlap is fine
        // because the decoder copies byte by byte.
        while (length < remaining && input[candidate + length] == input[pos + length]) {
            ++length;
        }
        if (length > best.length) {
            best.length = length;
            best.distance = static_cast<unsigned>(pos - candidate);
            if (length == remaining) break;  // cannot do better
        }
    }
    return best;
}

}  // namespace

bool is_compressed_container(std::span<const std::uint8_t> blob) {
    return blob.size() >= 4 && std::equal(std::begin(kCompressMagic), std::end(kCompressMagic),
                                          blob.begin());
}

std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input, CompressOptions options) {
    options = clamp_options(options);
    const unsigned window = 1u << options.window_bits;
    const unsigned max_chunk = (1u << options.lookahead_bits) - 1;

    BitWriter writer;
    std::size_t pos = 0;
    while (pos < input.size()) {
        const Match match = longest_match(input, pos, window);
        const bool worthwhile = match.length >= kMinMatch &&
                                match_cost_bits(match.length, options) < 9u * match.length;
        if (!worthwhile) {
            writer.put(1, 1);
            writer.put(input[pos], 8);
            ++pos;
            continue;
        }
        writer.put(0, 1);
        writer.put(match.distance - 1, options.window_bits);
        // Length ladder: every maximal chunk announces a follow-up chunk.
        unsigned rest = match.length - kMinMatch;
        while (rest >= max_chunk) {
            writer.put(max_chunk, options.lookahead_bits);
            rest -= max_chunk;
        }
        writer.put(rest, options.lookahead_bits);
        pos += match.length;
    }

    const std::vector<std::uint8_t> payload = writer.finish();
    const auto original = static_cast<std::uint32_t>(input.size());
    std::vector<std::uint8_t> out(kCompressHeaderSize + payload.size());
    std::copy(std::begin(kCompressMagic), std::end(kCompressMagic), out.begin());
    out[4] = static_cast<std::uint8_t>(original & 0xff);
    out[5] = static_cast<std::uint8_t>((original >> 8) & 0xff);
    out[6] = static_cast<std::uint8_t>((original >> 16) & 0xff);
    out[7] = static_cast<std::uint8_t>((original >> 24) & 0xff);
    out[8] = options.window_bits;
    out[9] = options.lookahead_bits;
    std::copy(payload.begin(), payload.end(), out.begin() + kCompressHeaderSize);
    return out;
}

std::variant<std::vector<std::uint8_t>, FormatError> decompress(
    std::span<const std::uint8_t> container) {
    if (container.size() < kCompressHeaderSize) {
        return FormatError{"container shorter than its header"};
    }
    if (!is_compressed_container(container)) {
        return FormatError{"bad magic, expected RBF1"};
    }
    const std::uint32_t original = static_cast<std::uint32_t>(container[4]) |
                                   (static_cast<std::uint32_t>(container[5]) << 8) |
                                   (static_cast<std::uint32_t>(container[6]) << 16) |
                                   (static_cast<std::uint32_t>(container[7]) << 24);
    const std::uint8_t window_bits = container[8];
    const std::uint8_t lookahead_bits = container[9];
    if (window_bits < 4 || window_bits > 16 || lookahead_bits < 2 || lookahead_bits > 8) {
        return FormatError{"header parameters out of range"};
    }
    const std::uint32_t max_chunk = (1u << lookahead_bits) - 1;

    BitReader reader(container.subspan(kCompressHeaderSize));
    std::vector<std::uint8_t> out;
    out.reserve(original);
    while (out.size() < original) {
        std::uint32_t flag = 0;
        if (!reader.get(1, flag)) return FormatError{"compressed stream ended early"};
        if (flag == 1) {
            std::uint32_t literal = 0;
            if (!reader.get(8, literal)) return FormatError{"compressed stream ended early"};
            out.push_back(static_cast<std::uint8_t>(literal));
            continue;
        }
        std::uint32_t distance_code = 0;
        if (!reader.get(window_bits, distance_code)) {
            return FormatError{"compressed stream ended early"};
        }
        const std::uint32_t distance = distance_code + 1;
        if (distance > out.size()) {
            return FormatError{"match distance reaches before the start of the output"};
        }
        std::uint64_t length = kMinMatch;
        std::uint32_t chunk = 0;
        do {
            if (!reader.get(lookahead_bits, chunk)) {
                return FormatError{"compressed stream ended early"};
            }
            length += chunk;
        } while (chunk == max_chunk);
        if (out.size() + length > original) {
            return FormatError{"match runs past the declared length"};
        }
        for (std::uint64_t i = 0; i < length; ++i) {
            out.push_back(out[out.size() - distance]);
        }
    }
    return out;
}

}  // namespace rbpf
