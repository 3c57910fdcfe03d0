#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace wz {

// Packs a 0/1 bit vector into bytes, MSB-first, zero-padding the final byte.
inline std::vector<uint8_t> pack_bits(std::span<const uint8_t> bits) {
    std::vector<uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i >> 3] |= static_cast<uint8_t>(0x80u >> (i & 7));
    return bytes;
}

// Inverse of pack_bits given the original bit count.
inline std::vector<uint8_t> unpack_bits(std::span<const uint8_t> bytes, size_t bit_count) {
    if (bytes.size() * 8 < bit_count) throw std::out_of_range("packed buffer too short");
    std::vector<uint8_t> bits(bit_count);
    for (size_t i = 0; i < bit_count; ++i) bits[i] = (bytes[i >> 3] >> (7 - (i & 7))) & 1;
    return bits;
}

// MSB-first bit writer with unsigned/signed exp-Golomb codes.
class BitWriter {
public:
    void put_bit(int b) {
        if (fill_ == 0) bytes_.push_back(0);
        if (b) bytes_.back() |= static_cast<uint8_t>(0x80u >> fill_);
        fill_ = (fill_ + 1) & 7;
    }

    void put_bits(uint32_t v, int count) {
        for (int i = count - 1; i >= 0; --i) put_bit((v >> i) & 1);
    }

    void put_ue(uint32_t v) {
        uint64_t n = static_cast<uint64_t>(v) + 1;
        int width = 0;
        while ((n >> width) != 0) ++width;
        for (int i = 0; i < width - 1; ++i) put_bit(0);
        for (int i = width - 1; i >= 0; --i) put_bit((n >> i) & 1);
    }

    void put_se(int32_t v) {
        put_ue(v > 0 ? static_cast<uint32_t>(2 * int64_t(v) - 1)
                     : static_cast<uint32_t>(-2 * int64_t(v)));
    }

    std::vector<uint8_t> take() { return std::move(bytes_); }
    size_t bit_count() const { return bytes_.size() * 8 - (fill_ ? 8 - fill_ : 0); }

private:
    std::vector<uint8_t> bytes_;
    int fill_ = 0;
};

// MSB-first bit reader over a byte span. Reading past the end throws
// std::out_of_range, which callers translate into their own error category.
class BitReader {
public:
    explicit BitReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    int get_bit() {
        if (pos_ >= bytes_.size() * 8) throw std::out_of_range("bit reader exhausted");
        int b = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
        ++pos_;
        return b;
    }

    uint32_t get_ue() {
        int zeros = 0;
        while (get_bit() == 0)
            if (++zeros > 31) throw std::out_of_range("exp-Golomb prefix too long");
        uint64_t n = 1;
        for (int i = 0; i < zeros; ++i) n = (n << 1) | static_cast<unsigned>(get_bit());
        return static_cast<uint32_t>(n - 1);
    }

    int32_t get_se() {
        uint32_t u = get_ue();
        return (u & 1) ? static_cast<int32_t>((u + 1) / 2) : -static_cast<int32_t>(u / 2);
    }

    size_t bits_left() const { return bytes_.size() * 8 - pos_; }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
};

}  // namespace wz
