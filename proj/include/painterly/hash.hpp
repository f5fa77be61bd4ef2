#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace painterly {

/// FNV-1a over explicitly little-endian field encodings.
class StateHasher {
public:
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 0x00000100000001b3ull;
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            const auto b = static_cast<std::uint8_t>(v >> (8 * i));
            bytes(&b, 1);
        }
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(std::string_view s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }

    std::uint64_t value() const noexcept { return h_; }
    std::string hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out(16, '0');
        for (int i = 0; i < 16; ++i) out[15 - i] = digits[(h_ >> (4 * i)) & 0xf];
        return out;
    }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace painterly
