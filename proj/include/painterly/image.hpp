#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace painterly {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;

    friend constexpr bool operator==(Rgb, Rgb) noexcept = default;
};

/// Row-major RGB8.
struct Image {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(std::uint32_t w, std::uint32_t h, Rgb fill = {});

    Rgb at(std::uint32_t x, std::uint32_t y) const {
        const auto* p = &pixels[(std::size_t(y) * width + x) * 3];
        return {p[0], p[1], p[2]};
    }
    void set(std::uint32_t x, std::uint32_t y, Rgb c) {
        auto* p = &pixels[(std::size_t(y) * width + x) * 3];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }

    friend bool operator==(const Image&, const Image&) = default;
};

Image flip_horizontal(const Image& img);

enum class ImageFormat { Ppm, Png };

/// PPM is binary P6 with maxval 255. Throws Error{IoError}.
void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format);
std::vector<std::uint8_t> encode_ppm(const Image& img);

/// Reads P6 (maxval 255). Throws Error{MissingFile | BadHeader | TruncatedFile}.
Image read_ppm(const std::filesystem::path& path);

}  // namespace painterly
