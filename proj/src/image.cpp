#include "painterly/image.hpp"

#include "painterly/error.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

namespace painterly {

Image::Image(std::uint32_t w, std::uint32_t h, Rgb fill) : width(w), height(h), pixels(std::size_t(w) * h * 3) {
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
        pixels[i] = fill.r;
        pixels[i + 1] = fill.g;
        pixels[i + 2] = fill.b;
    }
}

Image flip_horizontal(const Image& img) {
    Image out = img;
    for (std::uint32_t y = 0; y < img.height; ++y)
        for (std::uint32_t x = 0; x < img.width; ++x) out.set(img.width - 1 - x, y, img.at(x, y));
    return out;
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
    const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

namespace {

void write_png(const Image& img, const std::filesystem::path& path) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!file) throw Error(ErrorCode::IoError, "cannot open " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorCode::IoError, "libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::IoError, "libpng failed writing " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::uint32_t y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(&img.pixels[std::size_t(y) * img.width * 3]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format) {
    if (format == ImageFormat::Png) {
        write_png(img, path);
        return;
    }
    const auto bytes = encode_ppm(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingFile, path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::size_t pos = 0;
    auto token = [&]() {
        for (;;) {
            while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        std::string t;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) t.push_back(char(bytes[pos++]));
        return t;
    };
    auto number = [&](const char* what) {
        const auto t = token();
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            throw Error(ErrorCode::BadHeader, path.string() + ": bad " + what);
        return std::stoul(t);
    };

    if (token() != "P6") throw Error(ErrorCode::BadHeader, path.string() + ": expected P6");
    const auto w = number("width");
    const auto h = number("height");
    const auto maxval = number("maxval");
    if (w == 0 || h == 0 || maxval != 255) throw Error(ErrorCode::BadHeader, path.string() + ": unsupported PPM");
    ++pos;  // single whitespace byte before the raster

    Image img{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h)};
    if (bytes.size() < pos + img.pixels.size()) throw Error(ErrorCode::TruncatedFile, path.string());
    std::copy_n(bytes.begin() + std::ptrdiff_t(pos), img.pixels.size(), img.pixels.begin());
    return img;
}

}  // namespace painterly
