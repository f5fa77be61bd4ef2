#include "painterly/depth.hpp"

#include "painterly/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace painterly {

namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'D', 'R', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode_recording(const RecordingHeader& header,
                                           std::span<const DepthFrame> frames) {
    if (frames.size() != header.frameCount)
        throw Error(ErrorCode::BadHeader, "frame count does not match header");
    const std::size_t pixels = std::size_t(header.width) * header.height;

    std::vector<std::uint8_t> out;
    out.reserve(kRecordingHeaderBytes + frames.size() * pixels * 2);
    for (auto c : kMagic) out.push_back(c);
    put_u32(out, header.width);
    put_u32(out, header.height);
    put_u32(out, header.frameCount);
    put_u64(out, std::bit_cast<std::uint64_t>(header.fps));
    for (const auto& frame : frames) {
        if (frame.width != header.width || frame.height != header.height || !frame.valid())
            throw Error(ErrorCode::BadHeader, "frame dimensions do not match header");
        for (auto s : frame.samples) {
            out.push_back(static_cast<std::uint8_t>(s & 0xff));
            out.push_back(static_cast<std::uint8_t>(s >> 8));
        }
    }
    return out;
}

void write_recording(const std::filesystem::path& path, const RecordingHeader& header,
                     std::span<const DepthFrame> frames) {
    const auto bytes = encode_recording(header, frames);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

DepthStream DepthStream::from_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin()))
        throw Error(ErrorCode::BadMagic, "recording does not start with PDR1");
    if (bytes.size() < kRecordingHeaderBytes)
        throw Error(ErrorCode::TruncatedFile, "header shorter than 24 bytes");

    DepthStream stream;
    auto& h = stream.header_;
    h.width = get_u32(bytes.data() + 4);
    h.height = get_u32(bytes.data() + 8);
    h.frameCount = get_u32(bytes.data() + 12);
    h.fps = std::bit_cast<double>(get_u64(bytes.data() + 16));
    if (h.width == 0 || h.height == 0) throw Error(ErrorCode::BadHeader, "zero frame dimension");
    if (!(h.fps > 0.0) || !std::isfinite(h.fps)) throw Error(ErrorCode::BadHeader, "fps must be positive");

    const std::uint64_t sampleCount = std::uint64_t(h.width) * h.height * h.frameCount;
    const std::uint64_t payload = bytes.size() - kRecordingHeaderBytes;
    if (payload < sampleCount * 2)
        throw Error(ErrorCode::TruncatedFile, "declared " + std::to_string(h.frameCount) +
                                                  " frames but payload holds " +
                                                  std::to_string(payload / (std::uint64_t(h.width) * h.height * 2)));
    if (payload > sampleCount * 2)
        throw Error(ErrorCode::TruncatedFile, "trailing bytes after the declared frames");

    stream.samples_.resize(sampleCount);
    const std::uint8_t* p = bytes.data() + kRecordingHeaderBytes;
    for (std::uint64_t i = 0; i < sampleCount; ++i)
        stream.samples_[i] = static_cast<std::uint16_t>(p[2 * i] | (p[2 * i + 1] << 8));
    return stream;
}

std::optional<DepthFrame> DepthStream::next_frame() {
    if (cursor_ >= header_.frameCount) return std::nullopt;
    return frame(cursor_++);
}

DepthFrame DepthStream::frame(std::uint32_t index) const {
    const std::size_t pixels = std::size_t(header_.width) * header_.height;
    DepthFrame f;
    f.width = header_.width;
    f.height = header_.height;
    f.timestamp = double(index) / header_.fps;
    auto first = samples_.begin() + std::ptrdiff_t(index * pixels);
    f.samples.assign(first, first + std::ptrdiff_t(pixels));
    return f;
}

std::vector<std::uint8_t> DepthStream::encode() const {
    std::vector<DepthFrame> frames;
    frames.reserve(header_.frameCount);
    for (std::uint32_t i = 0; i < header_.frameCount; ++i) frames.push_back(frame(i));
    return encode_recording(header_, frames);
}

DepthStream open_recording(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingFile, path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return DepthStream::from_bytes(bytes);
}

// ---------------------------------------------------------------------------

namespace {

class PgmTokens {
public:
    explicit PgmTokens(std::string_view text) : text_(text) {}

    std::string_view next() {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
                continue;
            }
            break;
        }
        const auto start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '#')
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

std::uint64_t parse_number(std::string_view token, const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec == std::errc::invalid_argument || ptr != token.data() + token.size())
        throw Error(ErrorCode::BadHeader, std::string("expected integer for ") + what);
    if (ec == std::errc::result_out_of_range)
        throw Error(ErrorCode::ValueOutOfRange, std::string(what) + " too large");
    return value;
}

}  // namespace

DepthFrame parse_pgm(std::string_view text) {
    PgmTokens tokens(text);
    if (tokens.next() != "P2") throw Error(ErrorCode::BadHeader, "expected P2 magic");
    const auto width = parse_number(tokens.next(), "width");
    const auto height = parse_number(tokens.next(), "height");
    const auto maxval = parse_number(tokens.next(), "maxval");
    if (width == 0 || height == 0 || width > 1u << 16 || height > 1u << 16)
        throw Error(ErrorCode::BadHeader, "bad dimensions");
    if (maxval == 0) throw Error(ErrorCode::BadHeader, "maxval must be positive");
    if (maxval > 65535) throw Error(ErrorCode::ValueOutOfRange, "maxval exceeds 65535");

    DepthFrame frame;
    frame.width = static_cast<std::uint32_t>(width);
    frame.height = static_cast<std::uint32_t>(height);
    frame.samples.reserve(width * height);
    for (std::uint64_t i = 0; i < width * height; ++i) {
        const auto token = tokens.next();
        if (token.empty()) throw Error(ErrorCode::BadHeader, "fewer samples than width*height");
        const auto value = parse_number(token, "sample");
        if (value > maxval) throw Error(ErrorCode::ValueOutOfRange, "sample exceeds maxval");
        frame.samples.push_back(static_cast<std::uint16_t>(value));
    }
    return frame;
}

// ---------------------------------------------------------------------------

bool performer_valid(const PerformerState& p, const SynthConfig& cfg) noexcept {
    return std::abs(p.x) <= cfg.stageHalfWidth && p.depth >= kMinPerformerDepth &&
           p.depth <= kMaxPerformerDepth && p.jumpPhase >= 0.0 && p.jumpPhase <= 1.0 &&
           p.depth < cfg.backgroundDepth;
}

DepthFrame synth_frame(const PerformerState& performer, const SynthConfig& cfg, double t) {
    DepthFrame frame;
    frame.width = cfg.frameWidth;
    frame.height = cfg.frameHeight;
    frame.timestamp = t;
    frame.samples.assign(std::size_t(cfg.frameWidth) * cfg.frameHeight, cfg.backgroundDepth);

    const auto body = static_cast<std::uint16_t>(std::lround(performer.depth));
    const int W = int(cfg.frameWidth), H = int(cfg.frameHeight);

    // All geometry below is in pixel-edge coordinates; pixel (i, j) has its
    // center at (i + 0.5, j + 0.5). The silhouette is symmetric about `cx`.
    const double cx = std::round(W / 2.0 + performer.x * cfg.pixelsPerMeter);
    const double lift = std::round(performer.jumpPhase * cfg.jumpHeightPx);
    const double bottom = H - double(cfg.floorMarginPx) - lift;
    const double top = bottom - cfg.bodyHeightPx;
    const double r = cfg.headRadiusPx;
    const double headCy = top + r;
    const double shoulder = top + 2.0 * r;
    const double halfBody = cfg.bodyWidthPx / 2.0;
    const double armW = cfg.armWidthPx;
    const double armL = cfg.armLengthPx;

    auto inside = [&](double px, double py) {
        const double dx = px - cx;
        const double ax = std::abs(dx);
        if (py >= shoulder && py < bottom && ax < halfBody) return true;  // torso
        if ((px - cx) * (px - cx) + (py - headCy) * (py - headCy) <= r * r) return true;

        const bool raised = dx < 0 ? performer.leftHandRaised : performer.rightHandRaised;
        if (!raised) {
            return ax >= halfBody && ax < halfBody + armW && py >= shoulder && py < shoulder + armL;
        }
        // Raised arm: upper arm straight out from the shoulder, forearm
        // straight up, ending a little above the head so that both fall in
        // the detector's cap band but stay well apart horizontally.
        const double elbow = halfBody + 0.6 * armL;
        if (ax >= halfBody && ax < elbow && py >= shoulder && py < shoulder + armW) return true;
        return ax >= elbow - armW && ax < elbow && py >= top - 0.2 * armL && py < shoulder + armW;
    };

    const int x0 = std::max(0, int(std::floor(cx - halfBody - armW - armL)));
    const int x1 = std::min(W, int(std::ceil(cx + halfBody + armW + armL)) + 1);
    const int y0 = std::max(0, int(std::floor(top - armL)));
    const int y1 = std::min(H, int(std::ceil(bottom)) + 1);
    for (int j = y0; j < y1; ++j)
        for (int i = x0; i < x1; ++i)
            if (inside(i + 0.5, j + 0.5)) frame.samples[std::size_t(j) * W + i] = body;
    return frame;
}

}  // namespace painterly
