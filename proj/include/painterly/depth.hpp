#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace painterly {

/// One depth image: row-major millimeter samples, 0 meaning "no reading".
struct DepthFrame {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint16_t> samples;
    double timestamp = 0.0;

    std::uint16_t at(std::uint32_t x, std::uint32_t y) const { return samples[std::size_t(y) * width + x]; }
    bool valid() const noexcept { return width > 0 && height > 0 && samples.size() == std::size_t(width) * height; }
};

// ---------------------------------------------------------------------------
// PDR1 recordings
//
//   0   "PDR1"
//   4   u32 LE width
//   8   u32 LE height
//   12  u32 LE frameCount
//   16  f64 LE fps
//   24  frameCount * width * height u16 LE samples, row-major, no padding
// ---------------------------------------------------------------------------

inline constexpr std::size_t kRecordingHeaderBytes = 24;

struct RecordingHeader {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t frameCount = 0;
    double fps = 30.0;
};

/// Serializes frames into PDR1 bytes. All frames must match the header size.
std::vector<std::uint8_t> encode_recording(const RecordingHeader& header,
                                           std::span<const DepthFrame> frames);

void write_recording(const std::filesystem::path& path, const RecordingHeader& header,
                     std::span<const DepthFrame> frames);

/// Single-consumer frame source over a decoded PDR1 recording.
class DepthStream {
public:
    /// Throws Error{BadMagic | TruncatedFile | BadHeader}.
    static DepthStream from_bytes(std::span<const std::uint8_t> bytes);

    const RecordingHeader& header() const noexcept { return header_; }
    std::uint32_t frame_count() const noexcept { return header_.frameCount; }
    double fps() const noexcept { return header_.fps; }

    /// Frames in file order with timestamp k/fps; nullopt after the last one, forever.
    std::optional<DepthFrame> next_frame();
    void rewind() noexcept { cursor_ = 0; }

    /// Random access used by the session's rate conversion.
    DepthFrame frame(std::uint32_t index) const;

    /// Re-encodes the stream; byte-identical to the input it was decoded from.
    std::vector<std::uint8_t> encode() const;

private:
    RecordingHeader header_;
    std::vector<std::uint16_t> samples_;
    std::uint32_t cursor_ = 0;
};

/// Throws Error{MissingFile} plus everything from DepthStream::from_bytes.
DepthStream open_recording(const std::filesystem::path& path);

/// ASCII PGM (P2) fixture; gray values are millimeters.
DepthFrame parse_pgm(std::string_view text);

// ---------------------------------------------------------------------------
// Synthetic performer
// ---------------------------------------------------------------------------

struct PerformerState {
    double x = 0.0;           // meters, stage-relative, + is image right
    double depth = 2000.0;    // millimeters from the camera plane
    double jumpPhase = 0.0;   // 0 grounded, 1 apex of the jump
    bool leftHandRaised = false;   // image-left arm
    bool rightHandRaised = false;  // image-right arm
};

inline constexpr double kMinPerformerDepth = 400.0;
inline constexpr double kMaxPerformerDepth = 8000.0;

struct SynthConfig {
    std::uint32_t frameWidth = 640;
    std::uint32_t frameHeight = 480;
    std::uint32_t bodyHeightPx = 360;  // feet to top of head, arms down
    std::uint32_t bodyWidthPx = 80;
    std::uint32_t headRadiusPx = 24;
    std::uint32_t armLengthPx = 110;
    std::uint32_t armWidthPx = 16;
    std::uint32_t floorMarginPx = 20;
    std::uint32_t jumpHeightPx = 60;   // vertical offset at jumpPhase = 1
    double pixelsPerMeter = 200.0;     // performer.x to image columns
    double stageHalfWidth = 1.0;       // keeps a raised arm inside the frame
    std::uint16_t backgroundDepth = 6000;
};

bool performer_valid(const PerformerState& performer, const SynthConfig& cfg) noexcept;

/// Crude humanoid silhouette at performer.depth over a flat background.
/// Pure function of its arguments; `t` only stamps the frame.
DepthFrame synth_frame(const PerformerState& performer, const SynthConfig& cfg, double t);

}  // namespace painterly
