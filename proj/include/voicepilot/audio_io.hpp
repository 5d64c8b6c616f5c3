#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace voicepilot {

inline constexpr int kPipelineRateHz = 8000;

// Mono 16-bit PCM. The recognizer's front end produced 10-bit samples; they
// live in 16-bit containers here.
struct SampleBuffer {
    std::vector<std::int16_t> samples;
    int rate_hz = kPipelineRateHz;

    bool operator==(const SampleBuffer&) const = default;
};

// Non-overlapping or overlapping fixed-length analysis frames. frames[i]
// starts at sample i * hop; any tail shorter than frame_len is dropped.
struct FrameSeries {
    std::vector<std::vector<std::int16_t>> frames;
    std::size_t frame_len = 0;
    std::size_t hop = 0;

    std::size_t size() const { return frames.size(); }
    bool empty() const { return frames.empty(); }
    std::span<const std::int16_t> operator[](std::size_t i) const { return frames[i]; }
};

// Reads a RIFF/WAVE file. Accepts only linear PCM, 16-bit, mono, 8000 Hz.
// Throws Error{MalformedContainer | UnsupportedChannels | UnsupportedRate | IoFailure}.
SampleBuffer load_audio(const std::filesystem::path& path);

// Writes a canonical 44-byte-header PCM16 mono WAV.
void save_audio(const SampleBuffer& buffer, const std::filesystem::path& path);

// y[n] = x[n] - alpha * x[n-1], x[-1] = 0. Computed in double, then rounded
// toward zero and saturated to int16.
SampleBuffer pre_emphasize(const SampleBuffer& buffer, double alpha = 0.95);

// Keeps 10 significant bits (arithmetic shift right by 6, then back), modelling
// the 10-bit converter while staying in the 16-bit scale.
SampleBuffer quantize_to_10_bits(const SampleBuffer& buffer);

FrameSeries frame_signal(const SampleBuffer& buffer, std::size_t frame_len = 256,
                         std::size_t hop = 256);

} // namespace voicepilot
