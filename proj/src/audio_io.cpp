#include "voicepilot/audio_io.hpp"

#include "voicepilot/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace voicepilot {

namespace {

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
    }
}

std::int16_t saturate_toward_zero(double v) {
    double t = std::trunc(v);
    t = std::clamp(t, static_cast<double>(std::numeric_limits<std::int16_t>::min()),
                   static_cast<double>(std::numeric_limits<std::int16_t>::max()));
    return static_cast<std::int16_t>(t);
}

} // namespace

SampleBuffer load_audio(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    const auto malformed = [&](const std::string& why) {
        return Error(ErrorKind::MalformedContainer, path.string() + ": " + why);
    };

    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw malformed("not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint8_t* chunk = bytes.data() + pos;
        const std::uint32_t chunk_size = read_u32(chunk + 4);
        const std::size_t body = pos + 8;
        if (chunk_size > bytes.size() - body) {
            throw malformed("chunk overruns file");
        }
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (chunk_size < 16) {
                throw malformed("short fmt chunk");
            }
            const std::uint16_t format_tag = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            rate = read_u32(bytes.data() + body + 4);
            const std::uint16_t bits = read_u16(bytes.data() + body + 14);
            if (format_tag != 1 || bits != 16) {
                throw malformed("only 16-bit linear PCM is supported");
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            if (!have_fmt) {
                throw malformed("data chunk before fmt chunk");
            }
            if (channels != 1) {
                throw Error(ErrorKind::UnsupportedChannels,
                            path.string() + ": " + std::to_string(channels) + " channels");
            }
            if (rate != static_cast<std::uint32_t>(kPipelineRateHz)) {
                throw Error(ErrorKind::UnsupportedRate,
                            path.string() + ": " + std::to_string(rate) + " Hz");
            }
            if (chunk_size % 2 != 0) {
                throw malformed("odd PCM16 payload size");
            }
            SampleBuffer out;
            out.rate_hz = kPipelineRateHz;
            out.samples.resize(chunk_size / 2);
            for (std::size_t i = 0; i < out.samples.size(); ++i) {
                out.samples[i] = static_cast<std::int16_t>(read_u16(bytes.data() + body + 2 * i));
            }
            return out;
        }
        // Chunks are word aligned.
        pos = body + chunk_size + (chunk_size & 1u);
    }
    throw malformed(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

void save_audio(const SampleBuffer& buffer, const std::filesystem::path& path) {
    const auto data_bytes = static_cast<std::uint32_t>(buffer.samples.size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_bytes);
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, 1);
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(buffer.rate_hz));
    put_u32(out, static_cast<std::uint32_t>(buffer.rate_hz) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_bytes);
    for (std::int16_t s : buffer.samples) {
        put_u16(out, static_cast<std::uint16_t>(s));
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw Error(ErrorKind::IoFailure, "cannot create " + path.string());
    }
    file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!file) {
        throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
    }
}

SampleBuffer pre_emphasize(const SampleBuffer& buffer, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "pre-emphasis alpha must lie in [0, 1]");
    }
    SampleBuffer out;
    out.rate_hz = buffer.rate_hz;
    out.samples.resize(buffer.samples.size());
    double previous = 0.0;
    for (std::size_t n = 0; n < buffer.samples.size(); ++n) {
        const double x = buffer.samples[n];
        out.samples[n] = saturate_toward_zero(x - alpha * previous);
        previous = x;
    }
    return out;
}

SampleBuffer quantize_to_10_bits(const SampleBuffer& buffer) {
    SampleBuffer out = buffer;
    for (auto& s : out.samples) {
        // Arithmetic shift; int16 promotes to int so the sign is preserved.
        s = static_cast<std::int16_t>((s >> 6) * 64);
    }
    return out;
}

FrameSeries frame_signal(const SampleBuffer& buffer, std::size_t frame_len, std::size_t hop) {
    if (frame_len == 0 || hop == 0) {
        throw Error(ErrorKind::InvalidArgument, "frame_len and hop must be positive");
    }
    FrameSeries series;
    series.frame_len = frame_len;
    series.hop = hop;
    const std::size_t len = buffer.samples.size();
    if (len < frame_len) {
        return series;
    }
    const std::size_t count = (len - frame_len) / hop + 1;
    series.frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto first = buffer.samples.begin() + static_cast<std::ptrdiff_t>(i * hop);
        series.frames.emplace_back(first, first + static_cast<std::ptrdiff_t>(frame_len));
    }
    return series;
}

} // namespace voicepilot
