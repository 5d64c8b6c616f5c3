#include "voicepilot/audio_io.hpp"
#include "voicepilot/error.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cstring>
#include <fstream>
#include <random>

using namespace voicepilot;
using voicepilot::testing::TempDir;

namespace {

SampleBuffer make_buffer(std::vector<std::int16_t> samples) {
    SampleBuffer b;
    b.samples = std::move(samples);
    return b;
}

// Minimal WAV writer with every header field under the test's control.
void write_wav(const std::filesystem::path& path, std::uint16_t format, std::uint16_t channels,
               std::uint32_t rate, std::uint16_t bits, const std::vector<std::int16_t>& samples) {
    auto le16 = [](std::ofstream& o, std::uint16_t v) {
        o.put(static_cast<char>(v & 0xFF));
        o.put(static_cast<char>(v >> 8));
    };
    auto le32 = [](std::ofstream& o, std::uint32_t v) {
        for (int i = 0; i < 4; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xFF));
    };
    std::ofstream o(path, std::ios::binary);
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    o.write("RIFF", 4);
    le32(o, 36 + data_bytes);
    o.write("WAVE", 4);
    o.write("fmt ", 4);
    le32(o, 16);
    le16(o, format);
    le16(o, channels);
    le32(o, rate);
    le32(o, rate * channels * bits / 8);
    le16(o, static_cast<std::uint16_t>(channels * bits / 8));
    le16(o, bits);
    o.write("data", 4);
    le32(o, data_bytes);
    for (auto s : samples) le16(o, static_cast<std::uint16_t>(s));
}

ErrorKind load_error(const std::filesystem::path& path) {
    try {
        load_audio(path);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("load_audio accepted " << path);
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("zero-length payload loads as an empty 8 kHz buffer") {
    TempDir dir;
    write_wav(dir / "empty.wav", 1, 1, 8000, 16, {});
    const auto b = load_audio(dir / "empty.wav");
    CHECK(b.samples.empty());
    CHECK(b.rate_hz == 8000);
}

TEST_CASE("16000-sample fixture round-trips bit-exactly") {
    TempDir dir;
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dist(-32768, 32767);
    SampleBuffer b;
    for (int i = 0; i < 16000; ++i) b.samples.push_back(static_cast<std::int16_t>(dist(rng)));
    save_audio(b, dir / "rt.wav");
    const auto loaded = load_audio(dir / "rt.wav");
    CHECK(loaded.samples.size() == 16000);
    CHECK(loaded == b);
}

TEST_CASE("header checks map to distinct error kinds") {
    TempDir dir;
    write_wav(dir / "cd.wav", 1, 1, 44100, 16, {1, 2, 3});
    CHECK(load_error(dir / "cd.wav") == ErrorKind::UnsupportedRate);
    write_wav(dir / "stereo.wav", 1, 2, 8000, 16, {1, 2, 3, 4});
    CHECK(load_error(dir / "stereo.wav") == ErrorKind::UnsupportedChannels);
    write_wav(dir / "float.wav", 3, 1, 8000, 16, {1, 2});
    CHECK(load_error(dir / "float.wav") == ErrorKind::MalformedContainer);
    write_wav(dir / "8bit.wav", 1, 1, 8000, 8, {1, 2});
    CHECK(load_error(dir / "8bit.wav") == ErrorKind::MalformedContainer);

    std::ofstream(dir / "text.wav") << "this is not a wave file at all, not even close";
    CHECK(load_error(dir / "text.wav") == ErrorKind::MalformedContainer);
    CHECK(load_error(dir / "missing.wav") == ErrorKind::IoFailure);
}

TEST_CASE("unknown chunks before the data chunk are skipped") {
    TempDir dir;
    SampleBuffer b = make_buffer({5, -5, 7});
    save_audio(b, dir / "plain.wav");
    std::ifstream in(dir / "plain.wav", std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), {});
    // Insert a 6-byte LIST chunk between fmt and data.
    const std::vector<char> extra = {'L', 'I', 'S', 'T', 6, 0, 0, 0, 'a', 'b', 'c', 'd', 'e', 'f'};
    bytes.insert(bytes.begin() + 36, extra.begin(), extra.end());
    const std::uint32_t riff = static_cast<std::uint32_t>(bytes.size() - 8);
    std::memcpy(bytes.data() + 4, &riff, 4);
    std::ofstream(dir / "list.wav", std::ios::binary).write(bytes.data(),
                                                          static_cast<std::streamsize>(bytes.size()));
    CHECK(load_audio(dir / "list.wav") == b);
}

TEST_CASE("pre-emphasis examples") {
    const auto ramp = make_buffer({0, 1, 2, 3});
    CHECK(pre_emphasize(ramp, 0.95).samples == std::vector<std::int16_t>{0, 1, 1, 1});

    const auto any = make_buffer({12, -400, 31000, -32768, 7});
    CHECK(pre_emphasize(any, 0.0) == any);

    const auto flat = make_buffer({100, 100, 100, 100});
    CHECK(pre_emphasize(flat, 1.0).samples == std::vector<std::int16_t>{100, 0, 0, 0});
}

TEST_CASE("pre-emphasis rounds toward zero and saturates") {
    // -1 - 0.95*1 = -1.95 -> -1 (toward zero, not floor)
    CHECK(pre_emphasize(make_buffer({1, -1}), 0.95).samples[1] == -1);
    // -32768 - 1.0*32767 saturates at the negative rail
    CHECK(pre_emphasize(make_buffer({32767, -32768}), 1.0).samples[1] == -32768);
    CHECK(pre_emphasize(make_buffer({-32768, 32767}), 1.0).samples[1] == 32767);
    CHECK_THROWS_AS(pre_emphasize(make_buffer({1}), 1.5), Error);
    CHECK_THROWS_AS(pre_emphasize(make_buffer({1}), -0.1), Error);
}

TEST_CASE("pre-emphasis is linear before narrowing") {
    // With integer inputs and a = 2, 2*pre(x) and pre(2x) can only differ by the
    // truncation: |2*trunc(y) - trunc(2y)| <= 1.
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> dist(-8000, 8000);
    SampleBuffer x, x2;
    for (int i = 0; i < 2000; ++i) {
        const int v = dist(rng);
        x.samples.push_back(static_cast<std::int16_t>(v));
        x2.samples.push_back(static_cast<std::int16_t>(2 * v));
    }
    const auto a = pre_emphasize(x, 0.95);
    const auto b = pre_emphasize(x2, 0.95);
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
        CHECK(std::abs(2 * a.samples[i] - b.samples[i]) <= 1);
    }
}

TEST_CASE("framing counts and layout") {
    CHECK(frame_signal(make_buffer(std::vector<std::int16_t>(512)), 256, 256).size() == 2);
    CHECK(frame_signal(make_buffer(std::vector<std::int16_t>(255)), 256, 256).size() == 0);
    CHECK(frame_signal(make_buffer(std::vector<std::int16_t>(1000)), 256, 256).size() == 3);
    CHECK(frame_signal(make_buffer(std::vector<std::int16_t>(1000)), 256, 128).size() == 6);
    CHECK_THROWS_AS(frame_signal(make_buffer({1, 2}), 0, 1), Error);
    CHECK_THROWS_AS(frame_signal(make_buffer({1, 2}), 1, 0), Error);

    SampleBuffer b;
    for (int i = 0; i < 1000; ++i) b.samples.push_back(static_cast<std::int16_t>(i));
    const auto frames = frame_signal(b, 256, 256);
    std::vector<std::int16_t> joined;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        CHECK(frames[f].size() == 256);
        joined.insert(joined.end(), frames[f].begin(), frames[f].end());
    }
    CHECK(std::equal(joined.begin(), joined.end(), b.samples.begin()));

    const auto overlapped = frame_signal(b, 100, 30);
    for (std::size_t f = 0; f < overlapped.size(); ++f) {
        CHECK(overlapped[f][0] == static_cast<std::int16_t>(f * 30));
    }
}

TEST_CASE("10-bit quantization keeps the top ten bits") {
    const auto q = quantize_to_10_bits(make_buffer({0, 63, 64, 127, -1, -64, -65, 32767, -32768}));
    CHECK(q.samples == std::vector<std::int16_t>{0, 0, 64, 64, -64, -64, -128, 32704, -32768});
}
