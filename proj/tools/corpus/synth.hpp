#pragma once

// Formant synthesizer for a small command vocabulary, used to build
// reproducible test corpora without recorded speech.

#include "voicepilot/audio_io.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace voicepilot::corpus {

// One stretch of sound. Voiced phones are a glottal pulse train through three
// formant resonators gliding from the start to the end targets; unvoiced
// phones are white noise through a single resonator at f2; silent phones are
// closures.
struct Phone {
    enum class Kind { Voiced, Unvoiced, Silent };
    Kind kind = Kind::Voiced;
    double duration_s = 0.1;
    double f1 = 500, f2 = 1500, f3 = 2500;          // start targets (Hz)
    double f1_end = 0, f2_end = 0, f3_end = 0;      // 0 = same as start
    double gain = 1.0;
};

struct WordSpec {
    std::string label;
    std::vector<Phone> phones;
};

// up, down, left roll, right roll, reset
const std::vector<WordSpec>& command_words();

struct RenderOptions {
    double lead_silence_s = 0.40;
    double total_s = 1.90;          // padded (or cut) to this length
    double background_rms = 8.0;    // always-present room noise
    double peak = 9000.0;           // nominal word peak amplitude
    double variation = 1.0;         // 0 = identical renditions, 1 = nominal speaker variability
    std::optional<double> snr_db;   // extra white noise relative to the word's power
};

// Deterministic in (word, seed, options).
SampleBuffer synthesize_word(const WordSpec& word, std::uint64_t seed,
                             const RenderOptions& options = {});

// Adds white noise at snr_db relative to the mean power of samples
// [signal_begin, signal_end).
SampleBuffer add_white_noise(const SampleBuffer& buffer, double snr_db, std::uint64_t seed,
                             std::size_t signal_begin, std::size_t signal_end);

struct BurstSignal {
    SampleBuffer buffer;
    std::size_t burst_begin = 0; // first burst sample
    std::size_t burst_end = 0;   // one past the last burst sample
};

// silence | tone burst | silence, where "silence" is white noise of rms
// noise_rms and the burst sits snr_db above it. Position, length, pitch and
// the SNR (within [min_snr_db, min_snr_db + 10]) are drawn from the seed.
BurstSignal synthesize_burst(std::uint64_t seed, std::size_t total_samples = 62 * 256,
                             double min_snr_db = 20.0, double noise_rms = 100.0,
                             std::size_t min_lead_samples = 12 * 256);

} // namespace voicepilot::corpus
