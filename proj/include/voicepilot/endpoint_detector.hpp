#pragma once

#include "voicepilot/audio_io.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace voicepilot {

// Short-time energy forms. All use the rectangular window w = 1/(2N).
//   Square     : sum (x*w)^2
//   AbsSum     : sum |x*w|
//   LogGuarded : sum log(1 + (x*w)^2), a finite stand-in for the squared-log
//                form, which diverges on zero samples.
enum class EnergyVariant { Square, AbsSum, LogGuarded };

struct ShortTimeProfile {
    std::vector<double> energy;
    std::vector<double> zcr;
    EnergyVariant variant = EnergyVariant::AbsSum;

    std::size_t size() const { return energy.size(); }
    bool empty() const { return energy.empty(); }
};

struct NoiseProfile {
    double mean_energy = 0.0;
    double mean_zcr = 0.0;
    std::size_t frames_used = 0;
};

// m1: high energy threshold, m2: low energy threshold, m3: zero-crossing threshold.
struct Thresholds {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
};

struct ThresholdParams {
    double k1 = 4.0;
    double k2 = 2.0;
    double k3 = 3.0;
    double floor = 1e-3;
};

// Inclusive frame range.
struct SpeechSegment {
    std::size_t start_frame = 0;
    std::size_t end_frame = 0;

    std::size_t length() const { return end_frame - start_frame + 1; }
    bool operator==(const SpeechSegment&) const = default;
};

// Intermediate points of the two-stage search:
// [a, b] high-energy core, [c, d] after low-energy expansion,
// [e, f] after zero-crossing expansion (the returned segment).
struct DetectionTrace {
    std::size_t a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;

    SpeechSegment segment() const { return {e, f}; }
};

double short_term_energy(std::span<const std::int16_t> frame,
                         EnergyVariant variant = EnergyVariant::AbsSum);

// Sign is 1 for x >= 0 and 0 for x < 0, so each sign flip adds 1/(2N).
double zero_crossing_rate(std::span<const std::int16_t> frame);

ShortTimeProfile compute_profile(const FrameSeries& frames,
                                 EnergyVariant variant = EnergyVariant::AbsSum);

NoiseProfile calibrate_noise(const ShortTimeProfile& profile, std::size_t n_frames = 10);

Thresholds derive_thresholds(const NoiseProfile& noise, const ThresholdParams& params = {});

DetectionTrace trace_endpoints(const ShortTimeProfile& profile, const Thresholds& thr);

// Throws Error{NoSpeech} when no frame reaches m1.
SpeechSegment detect_endpoints(const ShortTimeProfile& profile, const Thresholds& thr);

// frame_index,energy,zcr,ge_m1,ge_m2,ge_m3
void write_profile_csv(std::ostream& out, const ShortTimeProfile& profile, const Thresholds& thr);

} // namespace voicepilot
