#include "voicepilot/endpoint_detector.hpp"

#include "voicepilot/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace voicepilot {

namespace {

int sign_bit(std::int16_t x) { return x >= 0 ? 1 : 0; }

void require_non_empty(std::span<const std::int16_t> frame) {
    if (frame.empty()) {
        throw Error(ErrorKind::InvalidArgument, "empty frame");
    }
}

} // namespace

double short_term_energy(std::span<const std::int16_t> frame, EnergyVariant variant) {
    require_non_empty(frame);
    const double w = 1.0 / (2.0 * static_cast<double>(frame.size()));
    double sum = 0.0;
    for (std::int16_t s : frame) {
        const double v = static_cast<double>(s) * w;
        switch (variant) {
        case EnergyVariant::Square: sum += v * v; break;
        case EnergyVariant::AbsSum: sum += std::abs(v); break;
        case EnergyVariant::LogGuarded: sum += std::log1p(v * v); break;
        }
    }
    return sum;
}

double zero_crossing_rate(std::span<const std::int16_t> frame) {
    require_non_empty(frame);
    std::size_t flips = 0;
    for (std::size_t n = 1; n < frame.size(); ++n) {
        flips += static_cast<std::size_t>(std::abs(sign_bit(frame[n]) - sign_bit(frame[n - 1])));
    }
    return static_cast<double>(flips) / (2.0 * static_cast<double>(frame.size()));
}

ShortTimeProfile compute_profile(const FrameSeries& frames, EnergyVariant variant) {
    ShortTimeProfile profile;
    profile.variant = variant;
    profile.energy.reserve(frames.size());
    profile.zcr.reserve(frames.size());
    for (const auto& frame : frames.frames) {
        profile.energy.push_back(short_term_energy(frame, variant));
        profile.zcr.push_back(zero_crossing_rate(frame));
    }
    return profile;
}

NoiseProfile calibrate_noise(const ShortTimeProfile& profile, std::size_t n_frames) {
    if (n_frames == 0 || profile.size() < n_frames) {
        throw Error(ErrorKind::TooFewFrames, "noise calibration needs " + std::to_string(n_frames) +
                                                 " frames, got " + std::to_string(profile.size()));
    }
    NoiseProfile noise;
    noise.frames_used = n_frames;
    for (std::size_t i = 0; i < n_frames; ++i) {
        noise.mean_energy += profile.energy[i];
        noise.mean_zcr += profile.zcr[i];
    }
    noise.mean_energy /= static_cast<double>(n_frames);
    noise.mean_zcr /= static_cast<double>(n_frames);
    return noise;
}

Thresholds derive_thresholds(const NoiseProfile& noise, const ThresholdParams& params) {
    if (!(params.k1 > 1.0) || !(params.k2 >= 1.0) || !(params.k3 >= 1.0) || !(params.floor > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "threshold multipliers need k1 > 1, k2 >= 1, "
                                                "k3 >= 1 and floor > 0");
    }
    Thresholds thr;
    thr.m2 = std::max(params.k2 * noise.mean_energy, params.floor);
    thr.m1 = params.k1 * thr.m2;
    thr.m3 = std::max(params.k3 * noise.mean_zcr, params.floor);
    return thr;
}

DetectionTrace trace_endpoints(const ShortTimeProfile& profile, const Thresholds& thr) {
    if (profile.empty() || profile.zcr.size() != profile.energy.size()) {
        throw Error(ErrorKind::InvalidArgument, "profile must be non-empty with matching tracks");
    }
    const auto& energy = profile.energy;
    const auto& zcr = profile.zcr;
    const std::size_t n = energy.size();

    // Stage 1a: the maximal run at or above m1 with the largest total energy;
    // strict comparison keeps the earliest run on ties.
    bool found = false;
    double best_total = 0.0;
    DetectionTrace tr;
    for (std::size_t i = 0; i < n;) {
        if (energy[i] < thr.m1) {
            ++i;
            continue;
        }
        std::size_t j = i;
        double total = 0.0;
        while (j < n && energy[j] >= thr.m1) {
            total += energy[j];
            ++j;
        }
        if (!found || total > best_total) {
            found = true;
            best_total = total;
            tr.a = i;
            tr.b = j - 1;
        }
        i = j;
    }
    if (!found) {
        throw Error(ErrorKind::NoSpeech, "no frame reaches the high energy threshold");
    }

    // Stage 1b: widen on the low energy threshold.
    tr.c = tr.a;
    while (tr.c > 0 && energy[tr.c - 1] >= thr.m2) {
        --tr.c;
    }
    tr.d = tr.b;
    while (tr.d + 1 < n && energy[tr.d + 1] >= thr.m2) {
        ++tr.d;
    }

    // Stage 2: widen on zero crossings to pick up unvoiced edges. Clamped to
    // the profile bounds.
    tr.e = tr.c;
    while (tr.e > 0 && zcr[tr.e - 1] >= thr.m3) {
        --tr.e;
    }
    tr.f = tr.d;
    while (tr.f + 1 < n && zcr[tr.f + 1] >= thr.m3) {
        ++tr.f;
    }
    return tr;
}

SpeechSegment detect_endpoints(const ShortTimeProfile& profile, const Thresholds& thr) {
    return trace_endpoints(profile, thr).segment();
}

void write_profile_csv(std::ostream& out, const ShortTimeProfile& profile, const Thresholds& thr) {
    out << "frame_index,energy,zcr,ge_m1,ge_m2,ge_m3\n";
    for (std::size_t i = 0; i < profile.size(); ++i) {
        out << i << ',' << profile.energy[i] << ',' << profile.zcr[i] << ','
            << (profile.energy[i] >= thr.m1) << ',' << (profile.energy[i] >= thr.m2) << ','
            << (profile.zcr[i] >= thr.m3) << '\n';
    }
}

} // namespace voicepilot
