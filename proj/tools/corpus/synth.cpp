#include "corpus/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace voicepilot::corpus {

namespace {

constexpr double kRate = kPipelineRateHz;
constexpr double kBandwidths[3] = {90.0, 120.0, 170.0};

using Kind = Phone::Kind;

Phone voiced(double dur, double f1, double f2, double f3, double f1e = 0, double f2e = 0,
             double f3e = 0, double gain = 1.0) {
    return Phone{Kind::Voiced, dur, f1, f2, f3, f1e, f2e, f3e, gain};
}

Phone hiss(double dur, double centre, double gain) {
    return Phone{Kind::Unvoiced, dur, 0, centre, 0, 0, 0, 0, gain};
}


// Two-pole resonator with unity gain at DC; coefficients may change per sample.
class Resonator {
public:
    double step(double x, double freq, double bandwidth) {
        const double r = std::exp(-std::numbers::pi * bandwidth / kRate);
        const double b = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / kRate);
        const double c = -r * r;
        const double a = 1.0 - b - c;
        const double y = a * x + b * y1_ + c * y2_;
        y2_ = y1_;
        y1_ = y;
        return y;
    }

private:
    double y1_ = 0.0, y2_ = 0.0;
};

std::int16_t clip(double v) {
    return static_cast<std::int16_t>(std::clamp(std::round(v), -32768.0, 32767.0));
}

} // namespace

const std::vector<WordSpec>& command_words() {
    static const std::vector<WordSpec> words = {
        {"up", {voiced(0.38, 620, 1250, 2550, 500, 1650, 2450)}},
        {"down",
         {voiced(0.05, 300, 1700, 2600, 0, 0, 0, 0.9), voiced(0.32, 780, 1250, 2500, 450, 900, 2400),
          voiced(0.15, 280, 1700, 2700, 280, 1800, 2800, 0.9)}},
        {"left roll",
         {voiced(0.08, 360, 1000, 2600, 0, 0, 0, 0.9), voiced(0.22, 560, 1850, 2650, 480, 1750, 2550),
          voiced(0.07, 420, 1150, 1600, 0, 0, 0, 0.9), voiced(0.17, 520, 900, 2400, 400, 780, 2400),
          voiced(0.08, 360, 900, 2600, 0, 0, 0, 0.9)}},
        {"right roll",
         {voiced(0.08, 420, 1150, 1600, 0, 0, 0, 0.9),
          voiced(0.28, 780, 1200, 2500, 380, 2250, 2950),
          voiced(0.07, 420, 1150, 1600, 0, 0, 0, 0.9), voiced(0.17, 520, 900, 2400, 400, 780, 2400),
          voiced(0.08, 360, 900, 2600, 0, 0, 0, 0.9)}},
        {"reset",
         {voiced(0.07, 420, 1150, 1600, 0, 0, 0, 0.9), voiced(0.14, 300, 2300, 3000),
          hiss(0.12, 3400, 0.5), voiced(0.18, 580, 1800, 2600)}},
    };
    return words;
}

SampleBuffer synthesize_word(const WordSpec& word, std::uint64_t seed, const RenderOptions& o) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double v = o.variation;

    const double tempo = 1.0 + 0.10 * v * unit(rng);
    const double tract = 1.0 + 0.02 * v * unit(rng);
    const double f0_base = 120.0 * (1.0 + 0.08 * v * unit(rng));
    const double loudness = 0.85 + 0.15 * v * unit(rng);
    const double lead = std::max(0.0, o.lead_silence_s + 0.05 * v * unit(rng));

    // Per-sample targets for the whole word.
    struct Target {
        double f[3];
        double gain;
        Kind kind;
    };
    std::vector<Target> track;
    for (const Phone& ph : word.phones) {
        const double dur = ph.duration_s * tempo * (1.0 + 0.05 * v * unit(rng));
        const auto n = static_cast<std::size_t>(std::max(1.0, std::round(dur * kRate)));
        const double jitter = 1.0 + 0.02 * v * unit(rng);
        const double start[3] = {ph.f1, ph.f2, ph.f3};
        const double end[3] = {ph.f1_end > 0 ? ph.f1_end : ph.f1, ph.f2_end > 0 ? ph.f2_end : ph.f2,
                               ph.f3_end > 0 ? ph.f3_end : ph.f3};
        for (std::size_t i = 0; i < n; ++i) {
            const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
            Target tg{};
            for (int k = 0; k < 3; ++k) {
                tg.f[k] = (start[k] + t * (end[k] - start[k])) * tract * jitter;
            }
            tg.gain = ph.gain;
            tg.kind = ph.kind;
            track.push_back(tg);
        }
    }

    // Smooth formant and gain tracks (coarticulation, no clicks).
    const double smooth = std::exp(-1.0 / (0.012 * kRate));
    double sf[3] = {track.empty() ? 500.0 : track[0].f[0], track.empty() ? 1500.0 : track[0].f[1],
                    track.empty() ? 2500.0 : track[0].f[2]};
    double sg = 0.0;

    // Voiced and fricative streams are synthesized separately and each scaled
    // to unit RMS over its active region, so phone gains are relative levels.
    std::vector<double> voice(track.size(), 0.0);
    std::vector<double> noise(track.size(), 0.0);
    std::vector<double> gain(track.size(), 0.0);
    Resonator formants[3];
    Resonator fricative;
    double phase = 0.0;
    double glottal_lp = 0.0;
    double glottal_prev = 0.0;
    double voice_power = 0.0, noise_power = 0.0;
    std::size_t voice_n = 0, noise_n = 0;
    for (std::size_t i = 0; i < track.size(); ++i) {
        const Target& tg = track[i];
        for (int k = 0; k < 3; ++k) {
            if (tg.kind == Kind::Voiced) {
                sf[k] = smooth * sf[k] + (1.0 - smooth) * tg.f[k];
            }
        }
        sg = smooth * sg + (1.0 - smooth) * tg.gain;
        gain[i] = sg;

        const double progress = static_cast<double>(i) / static_cast<double>(track.size());
        const double f0 = f0_base * (1.05 - 0.15 * progress) *
                          (1.0 + 0.01 * std::sin(2.0 * std::numbers::pi * 5.0 * i / kRate));
        phase += f0 / kRate;
        double pulse = 0.0;
        if (phase >= 1.0) {
            phase -= 1.0;
            pulse = 1.0;
        }
        // Low-passed pulse train, differentiated for lip radiation.
        glottal_lp = 0.92 * glottal_lp + pulse;
        const double radiated = glottal_lp - glottal_prev;
        glottal_prev = glottal_lp;
        double y = tg.kind == Kind::Voiced ? radiated : 0.0;
        for (int k = 0; k < 3; ++k) {
            y = formants[k].step(y, sf[k], kBandwidths[k]);
        }
        voice[i] = y;
        const double noise_src = tg.kind == Kind::Unvoiced ? gauss(rng) : 0.0;
        noise[i] = fricative.step(noise_src, tg.kind == Kind::Unvoiced ? tg.f[1] : 3000.0, 400.0);
        if (tg.kind == Kind::Voiced) {
            voice_power += y * y;
            ++voice_n;
        } else if (tg.kind == Kind::Unvoiced) {
            noise_power += noise[i] * noise[i];
            ++noise_n;
        }
    }
    const double voice_rms = voice_n ? std::sqrt(voice_power / voice_n) : 1.0;
    const double noise_rms = noise_n ? std::sqrt(noise_power / noise_n) : 1.0;
    std::vector<double> word_samples(track.size(), 0.0);
    for (std::size_t i = 0; i < track.size(); ++i) {
        word_samples[i] = gain[i] * (voice[i] / voice_rms + noise[i] / noise_rms);
    }

    double peak = 0.0;
    for (double s : word_samples) {
        peak = std::max(peak, std::abs(s));
    }
    const double scale = peak > 0.0 ? o.peak * loudness / peak : 0.0;

    const auto total = static_cast<std::size_t>(std::round(o.total_s * kRate));
    const auto lead_n = static_cast<std::size_t>(std::round(lead * kRate));
    std::vector<double> out(total, 0.0);
    for (std::size_t i = 0; i < word_samples.size() && lead_n + i < total; ++i) {
        out[lead_n + i] = word_samples[i] * scale;
    }
    for (double& s : out) {
        s += o.background_rms * gauss(rng);
    }

    SampleBuffer buffer;
    buffer.rate_hz = kPipelineRateHz;
    buffer.samples.reserve(total);
    for (double s : out) {
        buffer.samples.push_back(clip(s));
    }
    if (o.snr_db) {
        const std::size_t end = std::min(total, lead_n + word_samples.size());
        buffer = add_white_noise(buffer, *o.snr_db, seed ^ 0x9E3779B97F4A7C15ull,
                                 std::min(lead_n, end), end);
    }
    return buffer;
}

SampleBuffer add_white_noise(const SampleBuffer& buffer, double snr_db, std::uint64_t seed,
                             std::size_t signal_begin, std::size_t signal_end) {
    signal_end = std::min(signal_end, buffer.samples.size());
    double power = 0.0;
    for (std::size_t i = signal_begin; i < signal_end; ++i) {
        const double s = buffer.samples[i];
        power += s * s;
    }
    if (signal_end > signal_begin) {
        power /= static_cast<double>(signal_end - signal_begin);
    }
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma > 0.0 ? sigma : 1e-12);
    SampleBuffer out = buffer;
    for (auto& s : out.samples) {
        s = clip(static_cast<double>(s) + gauss(rng));
    }
    return out;
}

BurstSignal synthesize_burst(std::uint64_t seed, std::size_t total_samples, double min_snr_db,
                             double noise_rms, std::size_t min_lead_samples) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, noise_rms);

    const double snr_db = min_snr_db + 10.0 * u01(rng);
    const double freq = 250.0 + 1250.0 * u01(rng);
    const auto min_len = static_cast<std::size_t>(0.15 * kRate);
    const auto max_len = std::min(static_cast<std::size_t>(0.8 * kRate),
                                  total_samples - min_lead_samples - 4 * 256);
    const auto len = min_len + static_cast<std::size_t>(u01(rng) * static_cast<double>(max_len - min_len));
    const std::size_t latest_start = total_samples - len - 2 * 256;
    const auto start =
        min_lead_samples +
        static_cast<std::size_t>(u01(rng) * static_cast<double>(latest_start - min_lead_samples));

    // Sine power is A^2 / 2.
    const double amplitude = noise_rms * std::sqrt(2.0) * std::pow(10.0, snr_db / 20.0);
    const double phase0 = 2.0 * std::numbers::pi * u01(rng);
    const double ramp = 0.005 * kRate;

    BurstSignal out;
    out.burst_begin = start;
    out.burst_end = start + len;
    out.buffer.rate_hz = kPipelineRateHz;
    out.buffer.samples.resize(total_samples);
    for (std::size_t n = 0; n < total_samples; ++n) {
        double s = gauss(rng);
        if (n >= start && n < start + len) {
            const double k = static_cast<double>(n - start);
            const double env = std::min({1.0, (k + 1.0) / ramp, (static_cast<double>(len) - k) / ramp});
            s += env * amplitude * std::sin(phase0 + 2.0 * std::numbers::pi * freq * k / kRate);
        }
        out.buffer.samples[n] = clip(s);
    }
    return out;
}

} // namespace voicepilot::corpus
