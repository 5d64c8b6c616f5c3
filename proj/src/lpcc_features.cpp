#include "voicepilot/lpcc_features.hpp"

#include "voicepilot/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace voicepilot {

std::vector<double> apply_window(std::span<const double> frame, WindowKind window) {
    std::vector<double> out(frame.begin(), frame.end());
    if (window == WindowKind::Hamming && out.size() > 1) {
        const double denom = static_cast<double>(out.size() - 1);
        for (std::size_t n = 0; n < out.size(); ++n) {
            out[n] *= 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
        }
    }
    return out;
}

std::vector<double> autocorrelate(std::span<const double> frame, std::size_t p) {
    if (frame.size() <= p) {
        throw Error(ErrorKind::FrameTooShort, "frame of " + std::to_string(frame.size()) +
                                                  " samples cannot support order " +
                                                  std::to_string(p));
    }
    std::vector<double> r(p + 1, 0.0);
    for (std::size_t k = 0; k <= p; ++k) {
        double sum = 0.0;
        for (std::size_t n = k; n < frame.size(); ++n) {
            sum += frame[n] * frame[n - k];
        }
        r[k] = sum;
    }
    return r;
}

LpcCoeffs levinson_durbin(std::span<const double> r) {
    if (r.empty() || !(r[0] > 0.0)) {
        throw Error(ErrorKind::ZeroEnergyFrame, "autocorrelation r(0) must be positive");
    }
    const std::size_t p = r.size() - 1;
    LpcCoeffs out;
    out.a.assign(p, 0.0);
    std::vector<double>& a = out.a;
    std::vector<double> previous(p, 0.0);
    double error = r[0];

    for (std::size_t i = 1; i <= p; ++i) {
        double acc = r[i];
        for (std::size_t j = 1; j < i; ++j) {
            acc -= a[j - 1] * r[i - j];
        }
        const double k = acc / error;
        previous = a;
        a[i - 1] = k;
        for (std::size_t j = 1; j < i; ++j) {
            a[j - 1] = previous[j - 1] - k * previous[i - j - 1];
        }
        error *= (1.0 - k * k);
        if (!(error > 0.0)) {
            // Perfectly predictable (or numerically singular) at order i; the
            // higher-order coefficients stay zero.
            out.degenerate = true;
            break;
        }
    }
    return out;
}

LpccVector lpc_to_lpcc(const LpcCoeffs& lpc) {
    const auto& a = lpc.a;
    const std::size_t p = a.size();
    LpccVector out;
    out.c.assign(p, 0.0);
    auto& c = out.c;
    if (p == 0) {
        return out;
    }
    // c(1) = a(1); c(n) = sum_{k=1}^{n-1} (1 - k/n) c(n-k) a(k) + a(n)
    c[0] = a[0];
    for (std::size_t n = 2; n <= p; ++n) {
        double sum = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            sum += (1.0 - static_cast<double>(k) / static_cast<double>(n)) * c[n - k - 1] * a[k - 1];
        }
        c[n - 1] = sum + a[n - 1];
    }
    return out;
}

LpccVector frame_lpcc(std::span<const std::int16_t> frame, const FeatureParams& params,
                      bool* zero_energy) {
    std::vector<double> samples(frame.begin(), frame.end());
    const auto windowed = apply_window(samples, params.window);
    const auto r = autocorrelate(windowed, params.order);
    if (!(r[0] > 0.0)) {
        if (zero_energy) {
            *zero_energy = true;
        }
        return LpccVector{std::vector<double>(params.order, 0.0)};
    }
    if (zero_energy) {
        *zero_energy = false;
    }
    return lpc_to_lpcc(levinson_durbin(r));
}

LpccSequence extract_features(const FrameSeries& frames, const SpeechSegment& segment,
                              const FeatureParams& params) {
    if (params.order < 1 || params.order > kMaxLpcOrder) {
        throw Error(ErrorKind::InvalidArgument, "LPC order must lie in [1, 24]");
    }
    if (segment.start_frame > segment.end_frame || segment.end_frame >= frames.size()) {
        throw Error(ErrorKind::InvalidArgument, "segment outside the frame series");
    }
    LpccSequence seq;
    seq.vectors.reserve(segment.length());
    seq.zero_energy.reserve(segment.length());
    for (std::size_t j = segment.start_frame; j <= segment.end_frame; ++j) {
        bool silent = false;
        seq.vectors.push_back(frame_lpcc(frames[j], params, &silent));
        seq.zero_energy.push_back(silent);
    }
    return seq;
}

} // namespace voicepilot
