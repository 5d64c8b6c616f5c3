#pragma once

#include "voicepilot/audio_io.hpp"
#include "voicepilot/endpoint_detector.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace voicepilot {

inline constexpr std::size_t kDefaultLpcOrder = 12;
inline constexpr std::size_t kMaxLpcOrder = 24;

enum class WindowKind { Hamming, Rectangular };

// Predictor coefficients a(1)..a(p) for x^(n) = sum_k a(k) x(n-k).
// a[0] holds a(1).
struct LpcCoeffs {
    std::vector<double> a;
    // Prediction error power went non-positive before reaching order p; the
    // remaining coefficients are zero.
    bool degenerate = false;

    std::size_t order() const { return a.size(); }
};

struct LpccVector {
    std::vector<double> c; // c[0] holds c(1)
};

// One cepstral vector per speech frame. zero_energy[j] marks frames whose
// autocorrelation vanished; their vectors are all zero.
struct LpccSequence {
    std::vector<LpccVector> vectors;
    std::vector<bool> zero_energy;

    std::size_t frame_count() const { return vectors.size(); }
    std::size_t order() const { return vectors.empty() ? 0 : vectors.front().c.size(); }
};

struct FeatureParams {
    std::size_t order = kDefaultLpcOrder;
    WindowKind window = WindowKind::Hamming;
};

std::vector<double> apply_window(std::span<const double> frame, WindowKind window);

// r(k) = sum_{n=k}^{N-1} x(n) x(n-k) over the already windowed frame.
// Throws Error{FrameTooShort} when the frame has <= p samples.
std::vector<double> autocorrelate(std::span<const double> frame, std::size_t p);

// Throws Error{ZeroEnergyFrame} when r(0) <= 0.
LpcCoeffs levinson_durbin(std::span<const double> r);

LpccVector lpc_to_lpcc(const LpcCoeffs& lpc);

// Window, autocorrelate, solve and convert one frame.
LpccVector frame_lpcc(std::span<const std::int16_t> frame, const FeatureParams& params,
                      bool* zero_energy = nullptr);

LpccSequence extract_features(const FrameSeries& frames, const SpeechSegment& segment,
                              const FeatureParams& params = {});

} // namespace voicepilot
