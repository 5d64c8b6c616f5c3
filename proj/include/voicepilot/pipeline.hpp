#pragma once

#include "voicepilot/audio_io.hpp"
#include "voicepilot/config.hpp"
#include "voicepilot/endpoint_detector.hpp"
#include "voicepilot/lpcc_features.hpp"
#include "voicepilot/template_matcher.hpp"

#include <span>

namespace voicepilot {

// Everything computed for one utterance on its way to a key-segment matrix.
struct UtteranceAnalysis {
    FrameSeries detection_frames;
    ShortTimeProfile profile;
    Thresholds thresholds;
    DetectionTrace trace;
    LpccSequence features;
    bool truncated = false; // input was longer than max_frames
};

// Frames the buffer (capped at max_frames), finds the word and computes its
// cepstral sequence. Detection runs on the raw samples unless
// emphasize_before_detection is set; features always use the pre-emphasized
// signal. Throws Error{UnsupportedRate | TooFewFrames | NoSpeech}.
UtteranceAnalysis analyze_utterance(const SampleBuffer& buffer, const Config& config);

// analyze_utterance followed by make_pattern. A word too short to yield m
// key segments raises Error{TooFewFramesForM}.
KeyFeatures utterance_pattern(const SampleBuffer& buffer, const Config& config);

// utterance_pattern matched against the vocabulary at the configured
// rejection threshold.
MatchResult recognize(const SampleBuffer& buffer, std::span<const Template> templates,
                      const Config& config);

} // namespace voicepilot
