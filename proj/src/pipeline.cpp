#include "voicepilot/pipeline.hpp"

#include "voicepilot/error.hpp"

#include <spdlog/spdlog.h>

namespace voicepilot {

namespace {

void cap_frames(FrameSeries& frames, std::size_t max_frames) {
    if (frames.size() > max_frames) {
        frames.frames.resize(max_frames);
    }
}

} // namespace

UtteranceAnalysis analyze_utterance(const SampleBuffer& buffer, const Config& config) {
    if (buffer.rate_hz != kPipelineRateHz) {
        throw Error(ErrorKind::UnsupportedRate, std::to_string(buffer.rate_hz) + " Hz");
    }
    const SampleBuffer source = config.quantize_10bit ? quantize_to_10_bits(buffer) : buffer;
    const SampleBuffer emphasized = pre_emphasize(source, config.alpha);

    UtteranceAnalysis out;
    out.detection_frames = frame_signal(config.emphasize_before_detection ? emphasized : source,
                                        config.frame_len, config.hop);
    FrameSeries feature_frames = frame_signal(emphasized, config.frame_len, config.hop);
    if (out.detection_frames.size() > config.max_frames) {
        spdlog::warn("utterance has {} frames; analysing the first {}",
                     out.detection_frames.size(), config.max_frames);
        out.truncated = true;
        cap_frames(out.detection_frames, config.max_frames);
        cap_frames(feature_frames, config.max_frames);
    }
    if (out.detection_frames.empty()) {
        throw Error(ErrorKind::TooFewFrames, "utterance is shorter than one frame");
    }

    out.profile = compute_profile(out.detection_frames, config.energy_variant);
    if (config.calibrated) {
        out.thresholds = *config.calibrated;
    } else {
        out.thresholds = derive_thresholds(calibrate_noise(out.profile, config.noise_frames),
                                           config.threshold_params);
    }
    out.trace = trace_endpoints(out.profile, out.thresholds);
    out.features = extract_features(feature_frames, out.trace.segment(), config.features);
    return out;
}

KeyFeatures utterance_pattern(const SampleBuffer& buffer, const Config& config) {
    const UtteranceAnalysis analysis = analyze_utterance(buffer, config);
    try {
        return make_pattern(analysis.features, config.matcher_params());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::TooFewFrames || e.kind() == ErrorKind::TooFewFramesForM) {
            throw Error(ErrorKind::TooFewFramesForM,
                        "speech segment of " + std::to_string(analysis.features.frame_count()) +
                            " frames is too short for " + std::to_string(config.m) +
                            " key segments");
        }
        throw;
    }
}

MatchResult recognize(const SampleBuffer& buffer, std::span<const Template> templates,
                      const Config& config) {
    if (templates.empty()) {
        throw Error(ErrorKind::EmptyTemplateSet, "vocabulary is empty");
    }
    return match(utterance_pattern(buffer, config), templates,
                 config.effective_reject_threshold());
}

} // namespace voicepilot
