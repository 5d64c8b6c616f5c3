#pragma once

#include "voicepilot/endpoint_detector.hpp"
#include "voicepilot/lpcc_features.hpp"
#include "voicepilot/servo_control.hpp"
#include "voicepilot/template_matcher.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace voicepilot {

// Every tunable of the pipeline. The text form is one `key = value` per line;
// '#' starts a comment. Unknown keys are rejected.
struct Config {
    // framing and front end
    std::size_t frame_len = 256;
    std::size_t hop = 256;
    double alpha = 0.95;
    bool quantize_10bit = false;
    bool emphasize_before_detection = false;
    std::size_t max_frames = 62;

    // endpoint detection
    EnergyVariant energy_variant = EnergyVariant::AbsSum;
    ThresholdParams threshold_params;
    std::size_t noise_frames = 10;
    // Set by `calibrate`; when absent each utterance calibrates on its own
    // leading frames.
    std::optional<Thresholds> calibrated;

    // features and matching
    FeatureParams features;
    std::size_t m = kDefaultKeySegments;
    SegmentSummary summary = SegmentSummary::FeatureMean;
    std::optional<double> reject_threshold; // default 2.5 per segment
    std::optional<double> consistency_limit; // default reject_threshold
    std::size_t training_count = 4;

    // actuation
    double step_deg = 15.0;
    ActuationMode actuation_mode = ActuationMode::Incremental;

    // paths
    std::filesystem::path vocabulary = "vocabulary.avtp";
    std::filesystem::path state = "surface.state";

    double effective_reject_threshold() const {
        return reject_threshold.value_or(kDefaultRejectPerSegment * static_cast<double>(m));
    }
    MatcherParams matcher_params() const;
};

// Throws Error{InvalidConfig} for unknown keys or unparsable values.
void set_config_value(Config& config, std::string_view key, std::string_view value);

// Throws Error{InvalidConfig} when a value is outside its module's range.
void validate(const Config& config);

Config parse_config(std::istream& in);
Config load_config(const std::filesystem::path& path);

// Full `key = value` listing of the effective configuration.
std::string dump_config(const Config& config);

// Rewrites (or creates) a config file so it carries the given keys, keeping
// any other lines untouched.
void update_config_file(const std::filesystem::path& path,
                        std::initializer_list<std::pair<std::string, std::string>> entries);

} // namespace voicepilot
