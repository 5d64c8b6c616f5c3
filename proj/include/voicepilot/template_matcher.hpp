#pragma once

#include "voicepilot/lpcc_features.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace voicepilot {

inline constexpr std::size_t kDefaultKeySegments = 8;
// Default rejection distance per key segment (L1 over unit-norm columns).
inline constexpr double kDefaultRejectPerSegment = 2.5;

// Cepstral frames scaled to unit Euclidean norm (all-zero frames stay zero).
// Logically a p x N matrix; stored as N columns of p values.
struct NormalizedFeatures {
    std::vector<std::vector<double>> columns;

    std::size_t frame_count() const { return columns.size(); }
    std::size_t order() const { return columns.empty() ? 0 : columns.front().size(); }
    double at(std::size_t coeff, std::size_t frame) const { return columns[frame][coeff]; }
};

// Adjacent-frame L1 differences. After trimming, t holds the first
// trimmed_len - 1 differences; mean_t is always the untrimmed average.
struct DiffTrace {
    std::vector<double> t;
    double mean_t = 0.0;
    std::size_t trimmed_len = 0;
    double delta = 0.0;
};

// p x M matrix of per-segment summaries, stored segment-major
// (values[k * order + i] is coefficient i of segment k).
class KeyFeatures {
public:
    KeyFeatures() = default;
    KeyFeatures(std::size_t order, std::size_t segments)
        : order_(order), segments_(segments), values_(order * segments, 0.0) {}

    std::size_t order() const { return order_; }
    std::size_t segments() const { return segments_; }

    double& at(std::size_t coeff, std::size_t segment) { return values_[segment * order_ + coeff]; }
    double at(std::size_t coeff, std::size_t segment) const {
        return values_[segment * order_ + coeff];
    }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    bool operator==(const KeyFeatures&) const = default;

private:
    std::size_t order_ = 0;
    std::size_t segments_ = 0;
    std::vector<double> values_;
};

struct Template {
    std::string label;
    KeyFeatures features;
    unsigned trained_from = 1;

    bool operator==(const Template&) const = default;
};

struct MatchResult {
    std::optional<std::string> label; // empty when rejected
    double distance = 0.0;            // best distance, reported even on rejection
    std::string nearest;              // label at `distance`
    std::map<std::string, double> all_distances;

    bool rejected() const { return !label.has_value(); }
};

// How a segment between consecutive key frames is summarized.
//   FeatureMean: mean normalized cepstral column (p values per segment)
//   DiffMean   : mean adjacent-frame difference (1 value per segment)
enum class SegmentSummary { FeatureMean, DiffMean };

struct MatcherParams {
    std::size_t m = kDefaultKeySegments;
    SegmentSummary summary = SegmentSummary::FeatureMean;
    double reject_threshold = kDefaultRejectPerSegment * static_cast<double>(kDefaultKeySegments);
    // Falls back to reject_threshold when unset.
    std::optional<double> consistency_limit;
    std::size_t training_count = 4;

    double effective_consistency_limit() const {
        return consistency_limit.value_or(reject_threshold);
    }
};

// Throws Error{TooFewFrames} for fewer than two frames.
NormalizedFeatures normalize(const LpccSequence& features);

DiffTrace frame_diffs(const NormalizedFeatures& s);

// Drops trailing differences larger than the untrimmed mean, never leaving
// fewer than m + 1 frames.
DiffTrace trim_tail(const DiffTrace& trace, std::size_t m);

// Sum of the (trimmed) differences divided by m. Throws
// Error{TooFewFramesForM} when m > trimmed_len - 1.
double delta_threshold(const DiffTrace& trace, std::size_t m);

// Exactly m ascending frame indices, the first being 0. A new key frame is
// taken once the running difference sum since the last key reaches delta.
// If the trace runs out first, the remaining keys repeat the last frame.
std::vector<std::size_t> select_key_frames(const DiffTrace& trace, std::size_t m, double delta);

// Segment k covers frames [keys[k], keys[k+1]); the last one ends at
// trimmed_len - 1 inclusive. A zero-width segment (repeated key) uses the key
// frame itself.
Template build_template(const NormalizedFeatures& s, std::span<const std::size_t> keys,
                        std::string label, std::size_t trimmed_len);

// Alternative 1 x M summary: mean difference t(j) within each segment.
KeyFeatures summarize_differences(const DiffTrace& trace, std::span<const std::size_t> keys);

// Full reduction of one utterance to an M-segment matrix.
KeyFeatures make_pattern(const LpccSequence& features, const MatcherParams& params);

// L1 distance over the whole matrix. Throws Error{MixedDimensions} when the
// shapes differ.
double template_distance(const KeyFeatures& lhs, const KeyFeatures& rhs);

// Builds one candidate per utterance; fails with Error{InconsistentTraining}
// when any two candidates are farther apart than the consistency limit,
// otherwise stores their element-wise mean.
Template train(std::span<const LpccSequence> utterances, const std::string& label,
               const MatcherParams& params);

// Nearest template by L1 distance; ties go to the lexicographically smallest
// label. Rejected when the best distance exceeds reject_threshold.
MatchResult match(const KeyFeatures& query, std::span<const Template> templates,
                  double reject_threshold);

// Copy-on-update template set: readers hold an immutable snapshot while a
// writer publishes a new one.
class Vocabulary {
public:
    using Snapshot = std::shared_ptr<const std::vector<Template>>;

    Vocabulary();
    explicit Vocabulary(std::vector<Template> templates);

    Snapshot snapshot() const { return std::atomic_load(&current_); }

    // Inserts or replaces by label. Throws Error{MixedDimensions} when the
    // template's shape disagrees with the existing entries.
    void upsert(Template tpl);

    std::size_t size() const { return snapshot()->size(); }

private:
    Snapshot current_;
};

} // namespace voicepilot
