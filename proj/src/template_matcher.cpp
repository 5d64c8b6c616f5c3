#include "voicepilot/template_matcher.hpp"

#include "voicepilot/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace voicepilot {

namespace {

// Running sums of identical differences can land one ulp short of delta.
constexpr double kCrossingSlack = 1e-12;

void check_same_shape(const KeyFeatures& lhs, const KeyFeatures& rhs) {
    if (lhs.order() != rhs.order() || lhs.segments() != rhs.segments()) {
        throw Error(ErrorKind::MixedDimensions,
                    std::to_string(lhs.order()) + "x" + std::to_string(lhs.segments()) + " vs " +
                        std::to_string(rhs.order()) + "x" + std::to_string(rhs.segments()));
    }
}

} // namespace

NormalizedFeatures normalize(const LpccSequence& features) {
    if (features.frame_count() < 2) {
        throw Error(ErrorKind::TooFewFrames, "matching needs at least two speech frames, got " +
                                                 std::to_string(features.frame_count()));
    }
    NormalizedFeatures s;
    s.columns.reserve(features.frame_count());
    for (const auto& v : features.vectors) {
        double norm = 0.0;
        for (double x : v.c) {
            norm += x * x;
        }
        norm = std::sqrt(norm);
        std::vector<double> column(v.c);
        if (norm > 0.0) {
            for (double& x : column) {
                x /= norm;
            }
        }
        s.columns.push_back(std::move(column));
    }
    return s;
}

DiffTrace frame_diffs(const NormalizedFeatures& s) {
    const std::size_t n = s.frame_count();
    if (n < 2) {
        throw Error(ErrorKind::TooFewFrames, "differences need at least two frames");
    }
    DiffTrace trace;
    trace.t.reserve(n - 1);
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        double d = 0.0;
        for (std::size_t i = 0; i < s.order(); ++i) {
            d += std::abs(s.columns[j][i] - s.columns[j + 1][i]);
        }
        trace.t.push_back(d);
        total += d;
    }
    trace.mean_t = total / static_cast<double>(n - 1);
    trace.trimmed_len = n;
    return trace;
}

DiffTrace trim_tail(const DiffTrace& trace, std::size_t m) {
    DiffTrace out = trace;
    while (!out.t.empty() && out.t.back() > out.mean_t) {
        if (out.t.size() <= m) {
            spdlog::warn("tail trimming stopped at the {}-frame guard", m + 1);
            break;
        }
        out.t.pop_back();
    }
    out.trimmed_len = out.t.size() + 1;
    return out;
}

double delta_threshold(const DiffTrace& trace, std::size_t m) {
    if (m == 0 || trace.trimmed_len == 0 || m > trace.trimmed_len - 1 ||
        trace.t.size() < trace.trimmed_len - 1) {
        throw Error(ErrorKind::TooFewFramesForM,
                    std::to_string(m) + " key frames need at least " + std::to_string(m + 1) +
                        " frames, have " + std::to_string(trace.trimmed_len));
    }
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < trace.trimmed_len; ++j) {
        sum += trace.t[j];
    }
    return sum / static_cast<double>(m);
}

std::vector<std::size_t> select_key_frames(const DiffTrace& trace, std::size_t m, double delta) {
    if (m < 1) {
        throw Error(ErrorKind::InvalidArgument, "at least one key frame is required");
    }
    std::vector<std::size_t> keys{0};
    keys.reserve(m);
    const std::size_t usable =
        std::min(trace.trimmed_len > 0 ? trace.trimmed_len - 1 : 0, trace.t.size());
    const double reach = delta * (1.0 - kCrossingSlack);
    double acc = 0.0;
    for (std::size_t i = 0; i < usable && keys.size() < m; ++i) {
        acc += trace.t[i];
        if (acc >= reach) {
            keys.push_back(i + 1);
            acc = 0.0;
        }
    }
    if (keys.size() < m) {
        spdlog::warn("only {} of {} key frames found; padding with the last frame", keys.size(), m);
        const std::size_t last = usable;
        keys.resize(m, last);
    }
    return keys;
}

Template build_template(const NormalizedFeatures& s, std::span<const std::size_t> keys,
                        std::string label, std::size_t trimmed_len) {
    if (keys.empty() || keys.front() != 0 || !std::is_sorted(keys.begin(), keys.end()) ||
        trimmed_len == 0 || trimmed_len > s.frame_count() || keys.back() >= trimmed_len) {
        throw Error(ErrorKind::InvalidArgument, "key frames must be sorted, start at 0 and lie "
                                                "inside the trimmed utterance");
    }
    const std::size_t m = keys.size();
    const std::size_t p = s.order();
    Template tpl;
    tpl.label = std::move(label);
    tpl.features = KeyFeatures(p, m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t first = keys[k];
        std::size_t last = (k + 1 < m) ? keys[k + 1] : trimmed_len; // exclusive
        if (last <= first) {
            last = first + 1;
        }
        const double count = static_cast<double>(last - first);
        for (std::size_t i = 0; i < p; ++i) {
            double sum = 0.0;
            for (std::size_t j = first; j < last; ++j) {
                sum += s.columns[j][i];
            }
            tpl.features.at(i, k) = sum / count;
        }
    }
    return tpl;
}

KeyFeatures summarize_differences(const DiffTrace& trace, std::span<const std::size_t> keys) {
    const std::size_t m = keys.size();
    const std::size_t usable =
        std::min(trace.trimmed_len > 0 ? trace.trimmed_len - 1 : 0, trace.t.size());
    KeyFeatures out(1, m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t first = keys[k];
        const std::size_t last = std::min((k + 1 < m) ? keys[k + 1] : usable, usable);
        if (last <= first) {
            continue;
        }
        double sum = 0.0;
        for (std::size_t j = first; j < last; ++j) {
            sum += trace.t[j];
        }
        out.at(0, k) = sum / static_cast<double>(last - first);
    }
    return out;
}

KeyFeatures make_pattern(const LpccSequence& features, const MatcherParams& params) {
    const NormalizedFeatures s = normalize(features);
    DiffTrace trace = trim_tail(frame_diffs(s), params.m);
    trace.delta = delta_threshold(trace, params.m);
    const auto keys = select_key_frames(trace, params.m, trace.delta);
    if (params.summary == SegmentSummary::DiffMean) {
        return summarize_differences(trace, keys);
    }
    return build_template(s, keys, {}, trace.trimmed_len).features;
}

double template_distance(const KeyFeatures& lhs, const KeyFeatures& rhs) {
    check_same_shape(lhs, rhs);
    double d = 0.0;
    const auto a = lhs.values();
    const auto b = rhs.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += std::abs(a[i] - b[i]);
    }
    return d;
}

Template train(std::span<const LpccSequence> utterances, const std::string& label,
               const MatcherParams& params) {
    if (params.training_count < 2 || utterances.size() != params.training_count) {
        throw Error(ErrorKind::InvalidArgument,
                    "training needs exactly " + std::to_string(params.training_count) +
                        " utterances, got " + std::to_string(utterances.size()));
    }
    std::vector<KeyFeatures> candidates;
    candidates.reserve(utterances.size());
    for (const auto& u : utterances) {
        candidates.push_back(make_pattern(u, params));
    }

    const double limit = params.effective_consistency_limit();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            const double d = template_distance(candidates[i], candidates[j]);
            if (d > limit) {
                throw Error(ErrorKind::InconsistentTraining,
                            "utterances " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " of '" + label + "' differ by " +
                                std::to_string(d) + " (limit " + std::to_string(limit) + ")");
            }
        }
    }

    Template tpl;
    tpl.label = label;
    tpl.trained_from = static_cast<unsigned>(candidates.size());
    tpl.features = KeyFeatures(candidates.front().order(), candidates.front().segments());
    auto mean = tpl.features.values();
    for (const auto& c : candidates) {
        const auto v = c.values();
        for (std::size_t i = 0; i < mean.size(); ++i) {
            mean[i] += v[i];
        }
    }
    for (double& x : mean) {
        x /= static_cast<double>(candidates.size());
    }
    return tpl;
}

MatchResult match(const KeyFeatures& query, std::span<const Template> templates,
                  double reject_threshold) {
    if (templates.empty()) {
        throw Error(ErrorKind::EmptyTemplateSet, "no templates to match against");
    }
    MatchResult result;
    for (const auto& tpl : templates) {
        result.all_distances[tpl.label] = template_distance(query, tpl.features);
    }
    // std::map iterates in label order, so strict < keeps the smallest label on ties.
    bool first = true;
    for (const auto& [label, d] : result.all_distances) {
        if (first || d < result.distance) {
            result.distance = d;
            result.nearest = label;
            first = false;
        }
    }
    if (result.distance <= reject_threshold) {
        result.label = result.nearest;
    }
    return result;
}

Vocabulary::Vocabulary() : current_(std::make_shared<const std::vector<Template>>()) {}

Vocabulary::Vocabulary(std::vector<Template> templates)
    : current_(std::make_shared<const std::vector<Template>>(std::move(templates))) {}

void Vocabulary::upsert(Template tpl) {
    auto next = std::make_shared<std::vector<Template>>(*snapshot());
    for (const auto& existing : *next) {
        if (existing.label != tpl.label) {
            check_same_shape(existing.features, tpl.features);
        }
    }
    auto it = std::find_if(next->begin(), next->end(),
                           [&](const Template& t) { return t.label == tpl.label; });
    if (it != next->end()) {
        *it = std::move(tpl);
    } else {
        next->push_back(std::move(tpl));
    }
    std::sort(next->begin(), next->end(),
              [](const Template& a, const Template& b) { return a.label < b.label; });
    std::atomic_store(&current_, Snapshot(std::move(next)));
}

} // namespace voicepilot
