#include "voicepilot/config.hpp"

#include "voicepilot/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace voicepilot {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

Error bad_value(std::string_view key, std::string_view value) {
    return Error(ErrorKind::InvalidConfig,
                 "bad value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view value) {
    const std::string text(value);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw bad_value(key, value);
    }
    if (used != text.size()) {
        throw bad_value(key, value);
    }
    return v;
}

std::size_t to_size(std::string_view key, std::string_view value) {
    std::size_t v = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw bad_value(key, value);
    }
    return v;
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw bad_value(key, value);
}

Thresholds& calibrated(Config& c) {
    if (!c.calibrated) {
        c.calibrated = Thresholds{};
    }
    return *c.calibrated;
}

void invalid(const std::string& why) { throw Error(ErrorKind::InvalidConfig, why); }

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

MatcherParams Config::matcher_params() const {
    MatcherParams p;
    p.m = m;
    p.summary = summary;
    p.reject_threshold = effective_reject_threshold();
    p.consistency_limit = consistency_limit;
    p.training_count = training_count;
    return p;
}

void set_config_value(Config& c, std::string_view key, std::string_view raw) {
    const std::string value = trim(raw);
    if (key == "frame_len") c.frame_len = to_size(key, value);
    else if (key == "hop") c.hop = to_size(key, value);
    else if (key == "alpha") c.alpha = to_double(key, value);
    else if (key == "quantize_10bit") c.quantize_10bit = to_bool(key, value);
    else if (key == "emphasize_before_detection") c.emphasize_before_detection = to_bool(key, value);
    else if (key == "max_frames") c.max_frames = to_size(key, value);
    else if (key == "energy_variant") {
        if (value == "square") c.energy_variant = EnergyVariant::Square;
        else if (value == "abs_sum") c.energy_variant = EnergyVariant::AbsSum;
        else if (value == "log_guarded") c.energy_variant = EnergyVariant::LogGuarded;
        else throw bad_value(key, value);
    }
    else if (key == "k1") c.threshold_params.k1 = to_double(key, value);
    else if (key == "k2") c.threshold_params.k2 = to_double(key, value);
    else if (key == "k3") c.threshold_params.k3 = to_double(key, value);
    else if (key == "floor") c.threshold_params.floor = to_double(key, value);
    else if (key == "noise_frames") c.noise_frames = to_size(key, value);
    else if (key == "m1") calibrated(c).m1 = to_double(key, value);
    else if (key == "m2") calibrated(c).m2 = to_double(key, value);
    else if (key == "m3") calibrated(c).m3 = to_double(key, value);
    else if (key == "p") c.features.order = to_size(key, value);
    else if (key == "window") {
        if (value == "hamming") c.features.window = WindowKind::Hamming;
        else if (value == "rectangular") c.features.window = WindowKind::Rectangular;
        else throw bad_value(key, value);
    }
    else if (key == "m") c.m = to_size(key, value);
    else if (key == "segment_summary") {
        if (value == "feature_mean") c.summary = SegmentSummary::FeatureMean;
        else if (value == "diff_mean") c.summary = SegmentSummary::DiffMean;
        else throw bad_value(key, value);
    }
    else if (key == "reject_threshold") c.reject_threshold = to_double(key, value);
    else if (key == "consistency_limit") c.consistency_limit = to_double(key, value);
    else if (key == "training_count") c.training_count = to_size(key, value);
    else if (key == "step_deg") c.step_deg = to_double(key, value);
    else if (key == "actuation_mode") {
        if (value == "incremental") c.actuation_mode = ActuationMode::Incremental;
        else if (value == "absolute") c.actuation_mode = ActuationMode::Absolute;
        else throw bad_value(key, value);
    }
    else if (key == "vocabulary") c.vocabulary = value;
    else if (key == "state") c.state = value;
    else throw Error(ErrorKind::InvalidConfig, "unknown key '" + std::string(key) + "'");
}

void validate(const Config& c) {
    if (c.frame_len < 1 || c.hop < 1) invalid("frame_len and hop must be positive");
    if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) invalid("alpha must lie in [0, 1]");
    if (c.max_frames < 1) invalid("max_frames must be positive");
    const auto& t = c.threshold_params;
    if (!(t.k1 > 1.0) || !(t.k2 >= 1.0) || !(t.k3 >= 1.0) || !(t.floor > 0.0)) {
        invalid("threshold multipliers need k1 > 1, k2 >= 1, k3 >= 1, floor > 0");
    }
    if (c.noise_frames < 1 || c.noise_frames > c.max_frames) {
        invalid("noise_frames must lie in [1, max_frames]");
    }
    if (c.calibrated) {
        const auto& th = *c.calibrated;
        if (!(th.m2 > 0.0) || !(th.m1 > th.m2) || !(th.m3 > 0.0)) {
            invalid("calibrated thresholds need m1 > m2 > 0 and m3 > 0");
        }
    }
    if (c.features.order < 1 || c.features.order > kMaxLpcOrder) invalid("p must lie in [1, 24]");
    if (c.features.order >= c.frame_len) invalid("p must be smaller than frame_len");
    if (c.m < 2) invalid("m must be at least 2");
    if (c.reject_threshold && !(*c.reject_threshold > 0.0)) invalid("reject_threshold must be > 0");
    if (c.consistency_limit && !(*c.consistency_limit > 0.0)) {
        invalid("consistency_limit must be > 0");
    }
    if (c.training_count < 2 || c.training_count > 255) {
        invalid("training_count must lie in [2, 255]");
    }
    if (!(c.step_deg > 0.0 && c.step_deg <= kServoSpanDeg)) invalid("step_deg must lie in (0, 180]");
}

Config parse_config(std::istream& in) {
    Config c;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::InvalidConfig,
                        "line " + std::to_string(line_no) + ": expected key = value");
        }
        set_config_value(c, trim(std::string_view(body).substr(0, eq)),
                         std::string_view(body).substr(eq + 1));
    }
    validate(c);
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoFailure, "cannot open config " + path.string());
    }
    return parse_config(in);
}

std::string dump_config(const Config& c) {
    std::ostringstream os;
    const auto variant = [&] {
        switch (c.energy_variant) {
        case EnergyVariant::Square: return "square";
        case EnergyVariant::AbsSum: return "abs_sum";
        case EnergyVariant::LogGuarded: return "log_guarded";
        }
        return "abs_sum";
    }();
    os << "frame_len = " << c.frame_len << '\n'
       << "hop = " << c.hop << '\n'
       << "alpha = " << fmt_double(c.alpha) << '\n'
       << "quantize_10bit = " << (c.quantize_10bit ? "true" : "false") << '\n'
       << "emphasize_before_detection = " << (c.emphasize_before_detection ? "true" : "false")
       << '\n'
       << "max_frames = " << c.max_frames << '\n'
       << "energy_variant = " << variant << '\n'
       << "k1 = " << fmt_double(c.threshold_params.k1) << '\n'
       << "k2 = " << fmt_double(c.threshold_params.k2) << '\n'
       << "k3 = " << fmt_double(c.threshold_params.k3) << '\n'
       << "floor = " << fmt_double(c.threshold_params.floor) << '\n'
       << "noise_frames = " << c.noise_frames << '\n';
    if (c.calibrated) {
        os << "m1 = " << fmt_double(c.calibrated->m1) << '\n'
           << "m2 = " << fmt_double(c.calibrated->m2) << '\n'
           << "m3 = " << fmt_double(c.calibrated->m3) << '\n';
    }
    os << "p = " << c.features.order << '\n'
       << "window = " << (c.features.window == WindowKind::Hamming ? "hamming" : "rectangular")
       << '\n'
       << "m = " << c.m << '\n'
       << "segment_summary = "
       << (c.summary == SegmentSummary::FeatureMean ? "feature_mean" : "diff_mean") << '\n'
       << "reject_threshold = " << fmt_double(c.effective_reject_threshold()) << '\n'
       << "consistency_limit = "
       << fmt_double(c.consistency_limit.value_or(c.effective_reject_threshold())) << '\n'
       << "training_count = " << c.training_count << '\n'
       << "step_deg = " << fmt_double(c.step_deg) << '\n'
       << "actuation_mode = "
       << (c.actuation_mode == ActuationMode::Incremental ? "incremental" : "absolute") << '\n'
       << "vocabulary = " << c.vocabulary.string() << '\n'
       << "state = " << c.state.string() << '\n';
    return os.str();
}

void update_config_file(const std::filesystem::path& path,
                        std::initializer_list<std::pair<std::string, std::string>> entries) {
    std::vector<std::string> lines;
    if (std::ifstream in(path); in) {
        for (std::string line; std::getline(in, line);) {
            lines.push_back(line);
        }
    }
    for (const auto& [key, value] : entries) {
        const std::string replacement = key + " = " + value;
        bool replaced = false;
        for (auto& line : lines) {
            const std::string body = trim(std::string_view(line).substr(0, line.find('#')));
            const auto eq = body.find('=');
            if (eq != std::string::npos && trim(std::string_view(body).substr(0, eq)) == key) {
                line = replacement;
                replaced = true;
            }
        }
        if (!replaced) {
            lines.push_back(replacement);
        }
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::IoFailure, "cannot write " + tmp.string());
        }
        for (const auto& line : lines) {
            out << line << '\n';
        }
        if (!out) {
            throw Error(ErrorKind::IoFailure, "cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw Error(ErrorKind::IoFailure, "cannot replace " + path.string());
    }
}

} // namespace voicepilot
