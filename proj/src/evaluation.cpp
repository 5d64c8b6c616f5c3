#include "voicepilot/evaluation.hpp"

#include "voicepilot/audio_io.hpp"
#include "voicepilot/error.hpp"
#include "voicepilot/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <thread>

namespace voicepilot {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::string percent(std::optional<double> rate) {
    if (!rate) {
        return "n/a";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * *rate);
    return buf;
}

std::string fraction(std::optional<double> rate) {
    if (!rate) {
        return "n/a";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", *rate);
    return buf;
}

TrialOutcome run_trial(const ManifestEntry& entry, std::span<const Template> templates,
                       const Config& config) {
    TrialOutcome outcome;
    try {
        const MatchResult result = recognize(load_audio(entry.path), templates, config);
        outcome.predicted = result.label;
        outcome.distance = result.distance;
        if (result.rejected()) {
            outcome.error = "rejected";
        }
    } catch (const Error& e) {
        outcome.error = e.what();
    }
    return outcome;
}

} // namespace

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const auto comma = body.rfind(',');
        if (comma == std::string::npos) {
            throw Error(ErrorKind::InvalidArgument,
                        "manifest line " + std::to_string(line_no) + ": expected <path>,<label>");
        }
        ManifestEntry entry;
        entry.path = trim(body.substr(0, comma));
        entry.label = trim(body.substr(comma + 1));
        if (entry.path.empty() || entry.label.empty()) {
            throw Error(ErrorKind::InvalidArgument,
                        "manifest line " + std::to_string(line_no) + ": empty path or label");
        }
        if (entry.path.is_relative()) {
            entry.path = base_dir / entry.path;
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::optional<double> EvalReport::overall_rate() const {
    if (total == 0) {
        return std::nullopt;
    }
    return static_cast<double>(correct) / static_cast<double>(total);
}

std::optional<double> EvalReport::rate(const std::string& label) const {
    const auto it = per_label.find(label);
    if (it == per_label.end() || it->second.trials == 0) {
        return std::nullopt;
    }
    return static_cast<double>(it->second.correct) / static_cast<double>(it->second.trials);
}

void check_manifest_labels(std::span<const ManifestEntry> entries,
                           std::span<const std::string> labels) {
    const std::set<std::string> known(labels.begin(), labels.end());
    for (const auto& e : entries) {
        if (!known.contains(e.label)) {
            throw Error(ErrorKind::InvalidArgument, "manifest label '" + e.label + "' (" +
                                                        e.path.string() +
                                                        ") is not in the vocabulary");
        }
    }
}

EvalReport build_report(std::span<const ManifestEntry> entries,
                        std::span<const TrialOutcome> outcomes, std::vector<std::string> labels) {
    if (entries.size() != outcomes.size()) {
        throw Error(ErrorKind::InvalidArgument, "one outcome per manifest entry is required");
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    EvalReport report;
    report.labels = std::move(labels);
    for (const auto& label : report.labels) {
        report.per_label[label];
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        LabelStats& stats = report.per_label[entries[i].label];
        const auto& predicted = outcomes[i].predicted;
        ++stats.trials;
        ++report.total;
        if (!predicted) {
            ++stats.rejected;
            ++report.rejected;
            ++stats.confusion[kRejectedColumn];
            continue;
        }
        ++stats.confusion[*predicted];
        if (*predicted == entries[i].label) {
            ++stats.correct;
            ++report.correct;
        }
    }
    return report;
}

EvalReport evaluate(std::span<const ManifestEntry> entries, std::span<const Template> templates,
                    const Config& config, unsigned jobs, std::vector<TrialOutcome>* outcomes_out) {
    std::vector<std::string> labels;
    for (const auto& t : templates) {
        labels.push_back(t.label);
    }
    check_manifest_labels(entries, labels);

    std::vector<TrialOutcome> outcomes(entries.size());
    const unsigned workers =
        std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(entries.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            outcomes[i] = run_trial(entries[i], templates, config);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < entries.size(); i = next++) {
                    outcomes[i] = run_trial(entries[i], templates, config);
                }
            });
        }
    }
    if (outcomes_out) {
        *outcomes_out = outcomes;
    }
    return build_report(entries, outcomes, std::move(labels));
}

void write_report_text(std::ostream& out, const EvalReport& report) {
    out << "label                trials  correct  rejected  rate\n";
    for (const auto& label : report.labels) {
        const LabelStats& s = report.per_label.at(label);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-20s %6zu  %7zu  %8zu  %s\n", label.c_str(), s.trials,
                      s.correct, s.rejected, percent(report.rate(label)).c_str());
        out << buf;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-20s %6zu  %7zu  %8zu  %s\n", "overall", report.total,
                  report.correct, report.rejected, percent(report.overall_rate()).c_str());
    out << buf;

    out << "\nconfusion (rows: true label, columns: recognized)\n";
    out << "true\\recognized";
    for (const auto& label : report.labels) {
        out << '\t' << label;
    }
    out << '\t' << kRejectedColumn << '\n';
    for (const auto& label : report.labels) {
        const LabelStats& s = report.per_label.at(label);
        out << label;
        for (const auto& column : report.labels) {
            const auto it = s.confusion.find(column);
            out << '\t' << (it == s.confusion.end() ? 0 : it->second);
        }
        out << '\t' << s.rejected << '\n';
    }
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
    out << "true_label,trials,correct,rejected,rate";
    for (const auto& label : report.labels) {
        out << ',' << label;
    }
    out << ',' << kRejectedColumn << '\n';
    for (const auto& label : report.labels) {
        const LabelStats& s = report.per_label.at(label);
        out << label << ',' << s.trials << ',' << s.correct << ',' << s.rejected << ','
            << fraction(report.rate(label));
        for (const auto& column : report.labels) {
            const auto it = s.confusion.find(column);
            out << ',' << (it == s.confusion.end() ? 0 : it->second);
        }
        out << ',' << s.rejected << '\n';
    }
    out << "overall," << report.total << ',' << report.correct << ',' << report.rejected << ','
        << fraction(report.overall_rate());
    for (const auto& column : report.labels) {
        std::size_t sum = 0;
        for (const auto& label : report.labels) {
            const auto& confusion = report.per_label.at(label).confusion;
            const auto it = confusion.find(column);
            sum += it == confusion.end() ? 0 : it->second;
        }
        out << ',' << sum;
    }
    out << ',' << report.rejected << '\n';
}

} // namespace voicepilot
