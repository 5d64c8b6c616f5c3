#pragma once

#include "voicepilot/config.hpp"
#include "voicepilot/template_matcher.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace voicepilot {

inline constexpr const char* kRejectedColumn = "<rejected>";

struct ManifestEntry {
    std::filesystem::path path;
    std::string label;
};

// Lines are `<path>,<true-label>`; blank lines and '#' comments are skipped.
// The label is whatever follows the last comma. Relative paths resolve
// against base_dir. Throws Error{InvalidArgument} on malformed lines.
std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir);

// Per-file outcome. predicted is empty when the file was rejected or failed.
struct TrialOutcome {
    std::optional<std::string> predicted;
    double distance = 0.0;
    std::string error;
};

struct LabelStats {
    std::size_t trials = 0;
    std::size_t correct = 0;
    std::size_t rejected = 0;
    // predicted label (or kRejectedColumn) -> count
    std::map<std::string, std::size_t> confusion;
};

struct EvalReport {
    std::vector<std::string> labels; // sorted vocabulary labels
    std::map<std::string, LabelStats> per_label;
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t rejected = 0;

    std::optional<double> overall_rate() const;
    std::optional<double> rate(const std::string& label) const;
};

// Throws Error{InvalidArgument} if any manifest label is missing from labels.
void check_manifest_labels(std::span<const ManifestEntry> entries,
                           std::span<const std::string> labels);

EvalReport build_report(std::span<const ManifestEntry> entries,
                        std::span<const TrialOutcome> outcomes, std::vector<std::string> labels);

// Recognizes every entry (on up to `jobs` threads) and assembles the report
// in manifest order. Per-file failures count as rejections.
EvalReport evaluate(std::span<const ManifestEntry> entries, std::span<const Template> templates,
                    const Config& config, unsigned jobs = 1,
                    std::vector<TrialOutcome>* outcomes_out = nullptr);

void write_report_text(std::ostream& out, const EvalReport& report);

// One row per true label: true_label,trials,correct,rejected,rate,<labels...>,<rejected>
// followed by an `overall` row.
void write_report_csv(std::ostream& out, const EvalReport& report);

} // namespace voicepilot
