#include "voicepilot/cli.hpp"

#include "voicepilot/audio_io.hpp"
#include "voicepilot/config.hpp"
#include "voicepilot/endpoint_detector.hpp"
#include "voicepilot/evaluation.hpp"
#include "voicepilot/pipeline.hpp"
#include "voicepilot/servo_control.hpp"
#include "voicepilot/template_store.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

namespace voicepilot {

namespace {

constexpr const char* kDefaultConfigPath = "voicepilot.conf";

// Routes library warnings to the caller's error stream for the duration of a run.
class ScopedLogger {
public:
    ScopedLogger(std::ostream& err, spdlog::level::level_enum level)
        : previous_(spdlog::default_logger()) {
        auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
        sink->set_pattern("[%l] %v");
        auto logger = std::make_shared<spdlog::logger>("voicepilot", std::move(sink));
        logger->set_level(level);
        spdlog::set_default_logger(std::move(logger));
    }
    ~ScopedLogger() { spdlog::set_default_logger(previous_); }
    ScopedLogger(const ScopedLogger&) = delete;
    ScopedLogger& operator=(const ScopedLogger&) = delete;

private:
    std::shared_ptr<spdlog::logger> previous_;
};

std::string fmt_double(double v, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

struct GlobalOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string vocabulary;
    bool verbose = false;
};

Config resolve_config(const GlobalOptions& g, bool allow_missing_file) {
    Config config;
    const std::filesystem::path path = g.config_path.empty() ? kDefaultConfigPath : g.config_path;
    if (std::filesystem::exists(path)) {
        config = load_config(path);
    } else if (!g.config_path.empty() && !allow_missing_file) {
        throw Error(ErrorKind::IoFailure, "config file " + path.string() + " not found");
    }
    for (const auto& item : g.overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::InvalidConfig, "--set expects key=value, got '" + item + "'");
        }
        set_config_value(config, item.substr(0, eq), item.substr(eq + 1));
    }
    if (!g.vocabulary.empty()) {
        config.vocabulary = g.vocabulary;
    }
    validate(config);
    return config;
}

std::filesystem::path config_file_path(const GlobalOptions& g) {
    return g.config_path.empty() ? std::filesystem::path(kDefaultConfigPath)
                                 : std::filesystem::path(g.config_path);
}

// Re-tags an error with the file it came from.
[[noreturn]] void rethrow_for(const std::string& path, const Error& e) {
    throw Error(e.kind(), path + ": " + e.detail());
}

SurfaceState load_state(const Config& config) {
    std::ifstream in(config.state);
    if (!in) {
        return SurfaceState::neutral(config.step_deg);
    }
    std::string record;
    std::getline(in, record);
    return parse_state(record, config.step_deg);
}

void save_state(const Config& config, const SurfaceState& state) {
    std::ofstream out(config.state, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::IoFailure, "cannot write state file " + config.state.string());
    }
    out << format_state(state) << '\n';
}

int cmd_calibrate(const GlobalOptions& g, const std::string& wav, std::ostream& out) {
    const Config config = resolve_config(g, true);
    SampleBuffer buffer;
    try {
        buffer = load_audio(wav);
        if (config.quantize_10bit) {
            buffer = quantize_to_10_bits(buffer);
        }
    } catch (const Error& e) {
        rethrow_for(wav, e);
    }
    const SampleBuffer source =
        config.emphasize_before_detection ? pre_emphasize(buffer, config.alpha) : buffer;
    const FrameSeries frames = frame_signal(source, config.frame_len, config.hop);
    const ShortTimeProfile profile = compute_profile(frames, config.energy_variant);
    const NoiseProfile noise = calibrate_noise(profile, config.noise_frames);
    const Thresholds thr = derive_thresholds(noise, config.threshold_params);

    out << "noise mean_energy=" << fmt_double(noise.mean_energy)
        << " mean_zcr=" << fmt_double(noise.mean_zcr) << " frames=" << noise.frames_used << '\n'
        << "thresholds m1=" << fmt_double(thr.m1) << " m2=" << fmt_double(thr.m2)
        << " m3=" << fmt_double(thr.m3) << '\n';

    const auto path = config_file_path(g);
    update_config_file(path, {{"m1", fmt_double(thr.m1, 17)},
                              {"m2", fmt_double(thr.m2, 17)},
                              {"m3", fmt_double(thr.m3, 17)}});
    out << "thresholds saved to " << path.string() << '\n';
    return kExitOk;
}

int cmd_train(const GlobalOptions& g, const std::string& label, const std::vector<std::string>& wavs,
              std::ostream& out, std::ostream& err) {
    const Config config = resolve_config(g, false);
    if (wavs.size() != config.training_count) {
        err << "train needs exactly " << config.training_count << " recordings, got "
            << wavs.size() << '\n';
        return kExitUsage;
    }
    if (label.empty()) {
        err << "train needs a non-empty --label\n";
        return kExitUsage;
    }

    std::vector<LpccSequence> utterances;
    for (const auto& wav : wavs) {
        try {
            utterances.push_back(analyze_utterance(load_audio(wav), config).features);
        } catch (const Error& e) {
            rethrow_for(wav, e);
        }
    }

    Template tpl;
    try {
        tpl = train(utterances, label, config.matcher_params());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InconsistentTraining) {
            out << "training failed for '" << label << "': " << e.detail() << '\n'
                << "template not modified\n";
            return kExitNoSpeech;
        }
        throw;
    }

    Vocabulary vocabulary;
    if (std::filesystem::exists(config.vocabulary)) {
        vocabulary = Vocabulary(load_vocabulary(config.vocabulary));
    }
    vocabulary.upsert(std::move(tpl));
    save_vocabulary(*vocabulary.snapshot(), config.vocabulary);
    out << "'" << label << "' successfully modified (" << vocabulary.size()
        << " templates in " << config.vocabulary.string() << ")\n";
    return kExitOk;
}

int cmd_recognize(const GlobalOptions& g, const std::string& wav, bool actuate,
                  bool show_distances, const std::string& profile_csv,
                  const std::string& features_out, std::ostream& out) {
    const Config config = resolve_config(g, false);
    const auto templates = load_vocabulary(config.vocabulary);

    SampleBuffer buffer;
    UtteranceAnalysis analysis;
    try {
        buffer = load_audio(wav);
        analysis = analyze_utterance(buffer, config);
    } catch (const Error& e) {
        rethrow_for(wav, e);
    }
    if (!profile_csv.empty()) {
        std::ofstream csv(profile_csv, std::ios::trunc);
        write_profile_csv(csv, analysis.profile, analysis.thresholds);
    }
    if (!features_out.empty()) {
        std::ofstream dump(features_out, std::ios::trunc);
        dump << std::setprecision(9);
        for (const auto& v : analysis.features.vectors) {
            for (std::size_t i = 0; i < v.c.size(); ++i) {
                dump << (i ? " " : "") << v.c[i];
            }
            dump << '\n';
        }
    }

    const MatchResult result = recognize(buffer, templates, config);
    out << "segment frames=" << analysis.trace.e << ".." << analysis.trace.f << '\n';
    if (result.rejected()) {
        out << "rejected nearest=" << result.nearest << " distance=" << fmt_double(result.distance)
            << " threshold=" << fmt_double(config.effective_reject_threshold()) << '\n';
    } else {
        out << "label=" << *result.label << " distance=" << fmt_double(result.distance) << '\n';
    }
    if (show_distances) {
        for (const auto& [label, d] : result.all_distances) {
            out << "  " << label << ' ' << fmt_double(d) << '\n';
        }
    }
    if (result.rejected()) {
        return kExitNoSpeech;
    }

    if (actuate) {
        const auto cmd = parse_command(*result.label);
        if (!cmd) {
            spdlog::warn("label '{}' is not a control command; surfaces unchanged", *result.label);
        } else {
            const SurfaceState next = apply_command(load_state(config), *cmd, config.actuation_mode);
            save_state(config, next);
            out << format_state(next) << '\n';
        }
    }
    return kExitOk;
}

int cmd_evaluate(const GlobalOptions& g, const std::string& manifest_path,
                 const std::string& report_path, unsigned jobs, std::ostream& out) {
    const Config config = resolve_config(g, false);
    const auto templates = load_vocabulary(config.vocabulary);
    std::ifstream in(manifest_path);
    if (!in) {
        throw Error(ErrorKind::IoFailure, "cannot open manifest " + manifest_path);
    }
    const auto entries =
        parse_manifest(in, std::filesystem::path(manifest_path).parent_path());

    std::vector<TrialOutcome> outcomes;
    const EvalReport report = evaluate(entries, templates, config, jobs, &outcomes);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!outcomes[i].error.empty() && outcomes[i].error != "rejected") {
            spdlog::warn("{}: {}", entries[i].path.string(), outcomes[i].error);
        }
    }
    write_report_text(out, report);
    if (!report_path.empty()) {
        std::ofstream csv(report_path, std::ios::trunc);
        if (!csv) {
            throw Error(ErrorKind::IoFailure, "cannot write report " + report_path);
        }
        write_report_csv(csv, report);
    }
    return kExitOk;
}

int cmd_simulate(const GlobalOptions& g, const std::vector<std::string>& commands, bool fresh,
                 bool no_save, const std::string& waveform_csv, const std::string& channel_name,
                 int rate, int periods, std::ostream& out, std::ostream& err) {
    const Config config = resolve_config(g, true);
    std::vector<Command> parsed;
    for (const auto& text : commands) {
        const auto cmd = parse_command(text);
        if (!cmd) {
            err << "unknown command '" << text
                << "' (expected up, down, left_roll, right_roll, reset)\n";
            return kExitUsage;
        }
        parsed.push_back(*cmd);
    }
    SurfaceState state = fresh ? SurfaceState::neutral(config.step_deg) : load_state(config);
    out << "start " << format_state(state) << '\n';
    for (const Command cmd : parsed) {
        state = apply_command(state, cmd, config.actuation_mode);
        out << to_string(cmd) << ' ' << format_state(state) << '\n';
    }
    if (!no_save) {
        save_state(config, state);
    }
    if (!waveform_csv.empty()) {
        const PwmChannel* channel = nullptr;
        if (channel_name == "elevator") channel = &state.elevator.pwm;
        else if (channel_name == "left") channel = &state.left_aileron.pwm;
        else if (channel_name == "right") channel = &state.right_aileron.pwm;
        if (!channel) {
            err << "--channel must be elevator, left or right\n";
            return kExitUsage;
        }
        std::ofstream csv(waveform_csv, std::ios::trunc);
        write_waveform_csv(csv, render_pwm(*channel, rate, periods), rate);
    }
    return kExitOk;
}

int cmd_export(const GlobalOptions& g, const std::string& output, std::ostream& out) {
    const Config config = resolve_config(g, false);
    const auto templates = load_vocabulary(config.vocabulary);
    if (output.empty()) {
        export_text(templates, out);
        return kExitOk;
    }
    std::ofstream file(output, std::ios::trunc);
    if (!file) {
        throw Error(ErrorKind::IoFailure, "cannot write " + output);
    }
    export_text(templates, file);
    return kExitOk;
}

} // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidConfig:
        return kExitUsage;
    case ErrorKind::NoSpeech:
    case ErrorKind::TooFewFramesForM:
    case ErrorKind::InconsistentTraining:
    case ErrorKind::EmptyTemplateSet:
        return kExitNoSpeech;
    case ErrorKind::CorruptEntry:
    case ErrorKind::UnsupportedVersion:
        return kExitStoreCorrupt;
    default:
        return kExitInput;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Isolated-word voice command recognizer with a simulated servo back end",
                 "voicepilot"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("-c,--config", g.config_path,
                   "config file of key = value lines (default ./voicepilot.conf if present)");
    app.add_option("-s,--set", g.overrides, "override one config key, e.g. --set m=16");
    app.add_option("--vocabulary", g.vocabulary, "vocabulary file (overrides the config)");
    app.add_flag("-v,--verbose", g.verbose, "log informational messages");

    std::string calibrate_wav;
    auto* calibrate = app.add_subcommand("calibrate", "derive detection thresholds from room tone");
    calibrate->add_option("wav", calibrate_wav, "recording of background noise")->required();

    std::string train_label;
    std::vector<std::string> train_wavs;
    auto* train_cmd = app.add_subcommand("train", "build or replace one vocabulary template");
    train_cmd->add_option("-l,--label", train_label, "command label")->required();
    train_cmd->add_option("wavs", train_wavs, "training recordings")->required();

    std::string recognize_wav, profile_csv, features_out;
    bool actuate = false, show_distances = false;
    auto* recognize_cmd = app.add_subcommand("recognize", "recognize one recording");
    recognize_cmd->add_option("wav", recognize_wav, "recording to classify")->required();
    recognize_cmd->add_flag("--actuate", actuate, "apply the recognized command to the surfaces");
    recognize_cmd->add_flag("--distances", show_distances, "print the distance to every template");
    recognize_cmd->add_option("--profile-csv", profile_csv, "dump per-frame energy/zcr trace");
    recognize_cmd->add_option("--features-out", features_out, "dump per-frame cepstra");

    std::string manifest, report_path;
    unsigned jobs = 1;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "batch recognition over a manifest");
    evaluate_cmd->add_option("manifest", manifest, "lines of <path>,<true-label>")->required();
    evaluate_cmd->add_option("--report", report_path, "write the CSV report here");
    evaluate_cmd->add_option("-j,--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));

    std::vector<std::string> sim_commands;
    bool fresh = false, no_save = false;
    std::string waveform_csv, channel_name = "elevator";
    int pwm_rate = 100000, pwm_periods = 1;
    auto* simulate = app.add_subcommand("simulate", "apply commands to the control surfaces");
    simulate->add_option("commands", sim_commands, "up, down, left_roll, right_roll, reset");
    simulate->add_flag("--fresh", fresh, "start from the neutral state");
    simulate->add_flag("--no-save", no_save, "do not write the state file");
    simulate->add_option("--waveform-csv", waveform_csv, "render the final PWM of one channel");
    simulate->add_option("--channel", channel_name, "elevator, left or right");
    simulate->add_option("--rate", pwm_rate, "waveform sample rate (Hz)")
        ->check(CLI::Range(10000, 10000000));
    simulate->add_option("--periods", pwm_periods, "number of PWM periods")
        ->check(CLI::Range(0, 1000));

    std::string export_output;
    auto* export_cmd = app.add_subcommand("export-templates", "dump the vocabulary as text");
    export_cmd->add_option("-o,--output", export_output, "output file (default stdout)");

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    ScopedLogger logger(err, g.verbose ? spdlog::level::info : spdlog::level::warn);
    try {
        if (*calibrate) return cmd_calibrate(g, calibrate_wav, out);
        if (*train_cmd) return cmd_train(g, train_label, train_wavs, out, err);
        if (*recognize_cmd) {
            return cmd_recognize(g, recognize_wav, actuate, show_distances, profile_csv,
                                 features_out, out);
        }
        if (*evaluate_cmd) return cmd_evaluate(g, manifest, report_path, jobs, out);
        if (*simulate) {
            return cmd_simulate(g, sim_commands, fresh, no_save, waveform_csv, channel_name,
                                pwm_rate, pwm_periods, out, err);
        }
        if (*export_cmd) return cmd_export(g, export_output, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
    return kExitUsage;
}

} // namespace voicepilot
