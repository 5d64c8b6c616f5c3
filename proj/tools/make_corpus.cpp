// Writes a synthetic command corpus: per word, `--train` training renditions
// and `--test` noisy test renditions, plus manifest CSVs and a room-tone file.

#include "corpus/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace voicepilot;

namespace {

std::string slug(std::string label) {
    for (char& c : label) {
        if (c == ' ') c = '_';
    }
    return label;
}

} // namespace

int main(int argc, char* argv[]) {
    CLI::App app{"Synthesize a command-word corpus for voicepilot"};
    std::string out_dir = "corpus";
    unsigned train_count = 4, test_count = 20;
    double snr_db = 30.0;
    std::uint64_t seed = 1;
    app.add_option("-o,--out", out_dir, "output directory");
    app.add_option("--train", train_count, "training renditions per word");
    app.add_option("--test", test_count, "test renditions per word");
    app.add_option("--snr", snr_db, "white-noise SNR of the test renditions (dB)");
    app.add_option("--seed", seed, "base seed");
    CLI11_PARSE(app, argc, argv);

    fs::create_directories(out_dir);
    std::ofstream train_manifest(fs::path(out_dir) / "train.csv");
    std::ofstream test_manifest(fs::path(out_dir) / "test.csv");

    const auto& words = corpus::command_words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        const auto& word = words[w];
        for (unsigned i = 0; i < train_count; ++i) {
            const std::string name = slug(word.label) + "_train" + std::to_string(i) + ".wav";
            save_audio(corpus::synthesize_word(word, seed * 1000003 + w * 1000 + i),
                       fs::path(out_dir) / name);
            train_manifest << name << ',' << word.label << '\n';
        }
        corpus::RenderOptions noisy;
        noisy.snr_db = snr_db;
        for (unsigned i = 0; i < test_count; ++i) {
            const std::string name = slug(word.label) + "_test" + std::to_string(i) + ".wav";
            save_audio(corpus::synthesize_word(word, seed * 1000003 + w * 1000 + 500 + i, noisy),
                       fs::path(out_dir) / name);
            test_manifest << name << ',' << word.label << '\n';
        }
    }

    // Two seconds of room tone for `voicepilot calibrate`.
    corpus::RenderOptions tone;
    tone.total_s = 2.0;
    save_audio(corpus::synthesize_word(corpus::WordSpec{"silence", {}}, seed, tone),
               fs::path(out_dir) / "room_tone.wav");

    std::cout << "wrote " << words.size() * (train_count + test_count) + 1 << " files to "
              << out_dir << '\n';
    return 0;
}
