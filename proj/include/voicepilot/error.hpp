#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voicepilot {

enum class ErrorKind {
    InvalidArgument,
    MalformedContainer,
    UnsupportedRate,
    UnsupportedChannels,
    TooFewFrames,
    NoSpeech,
    FrameTooShort,
    ZeroEnergyFrame,
    TooFewFramesForM,
    InconsistentTraining,
    EmptyTemplateSet,
    OutOfRange,
    IoFailure,
    MixedDimensions,
    UnsupportedVersion,
    CorruptEntry,
    InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and the CLI
// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind),
          detail_(detail) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

} // namespace voicepilot
