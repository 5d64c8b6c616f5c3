#include "voicepilot/error.hpp"

namespace voicepilot {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MalformedContainer: return "MalformedContainer";
    case ErrorKind::UnsupportedRate: return "UnsupportedRate";
    case ErrorKind::UnsupportedChannels: return "UnsupportedChannels";
    case ErrorKind::TooFewFrames: return "TooFewFrames";
    case ErrorKind::NoSpeech: return "NoSpeech";
    case ErrorKind::FrameTooShort: return "FrameTooShort";
    case ErrorKind::ZeroEnergyFrame: return "ZeroEnergyFrame";
    case ErrorKind::TooFewFramesForM: return "TooFewFramesForM";
    case ErrorKind::InconsistentTraining: return "InconsistentTraining";
    case ErrorKind::EmptyTemplateSet: return "EmptyTemplateSet";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::MixedDimensions: return "MixedDimensions";
    case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::CorruptEntry: return "CorruptEntry";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

} // namespace voicepilot
