#pragma once

#include "voicepilot/template_matcher.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace voicepilot {

inline constexpr std::uint16_t kVocabularyVersion = 1;

// Little-endian vocabulary file:
//
//   "AVTP" | u16 version | u16 p | u16 m | u16 entry count
//   per entry:
//     u16 label length | UTF-8 label | u8 trained_from |
//     p x m f64, row-major (coefficient i, segment k) | u32 CRC-32
//
// Each entry's CRC covers the 12 header bytes followed by the entry bytes up
// to the CRC, so damage to the shared header is caught as well.
std::vector<std::uint8_t> encode_vocabulary(std::span<const Template> templates);

// Throws Error{UnsupportedVersion} or Error{CorruptEntry}.
std::vector<Template> decode_vocabulary(std::span<const std::uint8_t> bytes);

// Written to a sibling temp file and renamed into place, so a failed write
// leaves any previous file intact. Throws Error{MixedDimensions | IoFailure |
// InvalidArgument}.
void save_vocabulary(std::span<const Template> templates, const std::filesystem::path& path);

std::vector<Template> load_vocabulary(const std::filesystem::path& path);

// Human-readable dump, one block per template.
void export_text(std::span<const Template> templates, std::ostream& out);

} // namespace voicepilot
