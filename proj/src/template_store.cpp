#include "voicepilot/template_store.hpp"

#include "voicepilot/error.hpp"
#include "voicepilot/lpcc_features.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <ostream>
#include <set>
#include <string>

namespace voicepilot {

namespace {

constexpr char kMagic[4] = {'A', 'V', 'T', 'P'};
constexpr std::size_t kHeaderSize = 12;

class Writer {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u16(std::uint16_t v) {
        u8(static_cast<std::uint8_t>(v & 0xFF));
        u8(static_cast<std::uint8_t>(v >> 8));
    }
    void u32(std::uint32_t v) {
        for (int s = 0; s < 32; s += 8) u8(static_cast<std::uint8_t>((v >> s) & 0xFF));
    }
    void f64(double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int s = 0; s < 64; s += 8) u8(static_cast<std::uint8_t>((bits >> s) & 0xFF));
    }
    void raw(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }
    std::size_t size() const { return bytes_.size(); }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    void need(std::size_t n) const {
        if (remaining() < n) {
            throw Error(ErrorKind::CorruptEntry, "vocabulary file is truncated");
        }
    }
    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }
    std::string str(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::span<const std::uint8_t> header, std::span<const std::uint8_t> entry) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, header.data(), static_cast<uInt>(header.size()));
    crc = crc32(crc, entry.data(), static_cast<uInt>(entry.size()));
    return static_cast<std::uint32_t>(crc);
}

} // namespace

std::vector<std::uint8_t> encode_vocabulary(std::span<const Template> templates) {
    if (templates.empty()) {
        throw Error(ErrorKind::InvalidArgument, "refusing to save an empty vocabulary");
    }
    const std::size_t p = templates.front().features.order();
    const std::size_t m = templates.front().features.segments();
    std::set<std::string> labels;
    for (const auto& t : templates) {
        if (t.features.order() != p || t.features.segments() != m) {
            throw Error(ErrorKind::MixedDimensions,
                        "template '" + t.label + "' is " + std::to_string(t.features.order()) +
                            "x" + std::to_string(t.features.segments()) + ", expected " +
                            std::to_string(p) + "x" + std::to_string(m));
        }
        if (t.label.empty() || t.label.size() > std::numeric_limits<std::uint16_t>::max()) {
            throw Error(ErrorKind::InvalidArgument, "template labels must be 1..65535 bytes");
        }
        if (!labels.insert(t.label).second) {
            throw Error(ErrorKind::InvalidArgument, "duplicate label '" + t.label + "'");
        }
        if (t.trained_from > std::numeric_limits<std::uint8_t>::max()) {
            throw Error(ErrorKind::InvalidArgument, "trained_from does not fit in one byte");
        }
    }
    if (p == 0 || p > kMaxLpcOrder || m == 0 || m > std::numeric_limits<std::uint16_t>::max() ||
        templates.size() > std::numeric_limits<std::uint16_t>::max()) {
        throw Error(ErrorKind::InvalidArgument, "template dimensions out of range");
    }

    Writer w;
    w.raw(kMagic, sizeof kMagic);
    w.u16(kVocabularyVersion);
    w.u16(static_cast<std::uint16_t>(p));
    w.u16(static_cast<std::uint16_t>(m));
    w.u16(static_cast<std::uint16_t>(templates.size()));

    for (const auto& t : templates) {
        const std::size_t entry_start = w.size();
        w.u16(static_cast<std::uint16_t>(t.label.size()));
        w.raw(t.label.data(), t.label.size());
        w.u8(static_cast<std::uint8_t>(t.trained_from));
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t k = 0; k < m; ++k) w.f64(t.features.at(i, k));
        }
        const auto& bytes = w.bytes();
        const std::span<const std::uint8_t> all(bytes);
        w.u32(crc_of(all.first(kHeaderSize), all.subspan(entry_start)));
    }
    return std::move(w.bytes());
}

std::vector<Template> decode_vocabulary(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    if (r.remaining() < kHeaderSize || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw Error(ErrorKind::CorruptEntry, "missing AVTP header");
    }
    r.str(sizeof kMagic);
    const std::uint16_t version = r.u16();
    if (version != kVocabularyVersion) {
        throw Error(ErrorKind::UnsupportedVersion, "vocabulary version " + std::to_string(version));
    }
    const std::size_t p = r.u16();
    const std::size_t m = r.u16();
    const std::size_t count = r.u16();
    if (p == 0 || p > kMaxLpcOrder || m == 0 || count == 0) {
        throw Error(ErrorKind::CorruptEntry, "header dimensions out of range");
    }
    const auto header = bytes.first(kHeaderSize);

    std::vector<Template> out;
    out.reserve(count);
    std::set<std::string> labels;
    for (std::size_t e = 0; e < count; ++e) {
        const std::size_t entry_start = r.pos();
        const std::size_t label_len = r.u16();
        // Size check up front so a damaged length never drives a large allocation.
        r.need(label_len + 1 + 8 * p * m + 4);
        Template t;
        t.label = r.str(label_len);
        t.trained_from = r.u8();
        t.features = KeyFeatures(p, m);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t k = 0; k < m; ++k) t.features.at(i, k) = r.f64();
        }
        const std::size_t entry_end = r.pos();
        const std::uint32_t stored = r.u32();
        if (stored != crc_of(header, bytes.subspan(entry_start, entry_end - entry_start))) {
            throw Error(ErrorKind::CorruptEntry, "checksum mismatch in entry " + std::to_string(e));
        }
        if (t.label.empty() || !labels.insert(t.label).second) {
            throw Error(ErrorKind::CorruptEntry, "empty or duplicate label in entry " +
                                                     std::to_string(e));
        }
        out.push_back(std::move(t));
    }
    if (r.remaining() != 0) {
        throw Error(ErrorKind::CorruptEntry, "trailing bytes after the last entry");
    }
    return out;
}

void save_vocabulary(std::span<const Template> templates, const std::filesystem::path& path) {
    const auto bytes = encode_vocabulary(templates);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw Error(ErrorKind::IoFailure, "cannot create " + tmp.string());
        }
        file.write(reinterpret_cast<const char*>(bytes.data()),
                   static_cast<std::streamsize>(bytes.size()));
        file.flush();
        if (!file) {
            throw Error(ErrorKind::IoFailure, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::IoFailure, "cannot replace " + path.string());
    }
}

std::vector<Template> load_vocabulary(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorKind::IoFailure, "cannot open vocabulary " + path.string());
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                          std::istreambuf_iterator<char>());
    return decode_vocabulary(bytes);
}

void export_text(std::span<const Template> templates, std::ostream& out) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    for (const auto& t : templates) {
        out << "template " << t.label << '\n'
            << "trained_from " << t.trained_from << '\n'
            << "order " << t.features.order() << '\n'
            << "segments " << t.features.segments() << '\n';
        for (std::size_t k = 0; k < t.features.segments(); ++k) {
            out << "segment " << k << ':';
            for (std::size_t i = 0; i < t.features.order(); ++i) {
                out << ' ' << t.features.at(i, k);
            }
            out << '\n';
        }
        out << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

} // namespace voicepilot
